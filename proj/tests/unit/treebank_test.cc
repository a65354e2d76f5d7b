#include <map>
#include <set>

#include "depparse/error.h"
#include "depparse/treebank.h"
#include "doctest.h"
#include "unit/test_util.h"

using namespace depparse;

namespace {

// Independent projectivity oracle: every token strictly inside an arc must
// descend from that arc's head, and the head graph must be a tree.
bool projective_by_descendants(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  auto head = [&](int d) { return heads[static_cast<std::size_t>(d - 1)]; };
  for (int d = 1; d <= n; ++d) {
    if (head(d) < 0 || head(d) > n || head(d) == d) return false;
  }
  auto descends = [&](int k, int h) {
    for (int steps = 0; steps <= n + 1; ++steps) {
      if (k == h) return true;
      if (k == 0) return false;
      k = head(k);
    }
    return false;
  };
  for (int d = 1; d <= n; ++d) {
    if (!descends(d, 0)) return false;
  }
  for (int d = 1; d <= n; ++d) {
    const int h = head(d);
    for (int k = std::min(h, d) + 1; k < std::max(h, d); ++k) {
      if (!descends(k, h)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("parse_conll maps the modeled columns") {
  const auto s = parse_conll("1\tHe\t_\tPRP\tPRP\t_\t2\tnsubj\t_\t_\n2\tsleeps\t_\tVBZ\tVBZ\t_\t0\troot\t_\t_\n");
  REQUIRE(s.size() == 1);
  CHECK(s[0] == testing::he_sleeps());
}

TEST_CASE("parse_conll handles empty input, comments, ranges and the tag fallback") {
  CHECK(parse_conll("").empty());
  CHECK(parse_conll("\n\n").empty());
  const std::string text =
      "# sent_id = 1\n"
      "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "1\tdo\t_\tVB\t_\t_\t0\troot\t_\t_\n"
      "2\tn't\t_\tRB\t_\t_\t1\tneg\t_\t_\n"
      "\n"
      "1\tHi\t_\tUH\tUH\t_\t0\troot\t_\t_\r\n";
  const auto s = parse_conll(text);
  REQUIRE(s.size() == 2);
  CHECK(s[0].size() == 2);
  CHECK(s[0].tokens[0].pos == "VB");
  CHECK(s[0].tokens[1].head == 1);
  CHECK(s[1].tokens[0].label == "root");
}

TEST_CASE("parse_conll rejects bad heads and indices with a line number") {
  const std::string out_of_range =
      "1\ta\t_\tX\tX\t_\t99\tdep\t_\t_\n2\tb\t_\tX\tX\t_\t0\troot\t_\t_\n";
  CHECK_THROWS_AS(parse_conll(out_of_range), FormatError);
  try {
    parse_conll("1\ta\t_\tX\tX\t_\tzz\tdep\t_\t_\n");
    FAIL("expected an error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_conll("x\ta\t_\tX\tX\t_\t0\troot\t_\t_\n"), FormatError);
  CHECK_THROWS_AS(parse_conll("1\ta\t_\tX\n"), FormatError);
}

TEST_CASE("write_conll round trips parsed sentences") {
  const auto corpus = generate_synthetic({50, 12, 30, 3});
  std::vector<Annotation> gold;
  for (const auto& s : corpus) gold.push_back(gold_annotation(s));
  CHECK(parse_conll(write_conll(corpus, gold)) == corpus);
  CHECK(write_conll({}, {}).empty());

  std::vector<Annotation> short_pred = gold;
  short_pred[3].heads.pop_back();
  CHECK_THROWS(write_conll(corpus, short_pred));
  CHECK_THROWS(write_conll(corpus, {}));
}

TEST_CASE("is_projective examples") {
  CHECK(is_projective(testing::he_sleeps()));
  CHECK(is_projective(std::vector<int>{0}));
  // Arc 3->1 covers token 2, whose head 4 lies outside the span.
  CHECK_FALSE(is_projective(std::vector<int>{3, 4, 0, 3}));
  CHECK_FALSE(projective_by_descendants({3, 4, 0, 3}));
  CHECK_FALSE(is_projective(std::vector<int>{2, 1}));  // cycle
  CHECK_FALSE(is_projective(std::vector<int>{1}));     // self loop
}

TEST_CASE("is_projective agrees with the descendant oracle on every head array up to n=5") {
  for (int n = 1; n <= 5; ++n) {
    std::vector<int> heads(static_cast<std::size_t>(n), 0);
    std::size_t total = 0, projective = 0;
    while (true) {
      const bool a = is_projective(heads);
      REQUIRE(a == projective_by_descendants(heads));
      ++total;
      projective += a;
      std::size_t i = 0;
      while (i < heads.size() && ++heads[i] > n) heads[i++] = 0;
      if (i == heads.size()) break;
    }
    CHECK(total == static_cast<std::size_t>(std::pow(n + 1, n)));
    CHECK(projective > 0);
  }
}

TEST_CASE("build_vocab frequency threshold and specials") {
  Sentence s;
  for (int i = 0; i < 3; ++i) s.tokens.push_back({i + 1, "a", "A", 0, "root"});
  s.tokens.push_back({4, "b", "B", 1, "dep"});
  const Vocab v = build_vocab({s}, 2);
  CHECK(v.words() == std::vector<std::string>{"a", "<ROOT>", "<NULL>", "<UNK>"});
  CHECK(v.word_id("b") == v.word_unk());
  CHECK(v.tags() == std::vector<std::string>{"A", "B", "<ROOT>", "<NULL>"});

  const Vocab all = build_vocab({s}, 1);
  CHECK(all.num_words() == 5);
  CHECK(all.word_id("b") == 1);
  CHECK_THROWS(build_vocab({}, 1));
  CHECK_THROWS(build_vocab({s}, 0));
}

TEST_CASE("label vocabulary size fixes the output layer") {
  Sentence s;
  s.tokens.push_back({1, "x", "X", 0, "root"});
  s.tokens.push_back({2, "y", "Y", 1, "obj"});
  s.tokens.push_back({3, "z", "Z", 1, "nmod"});
  const Vocab v = build_vocab({s}, 1);
  CHECK(v.num_labels() == 3);
  CHECK(num_transitions(v.num_labels()) == 7);
}

TEST_CASE("vocab ids are a bijection and survive serialization") {
  const auto corpus = generate_synthetic({200, 10, 40, 5});
  const Vocab v = build_vocab(corpus, 2);
  std::set<std::string> seen;
  for (int id = 0; id < static_cast<int>(v.num_words()); ++id) {
    CHECK(seen.insert(v.word(id)).second);
    if (id < v.word_root()) CHECK(v.word_id(v.word(id)) == id);
  }
  for (int id = 0; id < static_cast<int>(v.num_tags()); ++id) CHECK(v.find_tag(v.tag(id)) == id);
  for (int id = 0; id < static_cast<int>(v.num_label_embeddings()); ++id) CHECK(v.find_label(v.label(id)) == id);
  CHECK(Vocab::deserialize(v.serialize()) == v);
}

TEST_CASE("word lookup falls back to lowercase before UNK") {
  Sentence s;
  s.tokens.push_back({1, "the", "DT", 0, "root"});
  s.tokens.push_back({2, "The", "DT", 1, "dep"});
  s.tokens.push_back({3, "dog", "NN", 1, "dep"});
  const Vocab v = build_vocab({s}, 1);
  CHECK(v.word_id("The") != v.word_id("the"));
  CHECK(v.word_id("DOG") == v.word_id("dog"));
  CHECK(v.word_id("cat") == v.word_unk());
}

TEST_CASE("generate_synthetic is deterministic and projective") {
  const SyntheticOptions opt{100, 10, 50, 7};
  CHECK(generate_synthetic(opt) == generate_synthetic(opt));
  CHECK_FALSE(generate_synthetic(opt) == generate_synthetic({100, 10, 50, 8}));

  const auto big = generate_synthetic({10000, 20, 50, 11});
  std::size_t ok = 0;
  for (const auto& s : big) {
    ok += is_projective(s);
    CHECK(s.size() >= 1);
    CHECK(s.size() <= 20);
  }
  CHECK(ok == big.size());

  const auto one = generate_synthetic({1, 1, 5, 123});
  REQUIRE(one.size() == 1);
  REQUIRE(one[0].size() == 1);
  CHECK(one[0].tokens[0].head == 0);
}
