#include <functional>

#include "depparse/error.h"
#include "depparse/transition_system.h"
#include "doctest.h"
#include "unit/test_util.h"

using namespace depparse;

namespace {

Configuration from_sequence(std::size_t n, const std::vector<Transition>& seq) {
  Configuration c = initial_config(n);
  for (const auto& t : seq) c = c.apply(t);
  return c;
}

}  // namespace

TEST_CASE("initial configuration") {
  const Configuration c = initial_config(2);
  CHECK(c.stack() == std::vector<int>{0});
  CHECK(c.buffer() == std::vector<int>{1, 2});
  CHECK(c.arcs().empty());
  CHECK(initial_config(1).buffer() == std::vector<int>{1});
  CHECK_THROWS_AS(initial_config(0), TransitionError);
}

TEST_CASE("legal transitions") {
  using K = TransitionKind;
  CHECK(legal_transitions(initial_config(2)) == std::vector<K>{K::kShift});
  // stack [0, 3], buffer empty
  const auto c = from_sequence(3, {Transition::shift(), Transition::shift(), Transition::left(0),
                                   Transition::shift(), Transition::left(0)});
  REQUIRE(c.stack() == std::vector<int>{0, 3});
  REQUIRE(c.buffer_empty());
  CHECK(legal_transitions(c) == std::vector<K>{K::kRightArc});
  const auto done = c.apply(Transition::right(0));
  CHECK(done.terminal());
  CHECK(legal_transitions(done).empty());
}

TEST_CASE("apply LEFT_ARC and RIGHT_ARC") {
  const auto c = from_sequence(2, {Transition::shift(), Transition::shift()});
  REQUIRE(c.stack() == std::vector<int>{0, 1, 2});
  const auto left = c.apply(Transition::left(4));
  CHECK(left.stack() == std::vector<int>{0, 2});
  CHECK(left.arcs() == std::vector<Arc>{{2, 1, 4}});
  const auto right = c.apply(Transition::right(4));
  CHECK(right.stack() == std::vector<int>{0, 1});
  CHECK(right.arcs() == std::vector<Arc>{{1, 2, 4}});
  // The input configuration is untouched.
  CHECK(c.stack() == std::vector<int>{0, 1, 2});
  CHECK(c.arcs().empty());

  const auto full = from_sequence(1, {Transition::shift()});
  CHECK_THROWS_AS(full.apply(Transition::shift()), TransitionError);
  CHECK_THROWS_AS(initial_config(1).apply(Transition::right(0)), TransitionError);
  CHECK_THROWS_AS(full.apply(Transition::left(0)), TransitionError);  // would attach ROOT
}

TEST_CASE("static oracle on small fixtures") {
  const Sentence s = testing::he_sleeps();
  const Vocab v = build_vocab({s}, 1);
  const int nsubj = v.find_label("nsubj"), root = v.find_label("root");
  const auto seq = oracle_sequence(gold_tree(s, v));
  CHECK(seq == std::vector<Transition>{Transition::shift(), Transition::shift(), Transition::left(nsubj),
                                       Transition::right(root)});

  Sentence one;
  one.tokens.push_back({1, "Hi", "UH", 0, "root"});
  const Vocab v1 = build_vocab({one}, 1);
  CHECK(oracle_sequence(gold_tree(one, v1)) ==
        std::vector<Transition>{Transition::shift(), Transition::right(v1.find_label("root"))});
}

TEST_CASE("static oracle rejects non-projective trees") {
  Sentence s;
  s.tokens.push_back({1, "a", "X", 3, "d"});
  s.tokens.push_back({2, "b", "X", 4, "d"});
  s.tokens.push_back({3, "c", "X", 0, "root"});
  s.tokens.push_back({4, "d", "X", 3, "d"});
  const Vocab v = build_vocab({s}, 1);
  CHECK_THROWS_AS(oracle_sequence(gold_tree(s, v)), TransitionError);
}

TEST_CASE("oracle sequences reconstruct gold trees") {
  const auto corpus = generate_synthetic({1000, 20, 50, 99});
  const Vocab v = build_vocab(corpus, 1);
  for (const auto& s : corpus) {
    const GoldTree gold = gold_tree(s, v);
    const auto seq = oracle_sequence(gold);
    REQUIRE(seq.size() == 2 * s.size());
    const GoldTree rebuilt = transitions_to_tree(seq, s.size());
    CHECK(rebuilt.heads == gold.heads);
    CHECK(rebuilt.labels == gold.labels);
  }
}

TEST_CASE("transitions_to_tree rejects short, empty and illegal sequences") {
  CHECK_THROWS_AS(transitions_to_tree({}, 1), TransitionError);
  CHECK_THROWS_AS(transitions_to_tree({Transition::shift()}, 1), TransitionError);
  try {
    transitions_to_tree({Transition::shift(), Transition::shift()}, 1);
    FAIL("expected an error");
  } catch (const TransitionError& e) {
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
}

TEST_CASE("every complete legal sequence has n shifts and n arcs (enumeration, n <= 4)") {
  for (std::size_t n = 1; n <= 4; ++n) {
    std::size_t complete = 0;
    std::function<void(const Configuration&, std::size_t, std::size_t)> walk =
        [&](const Configuration& c, std::size_t shifts, std::size_t arcs) {
          // Conservation: |stack| + |buffer| + |arcs| = n + 1.
          REQUIRE(c.stack().size() + c.buffer_size() + c.num_arcs() == n + 1);
          REQUIRE(c.stack().front() == 0);
          if (c.terminal()) {
            ++complete;
            CHECK(shifts == n);
            CHECK(arcs == n);
            std::vector<int> heads;
            for (int d = 1; d <= static_cast<int>(n); ++d) heads.push_back(c.head(d));
            CHECK(is_projective(heads));
            return;
          }
          for (auto kind : legal_transitions(c)) {
            const Transition t{kind, kind == TransitionKind::kShift ? -1 : 0};
            walk(c.apply(t), shifts + (kind == TransitionKind::kShift), arcs + (kind != TransitionKind::kShift));
          }
        };
    walk(initial_config(n), 0, 0);
    CHECK(complete > 0);
  }
}

TEST_CASE("transition index layout round trips") {
  for (std::size_t labels : {1u, 3u, 40u}) {
    for (int k = 0; k < static_cast<int>(num_transitions(labels)); ++k) {
      CHECK(Transition::from_index(k, labels).index(labels) == k);
    }
    CHECK(Transition::shift().index(labels) == 0);
    CHECK(Transition::left(0).index(labels) == 1);
    CHECK(Transition::right(0).index(labels) == static_cast<int>(labels) + 1);
    CHECK_THROWS(Transition::from_index(static_cast<int>(num_transitions(labels)), labels));
  }
}

TEST_CASE("left children are counted left of the head, right children right of it") {
  // Heads: 1->3, 2->3, 4->3, 5->4, 3->ROOT.
  Configuration c = initial_config(5);
  for (auto t : {Transition::shift(), Transition::shift(), Transition::shift(), Transition::left(0),
                 Transition::left(0), Transition::shift(), Transition::shift(), Transition::right(0),
                 Transition::right(0)}) {
    c = c.apply(t);
  }
  CHECK(c.leftmost_child(3, 1) == 1);
  CHECK(c.leftmost_child(3, 2) == 2);
  CHECK(c.leftmost_child(3, 3) == -1);
  CHECK(c.rightmost_child(3, 1) == 4);
  CHECK(c.rightmost_child(3, 2) == -1);
  CHECK(c.rightmost_child(4, 1) == 5);
  CHECK(c.leftmost_child(4, 1) == -1);
  CHECK(c.leftmost_child(-1, 1) == -1);
  CHECK(c.dependents(3) == std::vector<int>{1, 2, 4});
}
