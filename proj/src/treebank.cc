#include "depparse/treebank.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "depparse/error.h"
#include "depparse/rng.h"

namespace depparse {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

int parse_int(std::string_view field, std::size_t line_no, const char* what) {
  int value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError("line " + std::to_string(line_no) + ": malformed " + what +
                      " '" + std::string(field) + "'");
  }
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> sorted_by_frequency(const std::map<std::string, std::size_t>& counts,
                                             std::size_t min_freq) {
  std::vector<std::pair<std::string, std::size_t>> entries;
  for (const auto& [key, n] : counts) {
    if (n >= min_freq) entries.emplace_back(key, n);
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (auto& e : entries) out.push_back(std::move(e.first));
  return out;
}

}  // namespace

Annotation gold_annotation(const Sentence& sentence) {
  Annotation a;
  for (const auto& t : sentence.tokens) {
    a.heads.push_back(t.head);
    a.labels.push_back(t.label);
  }
  return a;
}

std::vector<Sentence> parse_conll(std::string_view text) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::vector<std::size_t> head_lines;

  auto flush = [&]() {
    if (current.empty()) return;
    const int n = static_cast<int>(current.size());
    for (std::size_t i = 0; i < current.tokens.size(); ++i) {
      const Token& t = current.tokens[i];
      if (t.index != static_cast<int>(i) + 1) {
        throw FormatError("line " + std::to_string(head_lines[i]) + ": token index " +
                          std::to_string(t.index) + " out of sequence");
      }
      if (t.head < 0 || t.head > n || t.head == t.index) {
        throw FormatError("line " + std::to_string(head_lines[i]) + ": head " +
                          std::to_string(t.head) + " out of range for sentence of length " +
                          std::to_string(n));
      }
    }
    sentences.push_back(std::move(current));
    current = Sentence{};
    head_lines.clear();
  };

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      flush();
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '#') continue;

    const auto cols = split(line, '\t');
    if (cols.size() < 8) {
      throw FormatError("line " + std::to_string(line_no) + ": expected at least 8 columns, got " +
                        std::to_string(cols.size()));
    }
    // Multiword ranges (1-2) and empty nodes (1.1) are not syntactic words.
    if (cols[0].find('-') != std::string_view::npos || cols[0].find('.') != std::string_view::npos) {
      continue;
    }
    Token tok;
    tok.index = parse_int(cols[0], line_no, "token index");
    tok.form = std::string(cols[1]);
    tok.pos = std::string(cols[4] == "_" ? cols[3] : cols[4]);
    tok.head = parse_int(cols[6], line_no, "head");
    tok.label = std::string(cols[7]);
    current.tokens.push_back(std::move(tok));
    head_lines.push_back(line_no);
    if (end == text.size()) break;
  }
  flush();
  return sentences;
}

std::vector<Sentence> read_conll_file(const std::filesystem::path& path) {
  try {
    return parse_conll(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string write_conll(const std::vector<Sentence>& sentences,
                        const std::vector<Annotation>& annotations) {
  if (sentences.size() != annotations.size()) {
    throw Error("write_conll: " + std::to_string(sentences.size()) + " sentences but " +
                std::to_string(annotations.size()) + " annotations");
  }
  std::string out;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const Sentence& sent = sentences[s];
    const Annotation& ann = annotations[s];
    if (ann.heads.size() != sent.size() || ann.labels.size() != sent.size()) {
      throw Error("write_conll: sentence " + std::to_string(s) + " has " +
                  std::to_string(sent.size()) + " tokens but " +
                  std::to_string(ann.heads.size()) + " predicted heads and " +
                  std::to_string(ann.labels.size()) + " labels");
    }
    for (std::size_t i = 0; i < sent.size(); ++i) {
      const Token& t = sent.tokens[i];
      out += std::to_string(i + 1);
      out += '\t';
      out += t.form;
      out += "\t_\t";
      out += t.pos;
      out += '\t';
      out += t.pos;
      out += "\t_\t";
      out += std::to_string(ann.heads[i]);
      out += '\t';
      out += ann.labels[i];
      out += "\t_\t_\n";
    }
    out += '\n';
  }
  return out;
}

void write_conll_file(const std::filesystem::path& path, const std::vector<Sentence>& sentences,
                      const std::vector<Annotation>& annotations) {
  const std::string text = write_conll(sentences, annotations);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

bool is_projective(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  for (int d = 1; d <= n; ++d) {
    const int h = heads[static_cast<std::size_t>(d - 1)];
    if (h < 0 || h > n || h == d) return false;
  }
  // Every token must reach ROOT; a walk longer than n steps means a cycle.
  for (int d = 1; d <= n; ++d) {
    int cur = d;
    int steps = 0;
    while (cur != 0 && steps <= n) {
      cur = heads[static_cast<std::size_t>(cur - 1)];
      ++steps;
    }
    if (cur != 0) return false;
  }
  for (int d1 = 1; d1 <= n; ++d1) {
    const int h1 = heads[static_cast<std::size_t>(d1 - 1)];
    const int l1 = std::min(h1, d1), r1 = std::max(h1, d1);
    for (int d2 = d1 + 1; d2 <= n; ++d2) {
      const int h2 = heads[static_cast<std::size_t>(d2 - 1)];
      const int l2 = std::min(h2, d2), r2 = std::max(h2, d2);
      if ((l1 < l2 && l2 < r1 && r1 < r2) || (l2 < l1 && l1 < r2 && r2 < r1)) return false;
    }
  }
  return true;
}

bool is_projective(const Sentence& sentence) {
  std::vector<int> heads;
  heads.reserve(sentence.size());
  for (const auto& t : sentence.tokens) heads.push_back(t.head);
  return is_projective(heads);
}

Vocab::Vocab(std::vector<std::string> words, std::vector<std::string> tags,
             std::vector<std::string> labels)
    : words_(std::move(words)), tags_(std::move(tags)), labels_(std::move(labels)) {
  if (words_.size() < 3 || words_[words_.size() - 3] != kRoot ||
      words_[words_.size() - 2] != kNull || words_.back() != kUnk) {
    throw FormatError("word vocabulary must end with ROOT, NULL, UNK");
  }
  for (const auto* list : {&tags_, &labels_}) {
    if (list->size() < 2 || (*list)[list->size() - 2] != kRoot || list->back() != kNull) {
      throw FormatError("tag and label vocabularies must end with ROOT, NULL");
    }
  }
  auto index = [](const std::vector<std::string>& list, std::unordered_map<std::string, int>& map) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!map.emplace(list[i], static_cast<int>(i)).second) {
        throw FormatError("duplicate vocabulary entry '" + list[i] + "'");
      }
    }
  };
  index(words_, word_index_);
  index(tags_, tag_index_);
  index(labels_, label_index_);
}

int Vocab::word_id(std::string_view form) const {
  if (auto it = word_index_.find(std::string(form)); it != word_index_.end()) return it->second;
  if (auto it = word_index_.find(to_lower(form)); it != word_index_.end()) return it->second;
  return word_unk();
}

int Vocab::find_tag(std::string_view tag) const {
  auto it = tag_index_.find(std::string(tag));
  return it == tag_index_.end() ? -1 : it->second;
}

int Vocab::find_label(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  return it == label_index_.end() ? -1 : it->second;
}

std::string Vocab::serialize() const {
  std::string out;
  auto section = [&out](const char* name, const std::vector<std::string>& list) {
    out += name;
    out += ' ';
    out += std::to_string(list.size());
    out += '\n';
    for (const auto& s : list) {
      out += s;
      out += '\n';
    }
  };
  section("words", words_);
  section("tags", tags_);
  section("labels", labels_);
  return out;
}

Vocab Vocab::deserialize(std::string_view text) {
  std::istringstream in{std::string(text)};
  auto section = [&in](const std::string& name) {
    std::string header;
    if (!std::getline(in, header)) throw FormatError("vocabulary: missing section " + name);
    const auto fields = split(header, ' ');
    if (fields.size() != 2 || fields[0] != name) {
      throw FormatError("vocabulary: expected section '" + name + "', got '" + header + "'");
    }
    const int n = parse_int(fields[1], 0, "section size");
    std::vector<std::string> list(static_cast<std::size_t>(n));
    for (auto& s : list) {
      if (!std::getline(in, s)) throw FormatError("vocabulary: truncated section " + name);
    }
    return list;
  };
  auto words = section("words");
  auto tags = section("tags");
  auto labels = section("labels");
  return Vocab(std::move(words), std::move(tags), std::move(labels));
}

Vocab build_vocab(const std::vector<Sentence>& sentences, std::size_t min_word_freq) {
  if (min_word_freq < 1) throw Error("build_vocab: min_word_freq must be >= 1");
  std::map<std::string, std::size_t> words, tags, labels;
  std::size_t tokens = 0;
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      ++words[t.form];
      ++tags[t.pos];
      ++labels[t.label];
      ++tokens;
    }
  }
  if (tokens == 0) throw Error("build_vocab: empty corpus");
  for (auto* m : {&words, &tags, &labels}) {
    m->erase(std::string(Vocab::kRoot));
    m->erase(std::string(Vocab::kNull));
    m->erase(std::string(Vocab::kUnk));
  }
  auto word_list = sorted_by_frequency(words, min_word_freq);
  auto tag_list = sorted_by_frequency(tags, 1);
  auto label_list = sorted_by_frequency(labels, 1);
  for (auto* list : {&word_list, &tag_list, &label_list}) {
    list->emplace_back(Vocab::kRoot);
    list->emplace_back(Vocab::kNull);
  }
  word_list.emplace_back(Vocab::kUnk);
  return Vocab(std::move(word_list), std::move(tag_list), std::move(label_list));
}

namespace {

struct SyntheticGrammar {
  std::vector<int> tag;       // per word
  std::vector<int> priority;  // per word; a span's head is its leftmost highest-priority word
};

SyntheticGrammar make_grammar(std::size_t vocab_size) {
  SyntheticGrammar g;
  const std::size_t num_tags = std::clamp<std::size_t>(vocab_size / 5, 1, 12);
  // The grammar depends on the vocabulary size only, so corpora drawn with
  // different seeds share it. Heads follow the tag ranking.
  Rng rng(0x5eed0000ULL + vocab_size);
  std::vector<int> rank(num_tags);
  std::iota(rank.begin(), rank.end(), 0);
  rng.shuffle(rank.begin(), rank.end());
  g.tag.resize(vocab_size);
  g.priority.resize(vocab_size);
  for (std::size_t w = 0; w < vocab_size; ++w) {
    g.tag[w] = static_cast<int>(w % num_tags);
    g.priority[w] = rank[static_cast<std::size_t>(g.tag[w])];
  }
  return g;
}

void attach_span(const std::vector<int>& priority, int lo, int hi, int parent,
                 std::vector<int>& heads) {
  if (lo > hi) return;
  int best = lo;
  for (int i = lo + 1; i <= hi; ++i) {
    if (priority[static_cast<std::size_t>(i - 1)] > priority[static_cast<std::size_t>(best - 1)]) best = i;
  }
  heads[static_cast<std::size_t>(best - 1)] = parent;
  attach_span(priority, lo, best - 1, best, heads);
  attach_span(priority, best + 1, hi, best, heads);
}

}  // namespace

std::vector<Sentence> generate_synthetic(const SyntheticOptions& options) {
  if (options.max_len < 1) throw Error("generate_synthetic: max_len must be >= 1");
  if (options.vocab_size < 1) throw Error("generate_synthetic: vocab_size must be >= 1");
  const SyntheticGrammar grammar = make_grammar(options.vocab_size);
  Rng rng(options.seed);
  std::vector<Sentence> out;
  out.reserve(options.num_sentences);
  for (std::size_t s = 0; s < options.num_sentences; ++s) {
    const int n = 1 + static_cast<int>(rng.below(options.max_len));
    std::vector<int> words(static_cast<std::size_t>(n));
    std::vector<int> priority(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      words[static_cast<std::size_t>(i)] = static_cast<int>(rng.below(options.vocab_size));
      priority[static_cast<std::size_t>(i)] = grammar.priority[static_cast<std::size_t>(words[static_cast<std::size_t>(i)])];
    }
    std::vector<int> heads(static_cast<std::size_t>(n), 0);
    attach_span(priority, 1, n, 0, heads);

    Sentence sent;
    for (int i = 1; i <= n; ++i) {
      const auto w = static_cast<std::size_t>(words[static_cast<std::size_t>(i - 1)]);
      Token t;
      t.index = i;
      t.form = "w" + std::to_string(w);
      t.pos = "T" + std::to_string(grammar.tag[w]);
      t.head = heads[static_cast<std::size_t>(i - 1)];
      if (t.head == 0) {
        t.label = "root";
      } else {
        t.label = "dep" + std::to_string(grammar.tag[w] % 3) + (i < t.head ? "_L" : "_R");
      }
      sent.tokens.push_back(std::move(t));
    }
    out.push_back(std::move(sent));
  }
  return out;
}

}  // namespace depparse
