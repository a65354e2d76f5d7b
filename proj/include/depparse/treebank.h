#ifndef DEPPARSE_TREEBANK_H_
#define DEPPARSE_TREEBANK_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace depparse {

struct Token {
  int index = 1;     // 1-based position in the sentence
  std::string form;
  std::string pos;   // tag used by the model
  int head = 0;      // 0 = ROOT
  std::string label;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  bool operator==(const Sentence&) const = default;
};

// Predicted (or gold) annotation of one sentence; heads[i] and labels[i]
// belong to token i + 1.
struct Annotation {
  std::vector<int> heads;
  std::vector<std::string> labels;

  bool operator==(const Annotation&) const = default;
};

Annotation gold_annotation(const Sentence& sentence);

// Reads CoNLL-X (or CoNLL-U) text. Comment lines and multiword ranges are
// skipped. The tag comes from column 5 unless it is "_", then column 4.
// Throws FormatError naming the offending line.
std::vector<Sentence> parse_conll(std::string_view text);
std::vector<Sentence> read_conll_file(const std::filesystem::path& path);

// Writes the sentences with the supplied heads and labels in 10-column
// CoNLL-X. Throws if the annotations do not align with the tokens.
std::string write_conll(const std::vector<Sentence>& sentences,
                        const std::vector<Annotation>& annotations);
void write_conll_file(const std::filesystem::path& path,
                      const std::vector<Sentence>& sentences,
                      const std::vector<Annotation>& annotations);

// True iff the heads form a tree rooted at ROOT with no crossing arcs.
bool is_projective(const Sentence& sentence);
bool is_projective(const std::vector<int>& heads);

// Word, tag and label vocabularies. Corpus entries come first (most frequent
// first, ties broken lexicographically), followed by the special entries.
// Words end with ROOT, NULL, UNK; tags and labels end with ROOT, NULL.
class Vocab {
 public:
  static constexpr std::string_view kRoot = "<ROOT>";
  static constexpr std::string_view kNull = "<NULL>";
  static constexpr std::string_view kUnk = "<UNK>";

  Vocab() = default;
  Vocab(std::vector<std::string> words, std::vector<std::string> tags,
        std::vector<std::string> labels);

  std::size_t num_words() const { return words_.size(); }  // incl. specials
  std::size_t num_tags() const { return tags_.size(); }    // incl. specials
  std::size_t num_label_embeddings() const { return labels_.size(); }
  // Real dependency labels only; the output layer has 2 * num_labels() + 1 units.
  std::size_t num_labels() const { return labels_.size() - 2; }

  int word_root() const { return static_cast<int>(words_.size()) - 3; }
  int word_null() const { return static_cast<int>(words_.size()) - 2; }
  int word_unk() const { return static_cast<int>(words_.size()) - 1; }
  int tag_root() const { return static_cast<int>(tags_.size()) - 2; }
  int tag_null() const { return static_cast<int>(tags_.size()) - 1; }
  int label_root() const { return static_cast<int>(labels_.size()) - 2; }
  int label_null() const { return static_cast<int>(labels_.size()) - 1; }

  // Exact match, then lowercase, then UNK.
  int word_id(std::string_view form) const;
  // -1 when the tag/label is unknown.
  int find_tag(std::string_view tag) const;
  int find_label(std::string_view label) const;

  const std::string& word(int id) const { return words_.at(static_cast<std::size_t>(id)); }
  const std::string& tag(int id) const { return tags_.at(static_cast<std::size_t>(id)); }
  const std::string& label(int id) const { return labels_.at(static_cast<std::size_t>(id)); }

  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::string>& tags() const { return tags_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::string serialize() const;
  static Vocab deserialize(std::string_view text);

  bool operator==(const Vocab& other) const {
    return words_ == other.words_ && tags_ == other.tags_ && labels_ == other.labels_;
  }

 private:
  std::vector<std::string> words_, tags_, labels_;
  std::unordered_map<std::string, int> word_index_, tag_index_, label_index_;
};

// Throws on an empty corpus or min_word_freq < 1.
Vocab build_vocab(const std::vector<Sentence>& sentences, std::size_t min_word_freq = 2);

struct SyntheticOptions {
  std::size_t num_sentences = 100;
  std::size_t max_len = 10;
  std::size_t vocab_size = 50;
  std::uint64_t seed = 1;
};

// Generates a projective treebank. Every word has a fixed tag and priority;
// the head of each span is its highest-priority word, so trees are a
// deterministic (learnable) function of the word sequence.
std::vector<Sentence> generate_synthetic(const SyntheticOptions& options);

}  // namespace depparse

#endif  // DEPPARSE_TREEBANK_H_
