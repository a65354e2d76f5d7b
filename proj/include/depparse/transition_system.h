#ifndef DEPPARSE_TRANSITION_SYSTEM_H_
#define DEPPARSE_TRANSITION_SYSTEM_H_

#include <cstddef>
#include <string>
#include <vector>

#include "depparse/treebank.h"

namespace depparse {

enum class TransitionKind { kShift = 0, kLeftArc = 1, kRightArc = 2 };

struct Transition {
  TransitionKind kind = TransitionKind::kShift;
  int label = -1;  // label id; -1 for SHIFT

  static Transition shift() { return {TransitionKind::kShift, -1}; }
  static Transition left(int label) { return {TransitionKind::kLeftArc, label}; }
  static Transition right(int label) { return {TransitionKind::kRightArc, label}; }

  // Output-layer index: 0 = SHIFT, 1..L = LEFT_ARC, L+1..2L = RIGHT_ARC.
  int index(std::size_t num_labels) const;
  static Transition from_index(int index, std::size_t num_labels);

  std::string to_string() const;
  bool operator==(const Transition&) const = default;
};

inline std::size_t num_transitions(std::size_t num_labels) { return 2 * num_labels + 1; }

struct Arc {
  int head;
  int dependent;
  int label;
  bool operator==(const Arc&) const = default;
};

// Arc-standard parser state (stack, buffer, arcs). The buffer is always the
// contiguous suffix [buffer_front, n] of the sentence, so it is stored as an
// index. Treated as an immutable value: apply() returns a new configuration.
class Configuration {
 public:
  explicit Configuration(std::size_t sentence_len);

  std::size_t sentence_len() const { return n_; }
  const std::vector<int>& stack() const { return stack_; }
  std::vector<int> buffer() const;
  std::size_t buffer_size() const { return n_ + 1 - static_cast<std::size_t>(front_); }
  bool buffer_empty() const { return buffer_size() == 0; }
  std::size_t num_arcs() const { return num_arcs_; }
  bool terminal() const { return buffer_empty() && stack_.size() == 1; }

  // i-th element from the top of the stack (0 = top), -1 if absent.
  int stack_at(std::size_t i) const {
    return i < stack_.size() ? stack_[stack_.size() - 1 - i] : -1;
  }
  // i-th element of the buffer, -1 if absent.
  int buffer_at(std::size_t i) const {
    const std::size_t pos = static_cast<std::size_t>(front_) + i;
    return pos <= n_ ? static_cast<int>(pos) : -1;
  }

  // -1 when the token is unattached.
  int head(int token) const { return heads_[static_cast<std::size_t>(token)]; }
  int label(int token) const { return labels_[static_cast<std::size_t>(token)]; }

  // Dependents of `token` in increasing index order.
  std::vector<int> dependents(int token) const;
  // n-th leftmost dependent to the left of `token` / rightmost to its right
  // (n >= 1), -1 if absent.
  int leftmost_child(int token, int n = 1) const;
  int rightmost_child(int token, int n = 1) const;

  std::vector<Arc> arcs() const;

  bool can_shift() const { return !buffer_empty(); }
  bool can_left_arc() const { return stack_.size() >= 2 && stack_at(1) != 0; }
  bool can_right_arc() const { return stack_.size() >= 2; }
  bool is_legal(const Transition& t) const;

  // Throws TransitionError if `t` is illegal here.
  Configuration apply(const Transition& t) const;

  bool operator==(const Configuration&) const = default;

 private:
  void attach(int head, int dependent, int label);

  std::size_t n_ = 0;
  std::vector<int> stack_;
  int front_ = 1;
  std::vector<int> heads_;   // indexed by token, slot 0 unused
  std::vector<int> labels_;
  std::size_t num_arcs_ = 0;
};

// Throws TransitionError for sentence_len == 0.
Configuration initial_config(std::size_t sentence_len);

// Legal transition kinds in SHIFT, LEFT_ARC, RIGHT_ARC order.
std::vector<TransitionKind> legal_transitions(const Configuration& c);

inline Configuration apply(const Configuration& c, const Transition& t) { return c.apply(t); }

// Gold heads and label ids of a sentence, indexed by token (slot 0 unused).
struct GoldTree {
  std::vector<int> heads;
  std::vector<int> labels;
};

// Resolves gold label strings through the vocabulary. Throws if a label is
// unknown.
GoldTree gold_tree(const Sentence& sentence, const Vocab& vocab);

// Next transition on the gold path. Throws TransitionError when no
// gold-consistent transition exists (non-projective input).
Transition static_oracle(const Configuration& c, const GoldTree& gold);

// Full oracle sequence from the initial configuration.
std::vector<Transition> oracle_sequence(const GoldTree& gold);

// Replays a sequence and returns the resulting tree. Throws TransitionError
// naming the step if the sequence is illegal or does not terminate.
GoldTree transitions_to_tree(const std::vector<Transition>& sequence, std::size_t sentence_len);

}  // namespace depparse

#endif  // DEPPARSE_TRANSITION_SYSTEM_H_
