#include "depparse/transition_system.h"

#include "depparse/error.h"

namespace depparse {

int Transition::index(std::size_t num_labels) const {
  const int l = static_cast<int>(num_labels);
  switch (kind) {
    case TransitionKind::kShift:
      return 0;
    case TransitionKind::kLeftArc:
      return 1 + label;
    case TransitionKind::kRightArc:
      return 1 + l + label;
  }
  return -1;
}

Transition Transition::from_index(int index, std::size_t num_labels) {
  const int l = static_cast<int>(num_labels);
  if (index < 0 || index > 2 * l) {
    throw TransitionError("transition index " + std::to_string(index) + " out of range");
  }
  if (index == 0) return shift();
  if (index <= l) return left(index - 1);
  return right(index - 1 - l);
}

std::string Transition::to_string() const {
  switch (kind) {
    case TransitionKind::kShift:
      return "SHIFT";
    case TransitionKind::kLeftArc:
      return "LEFT_ARC(" + std::to_string(label) + ")";
    case TransitionKind::kRightArc:
      return "RIGHT_ARC(" + std::to_string(label) + ")";
  }
  return "?";
}

Configuration::Configuration(std::size_t sentence_len)
    : n_(sentence_len), stack_{0}, front_(1), heads_(sentence_len + 1, -1),
      labels_(sentence_len + 1, -1) {}

std::vector<int> Configuration::buffer() const {
  std::vector<int> out;
  for (int i = front_; i <= static_cast<int>(n_); ++i) out.push_back(i);
  return out;
}

std::vector<int> Configuration::dependents(int token) const {
  std::vector<int> out;
  for (std::size_t d = 1; d <= n_; ++d) {
    if (heads_[d] == token) out.push_back(static_cast<int>(d));
  }
  return out;
}

int Configuration::leftmost_child(int token, int n) const {
  if (token < 0) return -1;
  for (int d = 1; d < token; ++d) {
    if (heads_[static_cast<std::size_t>(d)] == token && --n == 0) return d;
  }
  return -1;
}

int Configuration::rightmost_child(int token, int n) const {
  if (token < 0) return -1;
  for (int d = static_cast<int>(n_); d > token; --d) {
    if (heads_[static_cast<std::size_t>(d)] == token && --n == 0) return d;
  }
  return -1;
}

std::vector<Arc> Configuration::arcs() const {
  std::vector<Arc> out;
  for (std::size_t d = 1; d <= n_; ++d) {
    if (heads_[d] >= 0) out.push_back({heads_[d], static_cast<int>(d), labels_[d]});
  }
  return out;
}

bool Configuration::is_legal(const Transition& t) const {
  switch (t.kind) {
    case TransitionKind::kShift:
      return can_shift();
    case TransitionKind::kLeftArc:
      return can_left_arc();
    case TransitionKind::kRightArc:
      return can_right_arc();
  }
  return false;
}

void Configuration::attach(int head, int dependent, int label) {
  heads_[static_cast<std::size_t>(dependent)] = head;
  labels_[static_cast<std::size_t>(dependent)] = label;
  ++num_arcs_;
}

Configuration Configuration::apply(const Transition& t) const {
  if (!is_legal(t)) {
    throw TransitionError("illegal transition " + t.to_string() + " (stack size " +
                          std::to_string(stack_.size()) + ", buffer size " +
                          std::to_string(buffer_size()) + ")");
  }
  if (t.kind != TransitionKind::kShift && t.label < 0) {
    throw TransitionError("arc transition without a label");
  }
  Configuration next = *this;
  switch (t.kind) {
    case TransitionKind::kShift:
      next.stack_.push_back(next.front_++);
      break;
    case TransitionKind::kLeftArc: {
      const int s0 = stack_at(0), s1 = stack_at(1);
      next.attach(s0, s1, t.label);
      next.stack_.erase(next.stack_.end() - 2);
      break;
    }
    case TransitionKind::kRightArc: {
      const int s0 = stack_at(0), s1 = stack_at(1);
      next.attach(s1, s0, t.label);
      next.stack_.pop_back();
      break;
    }
  }
  return next;
}

Configuration initial_config(std::size_t sentence_len) {
  if (sentence_len == 0) throw TransitionError("empty sentence");
  return Configuration(sentence_len);
}

std::vector<TransitionKind> legal_transitions(const Configuration& c) {
  std::vector<TransitionKind> out;
  if (c.can_shift()) out.push_back(TransitionKind::kShift);
  if (c.can_left_arc()) out.push_back(TransitionKind::kLeftArc);
  if (c.can_right_arc()) out.push_back(TransitionKind::kRightArc);
  return out;
}

GoldTree gold_tree(const Sentence& sentence, const Vocab& vocab) {
  GoldTree g;
  g.heads.assign(sentence.size() + 1, -1);
  g.labels.assign(sentence.size() + 1, -1);
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    const Token& t = sentence.tokens[i];
    const int label = vocab.find_label(t.label);
    if (label < 0 || label >= static_cast<int>(vocab.num_labels())) {
      throw Error("unknown dependency label '" + t.label + "'");
    }
    g.heads[i + 1] = t.head;
    g.labels[i + 1] = label;
  }
  return g;
}

Transition static_oracle(const Configuration& c, const GoldTree& gold) {
  if (c.stack().size() >= 2) {
    const int s0 = c.stack_at(0), s1 = c.stack_at(1);
    if (s1 != 0 && gold.heads[static_cast<std::size_t>(s1)] == s0) {
      return Transition::left(gold.labels[static_cast<std::size_t>(s1)]);
    }
    if (gold.heads[static_cast<std::size_t>(s0)] == s1) {
      bool complete = true;
      for (std::size_t d = 1; d < gold.heads.size(); ++d) {
        if (gold.heads[d] == s0 && c.head(static_cast<int>(d)) != s0) {
          complete = false;
          break;
        }
      }
      if (complete) return Transition::right(gold.labels[static_cast<std::size_t>(s0)]);
    }
  }
  if (!c.can_shift()) {
    throw TransitionError("oracle: no gold-consistent transition (non-projective tree?)");
  }
  return Transition::shift();
}

std::vector<Transition> oracle_sequence(const GoldTree& gold) {
  const std::size_t n = gold.heads.size() - 1;
  Configuration c = initial_config(n);
  std::vector<Transition> seq;
  seq.reserve(2 * n);
  while (!c.terminal()) {
    const Transition t = static_oracle(c, gold);
    c = c.apply(t);
    seq.push_back(t);
  }
  return seq;
}

GoldTree transitions_to_tree(const std::vector<Transition>& sequence, std::size_t sentence_len) {
  Configuration c = initial_config(sentence_len);
  for (std::size_t step = 0; step < sequence.size(); ++step) {
    try {
      c = c.apply(sequence[step]);
    } catch (const TransitionError& e) {
      throw TransitionError("step " + std::to_string(step) + ": " + e.what());
    }
  }
  if (!c.terminal()) {
    throw TransitionError("step " + std::to_string(sequence.size()) +
                          ": sequence ends before the parse is complete");
  }
  GoldTree tree;
  tree.heads.assign(sentence_len + 1, -1);
  tree.labels.assign(sentence_len + 1, -1);
  for (int d = 1; d <= static_cast<int>(sentence_len); ++d) {
    tree.heads[static_cast<std::size_t>(d)] = c.head(d);
    tree.labels[static_cast<std::size_t>(d)] = c.label(d);
  }
  return tree;
}

}  // namespace depparse
