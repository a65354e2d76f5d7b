#ifndef DEPPARSE_TESTS_TEST_UTIL_H_
#define DEPPARSE_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "depparse/bootstrap.h"
#include "depparse/feature_model.h"
#include "depparse/model.h"
#include "depparse/neural.h"
#include "depparse/rng.h"
#include "depparse/transition_system.h"
#include "depparse/treebank.h"

namespace depparse::testing {

inline Sentence he_sleeps() {
  Sentence s;
  s.tokens.push_back({1, "He", "PRP", 2, "nsubj"});
  s.tokens.push_back({2, "sleeps", "VBZ", 0, "root"});
  return s;
}

// Small random model with weights in [-scale, scale] so gradients are far
// from zero.
inline ModelParams random_model(UnitType unit, const ModelDims& dims, std::uint64_t seed, double scale) {
  ModelParams p = ModelParams::zeros(unit, dims);
  Rng rng(seed);
  p.for_each([&](const std::string&, Tensor& t) {
    for (double& v : t.values()) v = rng.uniform(-scale, scale);
  });
  return p;
}

inline ModelDims tiny_dims(const Vocab& vocab, std::size_t hidden, std::size_t d) {
  ModelDims dims;
  dims.words = vocab.num_words();
  dims.tags = vocab.num_tags();
  dims.labels = vocab.num_labels();
  dims.word_dim = dims.tag_dim = dims.label_dim = d;
  dims.hidden = hidden;
  return dims;
}

// Training example over the first `steps` gold transitions of `sentence`.
inline TrainingExample truncated_example(const Sentence& sentence, const Vocab& vocab, std::size_t steps) {
  auto seq = oracle_sequence(gold_tree(sentence, vocab));
  seq.resize(std::min(seq.size(), steps));
  return make_example(sentence, vocab, seq);
}

// Full objective: summed NLL plus the L2 term, optionally with dropout
// masks drawn from a freshly seeded generator (same masks every call).
inline double objective(const ModelParams& p, const TrainingExample& ex, double lambda,
                        const DropoutConfig& dropout = {}, std::uint64_t mask_seed = 0) {
  if (dropout.input_rate > 0.0 || dropout.hidden_rate > 0.0) {
    Rng rng(mask_seed);
    return forward_sequence(p, ex, dropout, &rng).loss + l2_penalty(p, lambda);
  }
  return forward_sequence(p, ex).loss + l2_penalty(p, lambda);
}

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_tensor;
  std::size_t checked = 0;
};

// Central finite differences over every element of every tensor, compared
// with `analytic`. Relative error is |a - n| / max(|a|, |n|, floor).
inline GradCheckResult finite_difference_check(ModelParams p, const ModelParams& analytic,
                                               const TrainingExample& ex, double lambda,
                                               const DropoutConfig& dropout = {}, std::uint64_t mask_seed = 0,
                                               double eps = 1e-5, double floor = 1e-6) {
  GradCheckResult r;
  std::vector<const Tensor*> a;
  analytic.for_each([&a](const std::string&, const Tensor& t) { a.push_back(&t); });
  std::vector<std::pair<std::string, Tensor*>> tensors;
  p.for_each([&tensors](const std::string& name, Tensor& t) { tensors.emplace_back(name, &t); });
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    Tensor& t = *tensors[i].second;
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double saved = t[k];
      t[k] = saved + eps;
      const double up = objective(p, ex, lambda, dropout, mask_seed);
      t[k] = saved - eps;
      const double down = objective(p, ex, lambda, dropout, mask_seed);
      t[k] = saved;
      const double numeric = (up - down) / (2 * eps);
      const double an = (*a[i])[k];
      const double rel = std::abs(an - numeric) / std::max({std::abs(an), std::abs(numeric), floor});
      if (rel > r.max_rel_error) {
        r.max_rel_error = rel;
        r.worst_tensor = tensors[i].first + "[" + std::to_string(k) + "]";
      }
      ++r.checked;
    }
  }
  return r;
}

}  // namespace depparse::testing

#endif  // DEPPARSE_TESTS_TEST_UTIL_H_
