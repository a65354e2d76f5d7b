#ifndef DEPPARSE_FEATURE_MODEL_H_
#define DEPPARSE_FEATURE_MODEL_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "depparse/model.h"
#include "depparse/tensor.h"
#include "depparse/transition_system.h"
#include "depparse/treebank.h"

namespace depparse {

// Feature ids of one configuration, in canonical slot order:
//   words/tags: s0 s1 s2 b0 b1 b2 lc1(s0) lc2(s0) rc1(s0) rc2(s0)
//               lc1(s1) lc2(s1) rc1(s1) rc2(s1)
//               lc1(lc1(s0)) rc1(rc1(s0)) lc1(lc1(s1)) rc1(rc1(s1))
//   labels:     the last 12 (tree) positions above.
struct FeatureIndices {
  std::array<int, kWordSlots> words{};
  std::array<int, kTagSlots> tags{};
  std::array<int, kLabelSlots> labels{};

  bool operator==(const FeatureIndices&) const = default;
};

// Vocabulary ids of a sentence, position 0 being ROOT.
struct SentenceIds {
  std::vector<int> words;
  std::vector<int> tags;
  std::size_t unknown_tags = 0;  // tags mapped to NULL
};

SentenceIds sentence_ids(const Sentence& sentence, const Vocab& vocab);

FeatureIndices extract_features(const Configuration& c, const SentenceIds& ids, const Vocab& vocab);
FeatureIndices extract_features(const Configuration& c, const Sentence& sentence, const Vocab& vocab);

// Concatenated embeddings (words, then tags, then labels). Throws
// ShapeError for an id outside its embedding table.
Vector lookup_input(const FeatureIndices& f, const ModelParams& params);

// Same, multiplied elementwise by `mask` (an inverted-dropout mask holding 0
// or 1/(1-rate)). The mask must have the input length.
Vector lookup_input(const FeatureIndices& f, const ModelParams& params, std::span<const double> mask);

// Adds the input-vector gradient `grad_x` into the embedding rows of `grads`.
void scatter_input_gradient(const FeatureIndices& f, std::span<const double> grad_x,
                            ModelParams& grads);

}  // namespace depparse

#endif  // DEPPARSE_FEATURE_MODEL_H_
