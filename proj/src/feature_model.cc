#include "depparse/feature_model.h"

#include <algorithm>

#include "depparse/error.h"

namespace depparse {

SentenceIds sentence_ids(const Sentence& sentence, const Vocab& vocab) {
  SentenceIds ids;
  ids.words.reserve(sentence.size() + 1);
  ids.tags.reserve(sentence.size() + 1);
  ids.words.push_back(vocab.word_root());
  ids.tags.push_back(vocab.tag_root());
  for (const auto& t : sentence.tokens) {
    ids.words.push_back(vocab.word_id(t.form));
    const int tag = vocab.find_tag(t.pos);
    if (tag < 0 || tag >= vocab.tag_root()) {
      ids.tags.push_back(vocab.tag_null());
      ++ids.unknown_tags;
    } else {
      ids.tags.push_back(tag);
    }
  }
  return ids;
}

FeatureIndices extract_features(const Configuration& c, const SentenceIds& ids, const Vocab& vocab) {
  std::array<int, kWordSlots> tokens;
  const int s0 = c.stack_at(0), s1 = c.stack_at(1);
  tokens[0] = s0;
  tokens[1] = s1;
  tokens[2] = c.stack_at(2);
  tokens[3] = c.buffer_at(0);
  tokens[4] = c.buffer_at(1);
  tokens[5] = c.buffer_at(2);
  std::size_t k = 6;
  for (const int s : {s0, s1}) {
    tokens[k++] = c.leftmost_child(s, 1);
    tokens[k++] = c.leftmost_child(s, 2);
    tokens[k++] = c.rightmost_child(s, 1);
    tokens[k++] = c.rightmost_child(s, 2);
  }
  for (const int s : {s0, s1}) {
    tokens[k++] = c.leftmost_child(c.leftmost_child(s, 1), 1);
    tokens[k++] = c.rightmost_child(c.rightmost_child(s, 1), 1);
  }

  FeatureIndices f;
  for (std::size_t i = 0; i < kWordSlots; ++i) {
    const int t = tokens[i];
    if (t < 0) {
      f.words[i] = vocab.word_null();
      f.tags[i] = vocab.tag_null();
    } else {
      f.words[i] = ids.words[static_cast<std::size_t>(t)];
      f.tags[i] = ids.tags[static_cast<std::size_t>(t)];
    }
  }
  for (std::size_t i = 0; i < kLabelSlots; ++i) {
    const int t = tokens[kWordSlots - kLabelSlots + i];
    f.labels[i] = t < 0 ? vocab.label_null() : c.label(t);
  }
  return f;
}

FeatureIndices extract_features(const Configuration& c, const Sentence& sentence, const Vocab& vocab) {
  return extract_features(c, sentence_ids(sentence, vocab), vocab);
}

namespace {

template <std::size_t N>
void copy_rows(const std::array<int, N>& ids, const Tensor& table, double* out, const char* what) {
  const std::size_t d = table.cols();
  for (std::size_t i = 0; i < N; ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= table.rows()) {
      throw ShapeError(std::string(what) + " id " + std::to_string(ids[i]) + " outside table of " +
                       std::to_string(table.rows()) + " rows");
    }
    const auto row = table.row(static_cast<std::size_t>(ids[i]));
    std::copy(row.begin(), row.end(), out + i * d);
  }
}

template <std::size_t N>
void add_rows(const std::array<int, N>& ids, const double* grad, Tensor& table) {
  const std::size_t d = table.cols();
  for (std::size_t i = 0; i < N; ++i) {
    auto row = table.row(static_cast<std::size_t>(ids[i]));
    for (std::size_t k = 0; k < d; ++k) row[k] += grad[i * d + k];
  }
}

}  // namespace

Vector lookup_input(const FeatureIndices& f, const ModelParams& params) {
  const ModelDims& d = params.dims;
  Vector x(d.input_size());
  double* out = x.data();
  copy_rows(f.words, params.word_emb, out, "word");
  out += kWordSlots * d.word_dim;
  copy_rows(f.tags, params.tag_emb, out, "tag");
  out += kTagSlots * d.tag_dim;
  copy_rows(f.labels, params.label_emb, out, "label");
  return x;
}

Vector lookup_input(const FeatureIndices& f, const ModelParams& params, std::span<const double> mask) {
  Vector x = lookup_input(f, params);
  if (mask.size() != x.size()) {
    throw ShapeError("dropout mask length " + std::to_string(mask.size()) + " != input length " +
                     std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= mask[i];
  return x;
}

void scatter_input_gradient(const FeatureIndices& f, std::span<const double> grad_x, ModelParams& grads) {
  const ModelDims& d = grads.dims;
  const double* g = grad_x.data();
  add_rows(f.words, g, grads.word_emb);
  g += kWordSlots * d.word_dim;
  add_rows(f.tags, g, grads.tag_emb);
  g += kTagSlots * d.tag_dim;
  add_rows(f.labels, g, grads.label_emb);
}

}  // namespace depparse
