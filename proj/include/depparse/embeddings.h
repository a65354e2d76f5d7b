#ifndef DEPPARSE_EMBEDDINGS_H_
#define DEPPARSE_EMBEDDINGS_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>

#include "depparse/model.h"
#include "depparse/tensor.h"
#include "depparse/treebank.h"

namespace depparse {

struct EmbeddingTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, Vector> vectors;
};

// GloVe text format: a token followed by `dim` numbers per line. A leading
// "<count> <dim>" header (word2vec text) is skipped. Throws FormatError if a
// line has the wrong number of values.
EmbeddingTable parse_embeddings(std::string_view text, std::size_t expected_dim);
EmbeddingTable load_embeddings(const std::filesystem::path& path, std::size_t expected_dim);

// Overwrites word embedding rows whose word (or its lowercase form) has a
// pretrained vector. Returns the number of rows replaced.
std::size_t apply_pretrained(const EmbeddingTable& table, const Vocab& vocab, ModelParams& params);

}  // namespace depparse

#endif  // DEPPARSE_EMBEDDINGS_H_
