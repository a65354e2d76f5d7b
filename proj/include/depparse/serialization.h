#ifndef DEPPARSE_SERIALIZATION_H_
#define DEPPARSE_SERIALIZATION_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "depparse/model.h"
#include "depparse/treebank.h"

namespace depparse {

// Model container: a text manifest
//
//   depparse-model
//   format_version 1
//   unit_type lstm
//   dims words=.. tags=.. labels=.. word_dim=.. tag_dim=.. label_dim=.. hidden=..
//   vocab <file name, relative to the model file>
//   tensors <count>
//   tensor <name> <rank> <dim>... <byte offset>
//   ...
//   payload_bytes <n>
//   end
//
// followed by the tensors as little-endian IEEE-754 doubles.
inline constexpr int kModelFormatVersion = 1;

std::string encode_model(const ModelParams& params, std::string_view vocab_ref);

struct DecodedModel {
  ModelParams params;
  std::string vocab_ref;
};
// Throws FormatError on any manifest or payload inconsistency.
DecodedModel decode_model(std::string_view bytes);

// Writes `path` and the vocabulary next to it as `<path>.vocab`.
void save_model(const std::filesystem::path& path, const ModelParams& params, const Vocab& vocab);

struct LoadedModel {
  ModelParams params;
  Vocab vocab;
};
LoadedModel load_model(const std::filesystem::path& path);

std::string read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace depparse

#endif  // DEPPARSE_SERIALIZATION_H_
