#include "depparse/embeddings.h"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "depparse/error.h"
#include "depparse/serialization.h"

namespace depparse {

EmbeddingTable parse_embeddings(std::string_view text, std::size_t expected_dim) {
  EmbeddingTable table;
  table.dim = expected_dim;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    Vector v;
    for (std::string num; fields >> num;) {
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
      if (ec != std::errc() || ptr != num.data() + num.size()) {
        throw FormatError("embeddings line " + std::to_string(line_no) + ": bad number '" + num + "'");
      }
      v.push_back(value);
    }
    if (line_no == 1 && v.size() == 1 && token.find_first_not_of("0123456789") == std::string::npos) {
      continue;  // word2vec header
    }
    if (v.size() != expected_dim) {
      throw FormatError("embeddings line " + std::to_string(line_no) + ": " + std::to_string(v.size()) +
                        " values, expected dimension " + std::to_string(expected_dim));
    }
    table.vectors.emplace(std::move(token), std::move(v));
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, std::size_t expected_dim) {
  try {
    return parse_embeddings(read_binary_file(path), expected_dim);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::size_t apply_pretrained(const EmbeddingTable& table, const Vocab& vocab, ModelParams& params) {
  if (table.dim != params.dims.word_dim) {
    throw ShapeError("pretrained dimension " + std::to_string(table.dim) + " != word_dim " +
                     std::to_string(params.dims.word_dim));
  }
  std::size_t replaced = 0;
  const int specials_begin = vocab.word_root();
  for (int id = 0; id < specials_begin; ++id) {
    const std::string& w = vocab.word(id);
    auto it = table.vectors.find(w);
    if (it == table.vectors.end()) {
      std::string lower = w;
      std::transform(lower.begin(), lower.end(), lower.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      it = table.vectors.find(lower);
    }
    if (it == table.vectors.end()) continue;
    auto row = params.word_emb.row(static_cast<std::size_t>(id));
    std::copy(it->second.begin(), it->second.end(), row.begin());
    ++replaced;
  }
  return replaced;
}

}  // namespace depparse
