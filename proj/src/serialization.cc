#include "depparse/serialization.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "depparse/error.h"

namespace depparse {
namespace {

void put_double(std::string& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(bits & 0xff));
    bits >>= 8;
  }
}

double get_double(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
  return std::bit_cast<double>(bits);
}

std::size_t to_size(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw FormatError("model manifest: bad " + what + " '" + s + "'");
  }
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

std::string encode_model(const ModelParams& params, std::string_view vocab_ref) {
  params.validate();
  const ModelDims& d = params.dims;
  std::ostringstream m;
  m << "depparse-model\n"
    << "format_version " << kModelFormatVersion << "\n"
    << "unit_type " << unit_name(params.unit) << "\n"
    << "dims words=" << d.words << " tags=" << d.tags << " labels=" << d.labels
    << " word_dim=" << d.word_dim << " tag_dim=" << d.tag_dim << " label_dim=" << d.label_dim
    << " hidden=" << d.hidden << "\n"
    << "vocab " << (vocab_ref.empty() ? "-" : vocab_ref) << "\n";
  std::size_t count = 0;
  params.for_each([&count](const std::string&, const Tensor&) { ++count; });
  m << "tensors " << count << "\n";
  std::size_t offset = 0;
  params.for_each([&](const std::string& name, const Tensor& t) {
    m << "tensor " << name << " " << t.rank();
    for (auto dim : t.shape()) m << " " << dim;
    m << " " << offset << "\n";
    offset += t.size() * 8;
  });
  m << "payload_bytes " << offset << "\nend\n";

  std::string out = m.str();
  out.reserve(out.size() + offset);
  params.for_each([&out](const std::string&, const Tensor& t) {
    for (double v : t.values()) put_double(out, v);
  });
  return out;
}

DecodedModel decode_model(std::string_view bytes) {
  const std::size_t end_pos = bytes.find("\nend\n");
  if (end_pos == std::string_view::npos) throw FormatError("model file: manifest terminator not found");
  std::istringstream in{std::string(bytes.substr(0, end_pos + 1))};
  const std::string_view payload = bytes.substr(end_pos + 5);

  std::string line;
  std::getline(in, line);
  if (line != "depparse-model") throw FormatError("model file: bad magic line '" + line + "'");

  std::map<std::string, std::vector<std::string>> header;
  std::vector<std::vector<std::string>> tensor_lines;
  while (std::getline(in, line)) {
    auto w = words(line);
    if (w.empty()) continue;
    if (w[0] == "tensor") {
      tensor_lines.push_back(std::move(w));
    } else {
      const std::string key = w[0];
      w.erase(w.begin());
      header[key] = std::move(w);
    }
  }
  auto field = [&header](const std::string& key) -> const std::vector<std::string>& {
    auto it = header.find(key);
    if (it == header.end() || it->second.empty()) throw FormatError("model manifest: missing " + key);
    return it->second;
  };
  const std::size_t version = to_size(field("format_version")[0], "format_version");
  if (version != kModelFormatVersion) {
    throw FormatError("model file: unsupported format version " + std::to_string(version));
  }

  DecodedModel out;
  const UnitType unit = parse_unit(field("unit_type")[0]);
  ModelDims dims;
  std::map<std::string, std::size_t*> dim_fields{
      {"words", &dims.words},         {"tags", &dims.tags},   {"labels", &dims.labels},
      {"word_dim", &dims.word_dim},   {"tag_dim", &dims.tag_dim},
      {"label_dim", &dims.label_dim}, {"hidden", &dims.hidden}};
  std::size_t seen = 0;
  for (const auto& kv : field("dims")) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw FormatError("model manifest: bad dims entry '" + kv + "'");
    auto it = dim_fields.find(kv.substr(0, eq));
    if (it == dim_fields.end()) throw FormatError("model manifest: unknown dims key '" + kv + "'");
    *it->second = to_size(kv.substr(eq + 1), it->first);
    ++seen;
  }
  if (seen != dim_fields.size()) throw FormatError("model manifest: incomplete dims line");
  out.vocab_ref = field("vocab")[0] == "-" ? "" : field("vocab")[0];
  out.params = ModelParams::zeros(unit, dims);

  const std::size_t payload_bytes = to_size(field("payload_bytes")[0], "payload_bytes");
  if (payload.size() != payload_bytes) {
    throw FormatError("model file: payload is " + std::to_string(payload.size()) + " bytes, manifest says " +
                      std::to_string(payload_bytes));
  }
  std::size_t expected_tensors = 0;
  out.params.for_each([&expected_tensors](const std::string&, const Tensor&) { ++expected_tensors; });
  if (tensor_lines.size() != expected_tensors ||
      to_size(field("tensors")[0], "tensor count") != expected_tensors) {
    throw FormatError("model file: expected " + std::to_string(expected_tensors) + " tensors");
  }

  std::size_t i = 0;
  const auto* base = reinterpret_cast<const unsigned char*>(payload.data());
  out.params.for_each([&](const std::string& name, Tensor& t) {
    const auto& w = tensor_lines[i++];
    if (w.size() < 3 || w[1] != name) {
      throw FormatError("model file: expected tensor " + name + ", found '" + (w.size() > 1 ? w[1] : "") + "'");
    }
    const std::size_t rank = to_size(w[2], "rank");
    if (w.size() != 4 + rank) throw FormatError("model file: malformed entry for " + name);
    std::vector<std::size_t> shape;
    for (std::size_t r = 0; r < rank; ++r) shape.push_back(to_size(w[3 + r], "dimension"));
    if (shape != t.shape()) throw FormatError("model file: tensor " + name + " has unexpected shape");
    const std::size_t offset = to_size(w[3 + rank], "offset");
    if (offset + t.size() * 8 > payload.size()) throw FormatError("model file: tensor " + name + " out of bounds");
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = get_double(base + offset + 8 * k);
  });
  return out;
}

std::string read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_binary_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

void save_model(const std::filesystem::path& path, const ModelParams& params, const Vocab& vocab) {
  const std::string vocab_name = path.filename().string() + ".vocab";
  write_binary_file(path.parent_path() / vocab_name, vocab.serialize());
  write_binary_file(path, encode_model(params, vocab_name));
}

LoadedModel load_model(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error("model file not found: " + path.string());
  DecodedModel decoded;
  try {
    decoded = decode_model(read_binary_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  if (decoded.vocab_ref.empty()) throw FormatError(path.string() + ": no vocabulary reference");
  LoadedModel out{std::move(decoded.params),
                  Vocab::deserialize(read_binary_file(path.parent_path() / decoded.vocab_ref))};
  const ModelDims& d = out.params.dims;
  if (d.words != out.vocab.num_words() || d.tags != out.vocab.num_tags() || d.labels != out.vocab.num_labels()) {
    throw FormatError(path.string() + ": vocabulary sizes do not match the model dimensions");
  }
  return out;
}

}  // namespace depparse
