#include "depparse/model.h"

#include <algorithm>
#include <cctype>

#include "depparse/error.h"

namespace depparse {

std::string Tensor::shape_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

Tensor Tensor::from_shape(std::vector<std::size_t> shape) {
  Tensor t;
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  t.shape_ = std::move(shape);
  t.data_.assign(n, 0.0);
  return t;
}

std::string_view unit_name(UnitType unit) {
  switch (unit) {
    case UnitType::kFfn:
      return "ffn";
    case UnitType::kElman:
      return "elman";
    case UnitType::kGru:
      return "gru";
    case UnitType::kLstm:
      return "lstm";
  }
  return "?";
}

UnitType parse_unit(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ffn") return UnitType::kFfn;
  if (lower == "elman") return UnitType::kElman;
  if (lower == "gru") return UnitType::kGru;
  if (lower == "lstm") return UnitType::kLstm;
  throw Error("unknown unit type '" + std::string(name) + "'");
}

std::size_t num_gates(UnitType unit) { return gate_names(unit).size(); }

const std::vector<std::string>& gate_names(UnitType unit) {
  static const std::vector<std::string> single{"h"};
  static const std::vector<std::string> gru{"r", "z", "htilde"};
  static const std::vector<std::string> lstm{"i", "j", "f", "o"};
  switch (unit) {
    case UnitType::kGru:
      return gru;
    case UnitType::kLstm:
      return lstm;
    default:
      return single;
  }
}

std::string gate_tensor_name(UnitType unit, std::size_t gate, char which) {
  if (unit == UnitType::kFfn) return which == 'b' ? "b_h" : "W";
  if (unit == UnitType::kElman) {
    switch (which) {
      case 'x':
        return "W_x";
      case 'h':
        return "W_h";
      default:
        return "b_h";
    }
  }
  const std::string& g = gate_names(unit).at(gate);
  switch (which) {
    case 'x':
      return "W_x" + g;
    case 'h':
      return "W_h" + g;
    default:
      return "b_" + g;
  }
}

ModelParams ModelParams::zeros(UnitType unit, const ModelDims& dims) {
  ModelParams p;
  p.unit = unit;
  p.dims = dims;
  p.word_emb = Tensor(dims.words, dims.word_dim);
  p.tag_emb = Tensor(dims.tags, dims.tag_dim);
  p.label_emb = Tensor(dims.label_rows(), dims.label_dim);
  p.gates.resize(num_gates(unit));
  for (auto& g : p.gates) {
    g.w_x = Tensor(dims.hidden, dims.input_size());
    if (unit != UnitType::kFfn) g.w_h = Tensor(dims.hidden, dims.hidden);
    g.b = Tensor(dims.hidden);
  }
  p.output = Tensor(dims.outputs(), dims.hidden);
  return p;
}

std::size_t ModelParams::num_parameters() const {
  std::size_t n = 0;
  for_each([&n](const std::string&, const Tensor& t) { n += t.size(); });
  return n;
}

double ModelParams::squared_norm() const {
  double s = 0.0;
  for_each([&s](const std::string&, const Tensor& t) { s += as_vector(t).squaredNorm(); });
  return s;
}

void ModelParams::validate() const {
  const ModelParams expected = zeros(unit, dims);
  if (gates.size() != expected.gates.size()) {
    throw ShapeError("model has " + std::to_string(gates.size()) + " gates, " +
                     std::string(unit_name(unit)) + " needs " + std::to_string(expected.gates.size()));
  }
  std::vector<const Tensor*> mine;
  for_each([&mine](const std::string&, const Tensor& t) { mine.push_back(&t); });
  std::size_t i = 0;
  expected.for_each([&](const std::string& name, const Tensor& t) {
    if (!mine[i]->same_shape(t)) {
      throw ShapeError("tensor " + name + " has shape " + mine[i]->shape_string() + ", expected " +
                       t.shape_string());
    }
    ++i;
  });
}

}  // namespace depparse
