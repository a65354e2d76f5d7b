#ifndef DEPPARSE_MODEL_H_
#define DEPPARSE_MODEL_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "depparse/tensor.h"

namespace depparse {

enum class UnitType { kFfn, kElman, kGru, kLstm };

std::string_view unit_name(UnitType unit);
// Accepts ffn, elman, gru, lstm (case-insensitive). Throws on anything else.
UnitType parse_unit(std::string_view name);

// Number of gates of each unit and their names, in storage order.
// LSTM: i, j, f, o. GRU: r, z, htilde. Elman and FFN: a single hidden layer.
std::size_t num_gates(UnitType unit);
const std::vector<std::string>& gate_names(UnitType unit);

// Gate positions inside ModelParams::gates.
namespace lstm_gate {
inline constexpr std::size_t kI = 0, kJ = 1, kF = 2, kO = 3;
}
namespace gru_gate {
inline constexpr std::size_t kR = 0, kZ = 1, kCandidate = 2;
}

inline constexpr std::size_t kWordSlots = 18;
inline constexpr std::size_t kTagSlots = 18;
inline constexpr std::size_t kLabelSlots = 12;

struct ModelDims {
  std::size_t words = 0;   // embedding rows incl. specials
  std::size_t tags = 0;
  std::size_t labels = 0;  // real labels; the label embedding has labels + 2 rows
  std::size_t word_dim = 100;
  std::size_t tag_dim = 100;
  std::size_t label_dim = 100;
  std::size_t hidden = 256;

  std::size_t label_rows() const { return labels + 2; }
  std::size_t input_size() const {
    return kWordSlots * word_dim + kTagSlots * tag_dim + kLabelSlots * label_dim;
  }
  std::size_t outputs() const { return 2 * labels + 1; }
  bool operator==(const ModelDims&) const = default;
};

struct GateParams {
  Tensor w_x;  // hidden x input
  Tensor w_h;  // hidden x hidden; empty for FFN
  Tensor b;    // hidden
  bool operator==(const GateParams&) const = default;
};

// All trainable tensors of one model. Gradients and momentum buffers use
// the same structure.
struct ModelParams {
  UnitType unit = UnitType::kFfn;
  ModelDims dims;
  Tensor word_emb;   // words x word_dim
  Tensor tag_emb;    // tags x tag_dim
  Tensor label_emb;  // (labels + 2) x label_dim
  std::vector<GateParams> gates;
  Tensor output;     // (2 * labels + 1) x hidden

  // Zero-filled parameters of the right shapes.
  static ModelParams zeros(UnitType unit, const ModelDims& dims);
  ModelParams zeros_like() const { return zeros(unit, dims); }

  // Visits every tensor with its canonical name, in a fixed order:
  // E_w, E_t, E_l, gate tensors (W_x*, W_h*, b_*), W_hy.
  template <typename F>
  void for_each(F&& f) {
    for_each_impl(*this, f);
  }
  template <typename F>
  void for_each(F&& f) const {
    for_each_impl(*this, f);
  }

  std::size_t num_parameters() const;
  double squared_norm() const;
  // Throws ShapeError if any tensor disagrees with unit/dims.
  void validate() const;

  bool operator==(const ModelParams&) const = default;

 private:
  template <typename Self, typename F>
  static void for_each_impl(Self& self, F& f);
};

// Canonical tensor names, e.g. "W_xf", "b_f", "W_hhtilde"; FFN uses "W" and
// "b_h", Elman "W_x", "W_h", "b_h".
std::string gate_tensor_name(UnitType unit, std::size_t gate, char which);

template <typename Self, typename F>
void ModelParams::for_each_impl(Self& self, F& f) {
  f(std::string("E_w"), self.word_emb);
  f(std::string("E_t"), self.tag_emb);
  f(std::string("E_l"), self.label_emb);
  for (std::size_t g = 0; g < self.gates.size(); ++g) {
    f(gate_tensor_name(self.unit, g, 'x'), self.gates[g].w_x);
    if (self.unit != UnitType::kFfn) f(gate_tensor_name(self.unit, g, 'h'), self.gates[g].w_h);
    f(gate_tensor_name(self.unit, g, 'b'), self.gates[g].b);
  }
  f(std::string("W_hy"), self.output);
}

}  // namespace depparse

#endif  // DEPPARSE_MODEL_H_
