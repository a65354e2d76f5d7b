#ifndef DEPPARSE_BOOTSTRAP_H_
#define DEPPARSE_BOOTSTRAP_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "depparse/model.h"

namespace depparse {

inline constexpr double kInitRange = 0.01;
inline constexpr double kReluBias = 0.02;
inline constexpr double kForgetBias = 1.0;

// Which gates of a recurrent unit receive the feed-forward weights.
class GateSelection {
 public:
  // Throws if `gates` is empty or contains an index the unit does not have.
  GateSelection(UnitType unit, std::set<std::size_t> gates);

  static GateSelection all(UnitType unit);
  // Comma-separated gate names ("i,j,f,o", "r,z,htilde", "o", "all").
  // "h" is accepted for the GRU candidate and for the Elman layer.
  static GateSelection parse(UnitType unit, std::string_view spec);

  UnitType unit() const { return unit_; }
  const std::set<std::size_t>& gates() const { return gates_; }
  bool contains(std::size_t gate) const { return gates_.count(gate) != 0; }
  std::string to_string() const;

 private:
  UnitType unit_;
  std::set<std::size_t> gates_;
};

struct InitOptions {
  double range = kInitRange;       // weights uniform in [-range, range]
  double relu_bias = kReluBias;    // FFN and Elman hidden bias
  double forget_bias = kForgetBias;  // LSTM b_f
};

// Baseline initialization. Draws every weight (embeddings included) in
// canonical tensor order; biases are constants.
ModelParams random_init(UnitType unit, const ModelDims& dims, std::uint64_t seed,
                        const InitOptions& options = {});

struct BootstrapOptions {
  double range = kInitRange;
  // Adds 1 to a copied LSTM forget bias (ablation; off by default).
  bool add_forget_bias = false;
  // When set, the source must have exactly these dimensions.
  std::optional<ModelDims> target_dims;
};

// Builds an RNN from a trained FFN: each selected gate gets W_x <- W and
// b <- b_h; embeddings and W_hy are always copied. Recurrent matrices and
// non-selected gates are drawn uniformly in [-range, range] from `seed`.
ModelParams bootstrap_model(const ModelParams& ffn, const GateSelection& selection, std::uint64_t seed,
                            const BootstrapOptions& options = {});

}  // namespace depparse

#endif  // DEPPARSE_BOOTSTRAP_H_
