#include "depparse/bootstrap.h"

#include <sstream>

#include "depparse/error.h"
#include "depparse/rng.h"

namespace depparse {

GateSelection::GateSelection(UnitType unit, std::set<std::size_t> gates)
    : unit_(unit), gates_(std::move(gates)) {
  if (unit == UnitType::kFfn) throw Error("gate selection needs a recurrent unit, not ffn");
  if (gates_.empty()) throw Error("gate selection is empty");
  for (auto g : gates_) {
    if (g >= num_gates(unit)) {
      throw Error("gate index " + std::to_string(g) + " invalid for " + std::string(unit_name(unit)));
    }
  }
}

GateSelection GateSelection::all(UnitType unit) {
  std::set<std::size_t> gates;
  for (std::size_t g = 0; g < num_gates(unit); ++g) gates.insert(g);
  return GateSelection(unit, std::move(gates));
}

GateSelection GateSelection::parse(UnitType unit, std::string_view spec) {
  if (unit == UnitType::kFfn) throw Error("--gates is not valid for ffn");
  std::set<std::size_t> gates;
  std::string item;
  std::istringstream in{std::string(spec)};
  const auto& names = gate_names(unit);
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") return all(unit);
    bool found = false;
    for (std::size_t g = 0; g < names.size(); ++g) {
      if (item == names[g] || (item == "h" && unit != UnitType::kLstm && g + 1 == names.size())) {
        gates.insert(g);
        found = true;
      }
    }
    if (!found) throw Error("unknown gate '" + item + "' for " + std::string(unit_name(unit)));
  }
  return GateSelection(unit, std::move(gates));
}

std::string GateSelection::to_string() const {
  std::string out;
  for (auto g : gates_) {
    if (!out.empty()) out += ',';
    out += gate_names(unit_)[g];
  }
  return out;
}

namespace {

void fill_uniform(Tensor& t, double range, Rng& rng) {
  for (double& v : t.values()) v = rng.uniform(-range, range);
}

}  // namespace

ModelParams random_init(UnitType unit, const ModelDims& dims, std::uint64_t seed,
                        const InitOptions& options) {
  ModelParams p = ModelParams::zeros(unit, dims);
  Rng rng(seed);
  fill_uniform(p.word_emb, options.range, rng);
  fill_uniform(p.tag_emb, options.range, rng);
  fill_uniform(p.label_emb, options.range, rng);
  for (auto& g : p.gates) {
    fill_uniform(g.w_x, options.range, rng);
    if (!g.w_h.empty()) fill_uniform(g.w_h, options.range, rng);
  }
  fill_uniform(p.output, options.range, rng);

  switch (unit) {
    case UnitType::kFfn:
    case UnitType::kElman:
      p.gates[0].b.fill(options.relu_bias);
      break;
    case UnitType::kLstm:
      p.gates[lstm_gate::kF].b.fill(options.forget_bias);
      break;
    case UnitType::kGru:
      break;
  }
  return p;
}

ModelParams bootstrap_model(const ModelParams& ffn, const GateSelection& selection, std::uint64_t seed,
                            const BootstrapOptions& options) {
  if (ffn.unit != UnitType::kFfn) {
    throw Error("bootstrap source must be an ffn model, got " + std::string(unit_name(ffn.unit)));
  }
  ffn.validate();
  if (options.target_dims && !(*options.target_dims == ffn.dims)) {
    throw ShapeError("bootstrap source dimensions do not match the target model");
  }
  const UnitType unit = selection.unit();
  ModelParams p = ModelParams::zeros(unit, ffn.dims);
  p.word_emb = ffn.word_emb;
  p.tag_emb = ffn.tag_emb;
  p.label_emb = ffn.label_emb;
  p.output = ffn.output;

  Rng rng(seed);
  for (std::size_t g = 0; g < p.gates.size(); ++g) {
    GateParams& gate = p.gates[g];
    fill_uniform(gate.w_h, options.range, rng);
    if (selection.contains(g)) {
      gate.w_x = ffn.gates[0].w_x;
      gate.b = ffn.gates[0].b;
      if (options.add_forget_bias && unit == UnitType::kLstm && g == lstm_gate::kF) {
        for (double& v : gate.b.values()) v += 1.0;
      }
    } else {
      fill_uniform(gate.w_x, options.range, rng);
      fill_uniform(gate.b, options.range, rng);
    }
  }
  return p;
}

}  // namespace depparse
