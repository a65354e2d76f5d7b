#include "depparse/neural.h"

#include <algorithm>
#include <cmath>

#include "depparse/error.h"

namespace depparse {
namespace {

ConstVectorMap view(std::span<const double> s) {
  return ConstVectorMap(s.data(), static_cast<Eigen::Index>(s.size()));
}

void check_input(std::span<const double> x, const ModelParams& params) {
  if (x.size() != params.dims.input_size()) {
    throw ShapeError("input length " + std::to_string(x.size()) + " != model input size " +
                     std::to_string(params.dims.input_size()));
  }
}

void check_state(std::span<const double> h, const ModelParams& params, const char* what) {
  if (h.size() != params.dims.hidden) {
    throw ShapeError(std::string(what) + " length " + std::to_string(h.size()) +
                     " != hidden size " + std::to_string(params.dims.hidden));
  }
}

void check_unit(const ModelParams& params, UnitType unit) {
  if (params.unit != unit) {
    throw ShapeError("expected a " + std::string(unit_name(unit)) + " model, got " +
                     std::string(unit_name(params.unit)));
  }
}

// W_x x + b (+ W_h h_prev when h_prev is non-empty).
Vector affine(const GateParams& g, std::span<const double> x, std::span<const double> h_prev) {
  Vector a(g.b.values());
  auto out = as_vector(a);
  out.noalias() += as_matrix(g.w_x) * view(x);
  if (!h_prev.empty()) out.noalias() += as_matrix(g.w_h) * view(h_prev);
  return a;
}

void apply_relu(Vector& v) {
  for (double& e : v) e = std::max(0.0, e);
}
void apply_sigmoid(Vector& v) {
  for (double& e : v) e = sigmoid(e);
}
void apply_tanh(Vector& v) {
  for (double& e : v) e = std::tanh(e);
}

#ifndef NDEBUG
void check_finite(const Vector& v, const char* what) {
  for (double e : v) {
    if (!std::isfinite(e)) throw Error(std::string("non-finite value in ") + what);
  }
}
#else
void check_finite(const Vector&, const char*) {}
#endif

// Gradients w.r.t. the gate pre-activations of one step, given the error
// arriving at h (and c for LSTM). Writes the error passed on to h_prev and
// c_prev.
void unit_backward(const ModelParams& params, const StepCache& s, const Vector& dh, const Vector& dc,
                   std::vector<Vector>& dpre, Vector& dh_prev, Vector& dc_prev) {
  const std::size_t n = params.dims.hidden;
  const auto& gates = s.unit.gates;
  dpre.resize(gates.size());
  for (auto& d : dpre) d.assign(n, 0.0);
  dh_prev.assign(n, 0.0);
  dc_prev.assign(n, 0.0);

  switch (params.unit) {
    case UnitType::kFfn:
    case UnitType::kElman: {
      const Vector& h = gates[0];
      for (std::size_t k = 0; k < n; ++k) dpre[0][k] = h[k] > 0.0 ? dh[k] : 0.0;
      if (params.unit == UnitType::kElman) {
        as_vector(dh_prev).noalias() = as_matrix(params.gates[0].w_h).transpose() * as_vector(dpre[0]);
      }
      break;
    }
    case UnitType::kLstm: {
      using namespace lstm_gate;
      const Vector &i = gates[kI], &j = gates[kJ], &f = gates[kF], &o = gates[kO];
      for (std::size_t k = 0; k < n; ++k) {
        const double tc = std::tanh(s.unit.c[k]);
        const double d_o = dh[k] * tc;
        const double d_c = dc[k] + dh[k] * o[k] * (1.0 - tc * tc);
        dpre[kI][k] = d_c * j[k] * i[k] * (1.0 - i[k]);
        dpre[kJ][k] = d_c * i[k] * (1.0 - j[k] * j[k]);
        dpre[kF][k] = d_c * s.c_prev[k] * f[k] * (1.0 - f[k]);
        dpre[kO][k] = d_o * o[k] * (1.0 - o[k]);
        dc_prev[k] = d_c * f[k];
      }
      auto out = as_vector(dh_prev);
      for (std::size_t g = 0; g < 4; ++g) {
        out.noalias() += as_matrix(params.gates[g].w_h).transpose() * as_vector(dpre[g]);
      }
      break;
    }
    case UnitType::kGru: {
      using namespace gru_gate;
      const Vector &r = gates[kR], &z = gates[kZ], &cand = gates[kCandidate];
      Vector dz(n);
      for (std::size_t k = 0; k < n; ++k) {
        dz[k] = dh[k] * (s.h_prev[k] - cand[k]);
        dpre[kCandidate][k] = dh[k] * (1.0 - z[k]) * (1.0 - cand[k] * cand[k]);
        dh_prev[k] = dh[k] * z[k];
      }
      Vector d_reset_h(n);
      as_vector(d_reset_h).noalias() =
          as_matrix(params.gates[kCandidate].w_h).transpose() * as_vector(dpre[kCandidate]);
      for (std::size_t k = 0; k < n; ++k) {
        dh_prev[k] += d_reset_h[k] * r[k];
        dpre[kR][k] = d_reset_h[k] * s.h_prev[k] * r[k] * (1.0 - r[k]);
        dpre[kZ][k] = dz[k] * z[k] * (1.0 - z[k]);
      }
      auto out = as_vector(dh_prev);
      out.noalias() += as_matrix(params.gates[kR].w_h).transpose() * as_vector(dpre[kR]);
      out.noalias() += as_matrix(params.gates[kZ].w_h).transpose() * as_vector(dpre[kZ]);
      break;
    }
  }
}

// Error arriving at h_t from the loss at step t.
Vector output_backward(const ModelParams& params, const StepCache& s, ModelParams& grads) {
  Vector dlogits = s.probs;
  dlogits[static_cast<std::size_t>(s.gold)] -= 1.0;
  as_matrix(grads.output).noalias() += as_vector(dlogits) * as_vector(s.h_out).transpose();
  Vector dh(params.dims.hidden);
  as_vector(dh).noalias() = as_matrix(params.output).transpose() * as_vector(dlogits);
  if (!s.hidden_mask.empty()) {
    for (std::size_t k = 0; k < dh.size(); ++k) dh[k] *= s.hidden_mask[k];
  }
  return dh;
}

// Parameter and embedding gradients of one step from its accumulated
// pre-activation errors.
void accumulate_step(const ModelParams& params, const StepCache& s, const std::vector<Vector>& dpre,
                     ModelParams& grads) {
  Vector dx(params.dims.input_size(), 0.0);
  auto dx_v = as_vector(dx);
  const auto x = as_vector(s.x);
  for (std::size_t g = 0; g < dpre.size(); ++g) {
    const auto d = as_vector(dpre[g]);
    GateParams& gg = grads.gates[g];
    as_matrix(gg.w_x).noalias() += d * x.transpose();
    if (params.unit != UnitType::kFfn) {
      const Vector& rec = (params.unit == UnitType::kGru && g == gru_gate::kCandidate) ? s.unit.reset_h
                                                                                      : s.h_prev;
      as_matrix(gg.w_h).noalias() += d * as_vector(rec).transpose();
    }
    as_vector(gg.b) += d;
    dx_v.noalias() += as_matrix(params.gates[g].w_x).transpose() * d;
  }
  if (!s.input_mask.empty()) {
    for (std::size_t k = 0; k < dx.size(); ++k) dx[k] *= s.input_mask[k];
  }
  scatter_input_gradient(s.features, dx, grads);
}

void check_forward(const ModelParams& params, const SequenceResult& forward, const ModelParams& grads) {
  if (forward.steps.empty()) throw Error("backward_sequence: missing forward cache");
  for (const auto& s : forward.steps) {
    if (s.probs.size() != params.dims.outputs() || s.gold < 0 || s.unit.gates.size() != params.gates.size()) {
      throw Error("backward_sequence: missing or incomplete step cache");
    }
  }
  if (grads.unit != params.unit || !(grads.dims == params.dims)) {
    throw ShapeError("backward_sequence: gradient buffer does not match the model");
  }
}

}  // namespace

Vector dropout_mask(std::size_t n, double rate, Rng& rng) {
  Vector mask(n, 1.0);
  if (rate <= 0.0) return mask;
  const double keep = 1.0 / (1.0 - rate);
  for (double& m : mask) m = rng.uniform() < rate ? 0.0 : keep;
  return mask;
}

FfnOutput ffn_forward(std::span<const double> x, const ModelParams& params) {
  check_unit(params, UnitType::kFfn);
  check_input(x, params);
  FfnOutput out;
  out.h = affine(params.gates[0], x, {});
  apply_relu(out.h);
  out.logits = output_logits(out.h, params);
  return out;
}

UnitOutput elman_step(std::span<const double> x, std::span<const double> h_prev, const ModelParams& params) {
  check_unit(params, UnitType::kElman);
  check_input(x, params);
  check_state(h_prev, params, "h_prev");
  UnitOutput out;
  out.h = affine(params.gates[0], x, h_prev);
  apply_relu(out.h);
  out.gates.push_back(out.h);
  return out;
}

UnitOutput lstm_step(std::span<const double> x, std::span<const double> h_prev,
                     std::span<const double> c_prev, const ModelParams& params) {
  using namespace lstm_gate;
  check_unit(params, UnitType::kLstm);
  check_input(x, params);
  check_state(h_prev, params, "h_prev");
  check_state(c_prev, params, "c_prev");
  UnitOutput out;
  out.gates.resize(4);
  for (std::size_t g = 0; g < 4; ++g) {
    out.gates[g] = affine(params.gates[g], x, h_prev);
    if (g == kJ) {
      apply_tanh(out.gates[g]);
    } else {
      apply_sigmoid(out.gates[g]);
    }
  }
  const std::size_t n = params.dims.hidden;
  out.c.resize(n);
  out.h.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.c[k] = c_prev[k] * out.gates[kF][k] + out.gates[kI][k] * out.gates[kJ][k];
    out.h[k] = std::tanh(out.c[k]) * out.gates[kO][k];
  }
  return out;
}

UnitOutput gru_step(std::span<const double> x, std::span<const double> h_prev, const ModelParams& params) {
  using namespace gru_gate;
  check_unit(params, UnitType::kGru);
  check_input(x, params);
  check_state(h_prev, params, "h_prev");
  const std::size_t n = params.dims.hidden;
  UnitOutput out;
  out.gates.resize(3);
  out.gates[kR] = affine(params.gates[kR], x, h_prev);
  apply_sigmoid(out.gates[kR]);
  out.gates[kZ] = affine(params.gates[kZ], x, h_prev);
  apply_sigmoid(out.gates[kZ]);
  out.reset_h.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.reset_h[k] = out.gates[kR][k] * h_prev[k];
  out.gates[kCandidate] = affine(params.gates[kCandidate], x, out.reset_h);
  apply_tanh(out.gates[kCandidate]);
  out.h.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double z = out.gates[kZ][k];
    out.h[k] = z * h_prev[k] + (1.0 - z) * out.gates[kCandidate][k];
  }
  return out;
}

UnitOutput unit_step(std::span<const double> x, std::span<const double> h_prev,
                     std::span<const double> c_prev, const ModelParams& params) {
  switch (params.unit) {
    case UnitType::kFfn: {
      check_input(x, params);
      UnitOutput out;
      out.h = affine(params.gates[0], x, {});
      apply_relu(out.h);
      out.gates.push_back(out.h);
      return out;
    }
    case UnitType::kElman:
      return elman_step(x, h_prev, params);
    case UnitType::kGru:
      return gru_step(x, h_prev, params);
    case UnitType::kLstm:
      return lstm_step(x, h_prev, c_prev, params);
  }
  throw Error("unknown unit type");
}

Vector output_logits(std::span<const double> h, const ModelParams& params) {
  check_state(h, params, "hidden vector");
  Vector logits(params.dims.outputs());
  as_vector(logits).noalias() = as_matrix(params.output) * view(h);
  return logits;
}

Vector softmax(std::span<const double> logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  Vector p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

double negative_log_likelihood(std::span<const double> logits, int gold) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - mx);
  return -(logits[static_cast<std::size_t>(gold)] - mx - std::log(sum));
}

double l2_penalty(const ModelParams& params, double lambda) {
  return 0.5 * lambda * params.squared_norm();
}

void add_l2_gradient(const ModelParams& params, double lambda, ModelParams& grads) {
  if (lambda == 0.0) return;
  std::vector<const Tensor*> src;
  params.for_each([&src](const std::string&, const Tensor& t) { src.push_back(&t); });
  std::size_t i = 0;
  grads.for_each([&](const std::string&, Tensor& g) {
    as_vector(g) += lambda * as_vector(*src[i++]);
  });
}

double loss(const std::vector<Vector>& logits, std::span<const int> gold, const ModelParams& params,
            double lambda) {
  if (logits.size() != gold.size()) throw ShapeError("loss: one gold index per step required");
  double total = 0.0;
  for (std::size_t t = 0; t < logits.size(); ++t) total += negative_log_likelihood(logits[t], gold[t]);
  return total + l2_penalty(params, lambda);
}

TrainingExample make_example(const Sentence& sentence, const Vocab& vocab,
                             const std::vector<Transition>& transitions) {
  const SentenceIds ids = sentence_ids(sentence, vocab);
  TrainingExample ex;
  ex.features.reserve(transitions.size());
  ex.gold.reserve(transitions.size());
  Configuration c = initial_config(sentence.size());
  for (const Transition& t : transitions) {
    ex.features.push_back(extract_features(c, ids, vocab));
    ex.gold.push_back(t.index(vocab.num_labels()));
    c = c.apply(t);
  }
  return ex;
}

SequenceResult forward_sequence(const ModelParams& params, std::span<const FeatureIndices> features,
                                std::span<const int> gold, const DropoutConfig& dropout, Rng* rng) {
  if (features.size() != gold.size()) throw ShapeError("forward_sequence: one gold index per step required");
  const std::size_t n = params.dims.hidden;
  const int outputs = static_cast<int>(params.dims.outputs());
  SequenceResult result;
  result.steps.reserve(features.size());
  Vector h(n, 0.0), c(n, 0.0);
  for (std::size_t t = 0; t < features.size(); ++t) {
    if (gold[t] < 0 || gold[t] >= outputs) {
      throw ShapeError("gold index " + std::to_string(gold[t]) + " outside output layer");
    }
    StepCache s;
    s.features = features[t];
    s.gold = gold[t];
    if (rng != nullptr && dropout.input_rate > 0.0) {
      s.input_mask = dropout_mask(params.dims.input_size(), dropout.input_rate, *rng);
      s.x = lookup_input(features[t], params, s.input_mask);
    } else {
      s.x = lookup_input(features[t], params);
    }
    if (params.unit != UnitType::kFfn) {
      s.h_prev = h;
      if (params.unit == UnitType::kLstm) s.c_prev = c;
    }
    s.unit = unit_step(s.x, h, c, params);
    s.h_out = s.unit.h;
    if (rng != nullptr && dropout.hidden_rate > 0.0) {
      s.hidden_mask = dropout_mask(n, dropout.hidden_rate, *rng);
      for (std::size_t k = 0; k < n; ++k) s.h_out[k] *= s.hidden_mask[k];
    }
    const Vector logits = output_logits(s.h_out, params);
    check_finite(logits, "output logits");
    s.probs = softmax(logits);
    result.loss += negative_log_likelihood(logits, s.gold);
    if (params.unit != UnitType::kFfn) {
      h = s.unit.h;
      if (params.unit == UnitType::kLstm) c = s.unit.c;
    }
    result.steps.push_back(std::move(s));
  }
  return result;
}

SequenceResult forward_sequence(const ModelParams& params, const TrainingExample& example,
                                const DropoutConfig& dropout, Rng* rng) {
  return forward_sequence(params, example.features, example.gold, dropout, rng);
}

void backward_sequence(const ModelParams& params, const SequenceResult& forward, std::size_t truncation,
                       ModelParams& grads) {
  check_forward(params, forward, grads);
  const std::size_t steps = forward.steps.size();
  if (params.unit != UnitType::kFfn && truncation < steps - 1) {
    backward_sequence_windowed(params, forward, truncation, grads);
    return;
  }
  // Single backward sweep; exact BPTT (FFN steps are independent).
  const std::size_t n = params.dims.hidden;
  Vector dh_next(n, 0.0), dc_next(n, 0.0), dh_prev, dc_prev;
  std::vector<Vector> dpre;
  for (std::size_t t = steps; t-- > 0;) {
    const StepCache& s = forward.steps[t];
    Vector dh = output_backward(params, s, grads);
    if (params.unit != UnitType::kFfn) as_vector(dh) += as_vector(dh_next);
    unit_backward(params, s, dh, dc_next, dpre, dh_prev, dc_prev);
    accumulate_step(params, s, dpre, grads);
    dh_next.swap(dh_prev);
    dc_next.swap(dc_prev);
  }
}

void backward_sequence_windowed(const ModelParams& params, const SequenceResult& forward,
                                std::size_t truncation, ModelParams& grads) {
  check_forward(params, forward, grads);
  const std::size_t steps = forward.steps.size();
  const std::size_t n = params.dims.hidden;
  const std::size_t num_gates = params.gates.size();
  std::vector<std::vector<Vector>> total(steps, std::vector<Vector>(num_gates, Vector(n, 0.0)));
  std::vector<Vector> dpre;
  Vector dh, dc, dh_prev, dc_prev;
  for (std::size_t t = 0; t < steps; ++t) {
    dh = output_backward(params, forward.steps[t], grads);
    dc.assign(n, 0.0);
    const std::size_t first = t >= truncation ? t - truncation : 0;
    for (std::size_t s = t + 1; s-- > first;) {
      unit_backward(params, forward.steps[s], dh, dc, dpre, dh_prev, dc_prev);
      for (std::size_t g = 0; g < num_gates; ++g) as_vector(total[s][g]) += as_vector(dpre[g]);
      dh.swap(dh_prev);
      dc.swap(dc_prev);
    }
  }
  for (std::size_t s = steps; s-- > 0;) accumulate_step(params, forward.steps[s], total[s], grads);
}

}  // namespace depparse
