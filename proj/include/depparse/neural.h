#ifndef DEPPARSE_NEURAL_H_
#define DEPPARSE_NEURAL_H_

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "depparse/feature_model.h"
#include "depparse/model.h"
#include "depparse/rng.h"
#include "depparse/tensor.h"
#include "depparse/transition_system.h"

namespace depparse {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Dropout on the input vector and on the hidden vector fed to the output
// layer. Recurrent connections are never dropped.
struct DropoutConfig {
  double input_rate = 0.0;
  double hidden_rate = 0.0;
};

// Inverted dropout mask: 0 with probability `rate`, else 1 / (1 - rate).
Vector dropout_mask(std::size_t n, double rate, Rng& rng);

// Result of one hidden-unit step.
struct UnitOutput {
  Vector h;
  Vector c;                  // LSTM only
  std::vector<Vector> gates; // post-activation, in gate order
  Vector reset_h;            // GRU only: r ⊙ h_prev
};

// h = max(0, W x + b_h); logits = W_hy h.
struct FfnOutput {
  Vector h;
  Vector logits;
};
FfnOutput ffn_forward(std::span<const double> x, const ModelParams& params);

UnitOutput elman_step(std::span<const double> x, std::span<const double> h_prev, const ModelParams& params);
UnitOutput lstm_step(std::span<const double> x, std::span<const double> h_prev,
                     std::span<const double> c_prev, const ModelParams& params);
UnitOutput gru_step(std::span<const double> x, std::span<const double> h_prev, const ModelParams& params);

// Dispatches on params.unit. FFN ignores the previous state.
UnitOutput unit_step(std::span<const double> x, std::span<const double> h_prev,
                     std::span<const double> c_prev, const ModelParams& params);

// logits = W_hy h, laid out as SHIFT, LEFT_ARC(0..L-1), RIGHT_ARC(0..L-1).
Vector output_logits(std::span<const double> h, const ModelParams& params);

Vector softmax(std::span<const double> logits);
// -log softmax(logits)[gold], computed with max subtraction.
double negative_log_likelihood(std::span<const double> logits, int gold);

double l2_penalty(const ModelParams& params, double lambda);
// grads += lambda * params.
void add_l2_gradient(const ModelParams& params, double lambda, ModelParams& grads);

// Sum of per-step negative log-likelihoods plus (lambda / 2) * |theta|^2.
double loss(const std::vector<Vector>& logits, std::span<const int> gold, const ModelParams& params,
            double lambda);

// Activations saved by the forward pass for backpropagation.
struct StepCache {
  FeatureIndices features;
  Vector input_mask;  // empty when no input dropout
  Vector x;           // input after dropout
  Vector h_prev;
  Vector c_prev;
  UnitOutput unit;
  Vector hidden_mask; // empty when no hidden dropout
  Vector h_out;       // h after hidden dropout
  Vector probs;
  int gold = -1;
};

struct SequenceResult {
  double loss = 0.0;  // summed negative log-likelihood, no regularizer
  std::vector<StepCache> steps;
};

// Gold transition path of one sentence, precomputed for training.
struct TrainingExample {
  std::vector<FeatureIndices> features;
  std::vector<int> gold;  // output indices
};

// Replays `transitions` from the initial configuration and extracts the
// features at every step. Throws TransitionError for an illegal sequence.
TrainingExample make_example(const Sentence& sentence, const Vocab& vocab,
                             const std::vector<Transition>& transitions);

// Runs the unit over one sentence's transition sequence. The hidden state
// starts at zero and threads across steps (not for FFN). With `rng` set,
// dropout masks are sampled per step and stored in the caches; without it
// the pass is deterministic and mask-free.
SequenceResult forward_sequence(const ModelParams& params, std::span<const FeatureIndices> features,
                                std::span<const int> gold, const DropoutConfig& dropout = {},
                                Rng* rng = nullptr);
SequenceResult forward_sequence(const ModelParams& params, const TrainingExample& example,
                                const DropoutConfig& dropout = {}, Rng* rng = nullptr);

inline constexpr std::size_t kFullBptt = std::numeric_limits<std::size_t>::max();

// Accumulates into `grads` the gradient of forward.loss. The error from the
// loss at step t reaches back to step t - truncation at most (sliding
// window); truncation >= steps - 1 is exact backpropagation through time.
// The L2 term is not included; see add_l2_gradient.
void backward_sequence(const ModelParams& params, const SequenceResult& forward,
                       std::size_t truncation, ModelParams& grads);

// Sliding-window implementation regardless of the truncation value. Exposed
// so tests can compare it with the single-sweep path.
void backward_sequence_windowed(const ModelParams& params, const SequenceResult& forward,
                                std::size_t truncation, ModelParams& grads);

}  // namespace depparse

#endif  // DEPPARSE_NEURAL_H_
