#ifndef DEPPARSE_TRAINER_H_
#define DEPPARSE_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depparse/bootstrap.h"
#include "depparse/embeddings.h"
#include "depparse/model.h"
#include "depparse/neural.h"
#include "depparse/treebank.h"

namespace depparse {

struct TrainConfig {
  double learning_rate = 0.05;
  double momentum = 0.9;
  double l2 = 1e-8;
  double dropout_rate = 0.3;  // input layer and hidden layer
  bool hidden_dropout = true;
  std::size_t truncation = 5;  // kFullBptt for full backpropagation through time
  std::size_t hidden = 256;
  std::size_t word_dim = 100;
  std::size_t tag_dim = 100;
  std::size_t label_dim = 100;
  std::size_t batch_size = 32;  // sentences per update
  std::size_t epochs = 20;
  std::uint64_t seed = 1;
  std::size_t min_word_freq = 2;
  std::size_t eval_every = 1;  // epochs between dev evaluations
  std::size_t workers = 1;     // threads for dev parsing

  // Throws Error describing the first invalid field.
  void validate() const;
  DropoutConfig dropout() const { return {dropout_rate, hidden_dropout ? dropout_rate : 0.0}; }
};

ModelDims model_dims(const Vocab& vocab, const TrainConfig& cfg);

struct MomentumState {
  ModelParams velocity;
  static MomentumState zeros_like(const ModelParams& params) { return {params.zeros_like()}; }
};

// v <- mu v - lr g; theta <- theta + v. Embedding rows whose gradient is all
// zero are left untouched (velocity included).
void sgd_momentum_update(ModelParams& params, const ModelParams& grads, MomentumState& state,
                         double learning_rate, double momentum);

struct BatchGradient {
  ModelParams grads;
  double loss = 0.0;  // summed negative log-likelihood
  std::size_t transitions = 0;
};

// Averaged (per transition) gradient of a batch plus lambda * theta.
BatchGradient batch_gradient(const ModelParams& params, std::span<const TrainingExample* const> batch,
                             const TrainConfig& cfg, Rng* rng);

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // per transition
  double dev_uas = 0.0;
  double dev_las = 0.0;
  double seconds = 0.0;     // wall time, not part of the written log
  bool evaluated = false;
};

struct TrainResult {
  ModelParams best;
  std::size_t best_epoch = 0;
  double best_dev_uas = -1.0;
  double best_dev_las = -1.0;
  std::vector<EpochLog> log;
  std::size_t skipped_nonprojective = 0;
};

// Keeps only projective sentences; returns how many were dropped.
std::size_t filter_projective(const std::vector<Sentence>& in, std::vector<Sentence>& out);

// Mini-batch SGD with momentum over oracle transition sequences. Returns the
// parameters with the best dev UAS (the final ones when dev is empty).
// Throws if no usable training sentence remains.
TrainResult train(const std::vector<Sentence>& train_set, const std::vector<Sentence>& dev_set,
                  const Vocab& vocab, const TrainConfig& cfg, ModelParams init,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

// Line-oriented epoch log: "epoch loss dev_uas dev_las" per line. Wall time
// is omitted so identical runs produce identical logs.
std::string format_epoch_log(const std::vector<EpochLog>& log);

struct ExperimentRow {
  std::string name;
  double dev_uas = 0.0;
  double dev_las = 0.0;
};

struct ExperimentReport {
  UnitType unit = UnitType::kLstm;
  std::string gates;
  std::vector<ExperimentRow> rows;  // FFN baseline, RNN baseline, bootstrapped

  std::string table() const;
  std::string key_values() const;
};

struct ExperimentModels {
  ModelParams ffn, baseline, bootstrapped;
};

// Trains an FFN baseline, bootstraps `selection` from it and trains that,
// then trains a randomly initialized RNN baseline with the same seed.
ExperimentReport run_bootstrap_experiment(const std::vector<Sentence>& train_set,
                                          const std::vector<Sentence>& dev_set, const Vocab& vocab,
                                          const TrainConfig& cfg, const GateSelection& selection,
                                          const EmbeddingTable* pretrained = nullptr,
                                          const BootstrapOptions& bootstrap_options = {},
                                          ExperimentModels* models = nullptr,
                                          const std::function<void(const std::string&, const EpochLog&)>& on_epoch = {});

}  // namespace depparse

#endif  // DEPPARSE_TRAINER_H_
