#include "depparse/trainer.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "depparse/error.h"
#include "depparse/evaluation.h"
#include "depparse/parser.h"
#include "depparse/transition_system.h"

namespace depparse {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error("learning rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw Error("momentum must be in [0, 1)");
  if (!(l2 >= 0.0)) throw Error("l2 must be >= 0");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw Error("dropout rate must be in [0, 1)");
  if (hidden < 1 || word_dim < 1 || tag_dim < 1 || label_dim < 1) throw Error("dimensions must be >= 1");
  if (batch_size < 1) throw Error("batch size must be >= 1");
  if (min_word_freq < 1) throw Error("min word frequency must be >= 1");
  if (eval_every < 1) throw Error("eval interval must be >= 1");
}

ModelDims model_dims(const Vocab& vocab, const TrainConfig& cfg) {
  ModelDims d;
  d.words = vocab.num_words();
  d.tags = vocab.num_tags();
  d.labels = vocab.num_labels();
  d.word_dim = cfg.word_dim;
  d.tag_dim = cfg.tag_dim;
  d.label_dim = cfg.label_dim;
  d.hidden = cfg.hidden;
  return d;
}

namespace {

void update_dense(Tensor& p, const Tensor& g, Tensor& v, double lr, double mu) {
  auto pv = as_vector(p);
  auto vv = as_vector(v);
  vv = mu * vv - lr * as_vector(g);
  pv += vv;
}

void update_rows(Tensor& p, const Tensor& g, Tensor& v, double lr, double mu) {
  const std::size_t d = p.cols();
  for (std::size_t r = 0; r < p.rows(); ++r) {
    const auto grow = g.row(r);
    if (std::all_of(grow.begin(), grow.end(), [](double x) { return x == 0.0; })) continue;
    auto prow = p.row(r);
    auto vrow = v.row(r);
    for (std::size_t k = 0; k < d; ++k) {
      vrow[k] = mu * vrow[k] - lr * grow[k];
      prow[k] += vrow[k];
    }
  }
}

}  // namespace

void sgd_momentum_update(ModelParams& params, const ModelParams& grads, MomentumState& state,
                         double learning_rate, double momentum) {
  std::vector<const Tensor*> g;
  grads.for_each([&g](const std::string&, const Tensor& t) { g.push_back(&t); });
  std::vector<Tensor*> v;
  state.velocity.for_each([&v](const std::string&, Tensor& t) { v.push_back(&t); });
  std::size_t count = 0;
  params.for_each([&](const std::string&, Tensor&) { ++count; });
  if (g.size() != count || v.size() != count) throw ShapeError("sgd update: parameter structure mismatch");

  std::size_t i = 0;
  params.for_each([&](const std::string& name, Tensor& p) {
    if (!p.same_shape(*g[i]) || !p.same_shape(*v[i])) {
      throw ShapeError("sgd update: shape mismatch for " + name);
    }
    if (name.rfind("E_", 0) == 0) {
      update_rows(p, *g[i], *v[i], learning_rate, momentum);
    } else {
      update_dense(p, *g[i], *v[i], learning_rate, momentum);
    }
    ++i;
  });
}

BatchGradient batch_gradient(const ModelParams& params, std::span<const TrainingExample* const> batch,
                             const TrainConfig& cfg, Rng* rng) {
  BatchGradient out{params.zeros_like(), 0.0, 0};
  const DropoutConfig dropout = cfg.dropout();
  for (const TrainingExample* ex : batch) {
    if (ex->gold.empty()) continue;
    const SequenceResult fwd = forward_sequence(params, *ex, dropout, rng);
    backward_sequence(params, fwd, cfg.truncation, out.grads);
    out.loss += fwd.loss;
    out.transitions += ex->gold.size();
  }
  if (out.transitions > 0) {
    const double scale = 1.0 / static_cast<double>(out.transitions);
    out.grads.for_each([scale](const std::string&, Tensor& t) { as_vector(t) *= scale; });
  }
  add_l2_gradient(params, cfg.l2, out.grads);
  return out;
}

std::size_t filter_projective(const std::vector<Sentence>& in, std::vector<Sentence>& out) {
  std::size_t skipped = 0;
  for (const auto& s : in) {
    if (!s.empty() && is_projective(s)) {
      out.push_back(s);
    } else {
      ++skipped;
    }
  }
  return skipped;
}

TrainResult train(const std::vector<Sentence>& train_set, const std::vector<Sentence>& dev_set,
                  const Vocab& vocab, const TrainConfig& cfg, ModelParams init,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  cfg.validate();
  init.validate();
  if (train_set.empty()) throw Error("training set is empty");
  if (init.dims.words != vocab.num_words() || init.dims.tags != vocab.num_tags() ||
      init.dims.labels != vocab.num_labels()) {
    throw ShapeError("initial model does not match the vocabulary");
  }

  TrainResult result;
  std::vector<Sentence> usable;
  result.skipped_nonprojective = filter_projective(train_set, usable);
  if (usable.empty()) throw Error("no projective training sentences");

  std::vector<TrainingExample> examples;
  examples.reserve(usable.size());
  for (const auto& s : usable) {
    examples.push_back(make_example(s, vocab, oracle_sequence(gold_tree(s, vocab))));
  }

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);

  ModelParams params = std::move(init);
  MomentumState momentum = MomentumState::zeros_like(params);
  result.best = params;

  std::vector<const TrainingExample*> batch;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    rng.shuffle(order.begin(), order.end());
    double loss_sum = 0.0;
    std::size_t transitions = 0;
    for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
      batch.clear();
      for (std::size_t k = b; k < std::min(order.size(), b + cfg.batch_size); ++k) {
        batch.push_back(&examples[order[k]]);
      }
      BatchGradient g = batch_gradient(params, batch, cfg, &rng);
      if (!std::isfinite(g.loss)) {
        throw Error("training diverged in epoch " + std::to_string(epoch) + " (non-finite loss)");
      }
      loss_sum += g.loss;
      transitions += g.transitions;
      sgd_momentum_update(params, g.grads, momentum, cfg.learning_rate, cfg.momentum);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = transitions ? loss_sum / static_cast<double>(transitions) : 0.0;
    if (!dev_set.empty() && (epoch % cfg.eval_every == 0 || epoch == cfg.epochs)) {
      const auto predicted = parse_corpus(dev_set, params, vocab, cfg.workers);
      const Score s = score(dev_set, predicted, true);
      entry.dev_uas = s.uas();
      entry.dev_las = s.las();
      entry.evaluated = true;
      if (entry.dev_uas > result.best_dev_uas) {
        result.best = params;
        result.best_epoch = epoch;
        result.best_dev_uas = entry.dev_uas;
        result.best_dev_las = entry.dev_las;
      }
    }
    entry.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  if (dev_set.empty()) {
    result.best = std::move(params);
    result.best_epoch = cfg.epochs;
  }
  return result;
}

std::string format_epoch_log(const std::vector<EpochLog>& log) {
  std::string out = "epoch\tloss\tdev_uas\tdev_las\n";
  char buf[128];
  for (const auto& e : log) {
    if (e.evaluated) {
      std::snprintf(buf, sizeof buf, "%zu\t%.6f\t%.2f\t%.2f\n", e.epoch, e.train_loss, e.dev_uas, e.dev_las);
    } else {
      std::snprintf(buf, sizeof buf, "%zu\t%.6f\t-\t-\n", e.epoch, e.train_loss);
    }
    out += buf;
  }
  return out;
}

std::string ExperimentReport::table() const {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-36s %8s %8s\n", "model", "UAS", "LAS");
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-36s %8.2f %8.2f\n", r.name.c_str(), r.dev_uas, r.dev_las);
    out += buf;
  }
  return out;
}

std::string ExperimentReport::key_values() const {
  static const char* keys[] = {"ffn_baseline", "rnn_baseline", "bootstrapped"};
  std::string out = "unit=" + std::string(unit_name(unit)) + "\ngates=" + gates + "\n";
  char buf[128];
  for (std::size_t i = 0; i < rows.size() && i < 3; ++i) {
    std::snprintf(buf, sizeof buf, "%s.dev_uas=%.2f\n%s.dev_las=%.2f\n", keys[i], rows[i].dev_uas, keys[i],
                  rows[i].dev_las);
    out += buf;
  }
  return out;
}

ExperimentReport run_bootstrap_experiment(const std::vector<Sentence>& train_set,
                                          const std::vector<Sentence>& dev_set, const Vocab& vocab,
                                          const TrainConfig& cfg, const GateSelection& selection,
                                          const EmbeddingTable* pretrained,
                                          const BootstrapOptions& bootstrap_options, ExperimentModels* models,
                                          const std::function<void(const std::string&, const EpochLog&)>& on_epoch) {
  const UnitType unit = selection.unit();
  const ModelDims dims = model_dims(vocab, cfg);
  auto progress = [&on_epoch](const std::string& name) {
    return [&on_epoch, name](const EpochLog& e) {
      if (on_epoch) on_epoch(name, e);
    };
  };

  ModelParams ffn_init = random_init(UnitType::kFfn, dims, cfg.seed);
  if (pretrained != nullptr) apply_pretrained(*pretrained, vocab, ffn_init);
  TrainResult ffn = train(train_set, dev_set, vocab, cfg, std::move(ffn_init), progress("ffn"));

  BootstrapOptions options = bootstrap_options;
  options.target_dims = dims;
  ModelParams boot_init = bootstrap_model(ffn.best, selection, cfg.seed, options);
  TrainResult boot = train(train_set, dev_set, vocab, cfg, std::move(boot_init), progress("bootstrapped"));

  ModelParams base_init = random_init(unit, dims, cfg.seed);
  if (pretrained != nullptr) apply_pretrained(*pretrained, vocab, base_init);
  TrainResult base = train(train_set, dev_set, vocab, cfg, std::move(base_init), progress("baseline"));

  std::string uname(unit_name(unit));
  for (auto& ch : uname) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  ExperimentReport report;
  report.unit = unit;
  report.gates = selection.to_string();
  report.rows.push_back({"FFN baseline", ffn.best_dev_uas, ffn.best_dev_las});
  report.rows.push_back({uname + " baseline", base.best_dev_uas, base.best_dev_las});
  std::string boot_name = "bootstrapped " + uname;
  if (selection.gates().size() < num_gates(unit)) {
    boot_name = "bootstrapped " + report.gates + (selection.gates().size() == 1 ? " gate" : " gates");
  }
  report.rows.push_back({boot_name, boot.best_dev_uas, boot.best_dev_las});
  if (models != nullptr) {
    models->ffn = std::move(ffn.best);
    models->baseline = std::move(base.best);
    models->bootstrapped = std::move(boot.best);
  }
  return report;
}

}  // namespace depparse
