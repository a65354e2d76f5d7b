#include <cmath>

#include "depparse/bootstrap.h"
#include "depparse/error.h"
#include "depparse/evaluation.h"
#include "depparse/parser.h"
#include "depparse/trainer.h"
#include "doctest.h"
#include "unit/test_util.h"

using namespace depparse;

namespace {

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.hidden = 16;
  cfg.word_dim = cfg.tag_dim = cfg.label_dim = 4;
  cfg.batch_size = 4;
  cfg.epochs = 3;
  cfg.min_word_freq = 1;
  return cfg;
}

ModelParams scalar_like(double value) {
  ModelDims d;
  d.words = 4;
  d.tags = 3;
  d.labels = 1;
  d.word_dim = d.tag_dim = d.label_dim = 1;
  d.hidden = 1;
  ModelParams p = ModelParams::zeros(UnitType::kFfn, d);
  p.output.fill(value);
  return p;
}

}  // namespace

TEST_CASE("momentum update by hand") {
  ModelParams theta = scalar_like(1.0);
  const ModelParams g = scalar_like(1.0);
  MomentumState state = MomentumState::zeros_like(theta);
  sgd_momentum_update(theta, g, state, 0.05, 0.9);
  CHECK(theta.output[0] == doctest::Approx(0.95).epsilon(1e-15));
  sgd_momentum_update(theta, g, state, 0.05, 0.9);
  CHECK(state.velocity.output[0] == doctest::Approx(-0.095).epsilon(1e-15));
  CHECK(theta.output[0] == doctest::Approx(0.855).epsilon(1e-15));
  // Untouched tensors stay zero.
  CHECK(theta.gates[0].w_x == g.gates[0].w_x);
}

TEST_CASE("zero momentum is plain SGD and zero gradient is a no-op") {
  ModelParams theta = testing::random_model(UnitType::kGru, scalar_like(0).dims, 3, 1.0);
  const ModelParams start = theta;
  const ModelParams g = testing::random_model(UnitType::kGru, theta.dims, 4, 1.0);
  MomentumState state = MomentumState::zeros_like(theta);
  sgd_momentum_update(theta, g, state, 0.1, 0.0);
  CHECK(theta.gates[2].w_h[0] == start.gates[2].w_h[0] - 0.1 * g.gates[2].w_h[0]);
  CHECK(theta.word_emb[2] == start.word_emb[2] - 0.1 * g.word_emb[2]);

  ModelParams same = start;
  MomentumState fresh = MomentumState::zeros_like(same);
  sgd_momentum_update(same, same.zeros_like(), fresh, 0.05, 0.9);
  CHECK(same == start);

  CHECK_THROWS_AS(sgd_momentum_update(same, ModelParams::zeros(UnitType::kLstm, same.dims), fresh, 0.05, 0.9),
                  ShapeError);
}

TEST_CASE("embedding rows without gradient keep their velocity") {
  ModelParams theta = scalar_like(0.0);
  MomentumState state = MomentumState::zeros_like(theta);
  state.velocity.word_emb.fill(0.5);
  state.velocity.output.fill(0.5);
  ModelParams g = theta.zeros_like();
  g.word_emb[1] = 1.0;  // row 1 only
  sgd_momentum_update(theta, g, state, 0.1, 0.9);
  CHECK(theta.word_emb[0] == 0.0);
  CHECK(state.velocity.word_emb[0] == 0.5);
  CHECK(theta.word_emb[1] == doctest::Approx(0.45 - 0.1));
  // Dense tensors decay their velocity even with zero gradient.
  CHECK(theta.output[0] == doctest::Approx(0.45));
}

TEST_CASE("batch gradient is averaged over transitions") {
  const auto corpus = generate_synthetic({6, 7, 20, 4});
  const Vocab vocab = build_vocab(corpus, 1);
  TrainConfig cfg = small_config();
  cfg.dropout_rate = 0.0;
  cfg.l2 = 0.0;
  const ModelParams p = random_init(UnitType::kLstm, model_dims(vocab, cfg), 5);
  std::vector<TrainingExample> ex;
  for (const auto& s : corpus) ex.push_back(make_example(s, vocab, oracle_sequence(gold_tree(s, vocab))));
  std::vector<const TrainingExample*> once, twice;
  for (const auto& e : ex) {
    once.push_back(&e);
    twice.push_back(&e);
    twice.push_back(&e);
  }
  const auto a = batch_gradient(p, once, cfg, nullptr);
  const auto b = batch_gradient(p, twice, cfg, nullptr);
  CHECK(b.transitions == 2 * a.transitions);
  std::vector<const Tensor*> ta, tb;
  a.grads.for_each([&](const std::string&, const Tensor& t) { ta.push_back(&t); });
  b.grads.for_each([&](const std::string&, const Tensor& t) { tb.push_back(&t); });
  double worst = 0.0;
  for (std::size_t i = 0; i < ta.size(); ++i)
    for (std::size_t k = 0; k < ta[i]->size(); ++k) worst = std::max(worst, std::abs((*ta[i])[k] - (*tb[i])[k]));
  CHECK(worst < 1e-12);

  // The L2 term is added once, after averaging.
  TrainConfig reg = cfg;
  reg.l2 = 0.25;
  const auto c = batch_gradient(p, once, reg, nullptr);
  CHECK(c.grads.output[7] == doctest::Approx(a.grads.output[7] + 0.25 * p.output[7]).epsilon(1e-12));
}

TEST_CASE("training is deterministic and leaves the input untouched") {
  const auto corpus = generate_synthetic({20, 8, 20, 6});
  const auto dev = generate_synthetic({5, 8, 20, 7});
  const Vocab vocab = build_vocab(corpus, 1);
  const TrainConfig cfg = small_config();
  const ModelParams init = random_init(UnitType::kGru, model_dims(vocab, cfg), cfg.seed);
  const ModelParams copy = init;
  std::size_t calls = 0;
  const auto a = train(corpus, dev, vocab, cfg, init, [&](const EpochLog&) { ++calls; });
  const auto b = train(corpus, dev, vocab, cfg, init);
  CHECK(init == copy);
  CHECK(calls == cfg.epochs);
  CHECK(format_epoch_log(a.log) == format_epoch_log(b.log));
  CHECK(a.best == b.best);
  CHECK(a.log.size() == 3);
  CHECK(a.best_epoch >= 1);
  CHECK(a.best_dev_uas == doctest::Approx(std::max({a.log[0].dev_uas, a.log[1].dev_uas, a.log[2].dev_uas})));

  // The selected params reproduce the logged dev score.
  const Score s = score(dev, parse_corpus(dev, a.best, vocab));
  CHECK(s.uas() == a.best_dev_uas);

  TrainConfig other = cfg;
  other.seed = 2;
  CHECK(format_epoch_log(train(corpus, dev, vocab, other, init).log) != format_epoch_log(a.log));
}

TEST_CASE("epoch log format") {
  std::vector<EpochLog> log(2);
  log[0] = {1, 1.5, 50.0, 40.0, 3.0, true};
  log[1] = {2, 0.25, 0.0, 0.0, 1.0, false};
  CHECK(format_epoch_log(log) == "epoch\tloss\tdev_uas\tdev_las\n1\t1.500000\t50.00\t40.00\n2\t0.250000\t-\t-\n");
}

TEST_CASE("ffn learns a toy corpus") {
  const auto corpus = generate_synthetic({60, 8, 30, 21});
  const Vocab vocab = build_vocab(corpus, 1);
  TrainConfig cfg = small_config();
  cfg.hidden = 64;
  cfg.word_dim = cfg.tag_dim = cfg.label_dim = 16;
  cfg.batch_size = 2;
  cfg.dropout_rate = 0.0;
  cfg.epochs = 20;
  const auto r = train(corpus, {}, vocab, cfg, random_init(UnitType::kFfn, model_dims(vocab, cfg), 1));
  CHECK(r.best_epoch == cfg.epochs);
  CHECK(r.log.back().train_loss < r.log.front().train_loss);
  const Score s = score(corpus, parse_corpus(corpus, r.best, vocab));
  CHECK(s.uas() >= 95.0);
}

TEST_CASE("weight decay shrinks parameters") {
  ModelParams p = testing::random_model(UnitType::kLstm, scalar_like(0).dims, 8, 1.0);
  MomentumState state = MomentumState::zeros_like(p);
  double norm = p.squared_norm();
  for (int step = 0; step < 10; ++step) {
    ModelParams g = p.zeros_like();
    add_l2_gradient(p, 1.0, g);
    sgd_momentum_update(p, g, state, 0.05, 0.0);
    const double next = p.squared_norm();
    CHECK(next < norm);
    norm = next;
  }

  const auto corpus = generate_synthetic({20, 6, 20, 3});
  const Vocab vocab = build_vocab(corpus, 1);
  TrainConfig cfg = small_config();
  const ModelParams init = random_init(UnitType::kFfn, model_dims(vocab, cfg), 1);
  cfg.l2 = 0.0;
  const double free_norm = train(corpus, {}, vocab, cfg, init).best.squared_norm();
  cfg.l2 = 1.0;
  const double decayed = train(corpus, {}, vocab, cfg, init).best.squared_norm();
  CHECK(decayed < free_norm);
}

TEST_CASE("training errors and filtering") {
  const auto corpus = generate_synthetic({5, 6, 20, 3});
  const Vocab vocab = build_vocab(corpus, 1);
  const TrainConfig cfg = small_config();
  const ModelParams init = random_init(UnitType::kFfn, model_dims(vocab, cfg), 1);
  CHECK_THROWS(train({}, {}, vocab, cfg, init));

  Sentence crossing;
  const int heads[] = {3, 4, 0, 3};
  for (int i = 0; i < 4; ++i) crossing.tokens.push_back({i + 1, "w", "T0", heads[i], i == 2 ? "root" : corpus[0].tokens[0].label});
  std::vector<Sentence> kept;
  std::vector<Sentence> mixed = corpus;
  mixed.push_back(crossing);
  CHECK(filter_projective(mixed, kept) == 1);
  CHECK(kept == corpus);
  CHECK_THROWS(train({crossing}, {}, vocab, cfg, init));

  TrainConfig bad = cfg;
  bad.momentum = 1.0;
  CHECK_THROWS(bad.validate());
  bad = cfg;
  bad.batch_size = 0;
  CHECK_THROWS(train(corpus, {}, vocab, bad, init));
  ModelDims d = init.dims;
  d.words += 1;
  CHECK_THROWS(train(corpus, {}, vocab, cfg, random_init(UnitType::kFfn, d, 1)));

  TrainConfig wild = cfg;
  wild.learning_rate = 1e6;
  wild.epochs = 5;
  CHECK_THROWS_WITH(train(corpus, {}, vocab, wild, random_init(UnitType::kElman, init.dims, 1)),
                    doctest::Contains("diverged"));

  TrainConfig tau0 = cfg;
  tau0.truncation = 0;
  CHECK_NOTHROW(tau0.validate());
}

TEST_CASE("default hyperparameters") {
  const TrainConfig cfg;
  CHECK(cfg.learning_rate == 0.05);
  CHECK(cfg.momentum == 0.9);
  CHECK(cfg.l2 == 1e-8);
  CHECK(cfg.dropout_rate == 0.3);
  CHECK(cfg.truncation == 5);
  CHECK(cfg.hidden == 256);
  CHECK(cfg.word_dim == 100);
  CHECK(cfg.tag_dim == 100);
  CHECK(cfg.label_dim == 100);
  CHECK(cfg.dropout().input_rate == 0.3);
  CHECK(cfg.dropout().hidden_rate == 0.3);
}

TEST_CASE("bootstrap experiment report") {
  const auto corpus = generate_synthetic({20, 6, 20, 3});
  const auto dev = generate_synthetic({5, 6, 20, 4});
  const Vocab vocab = build_vocab(corpus, 1);
  TrainConfig cfg = small_config();
  cfg.epochs = 2;
  ExperimentModels models;
  std::vector<std::string> phases;
  const auto report = run_bootstrap_experiment(corpus, dev, vocab, cfg, GateSelection::parse(UnitType::kLstm, "o"),
                                               nullptr, {}, &models,
                                               [&](const std::string& phase, const EpochLog&) { phases.push_back(phase); });
  REQUIRE(report.rows.size() == 3);
  CHECK(report.gates == "o");
  CHECK(phases.size() == 6);
  CHECK(models.ffn.unit == UnitType::kFfn);
  CHECK(models.baseline.unit == UnitType::kLstm);
  CHECK(models.bootstrapped.unit == UnitType::kLstm);
  for (const auto& row : report.rows) {
    CHECK(row.dev_uas >= 0.0);
    CHECK(row.dev_las <= row.dev_uas);
  }
  const std::string kv = report.key_values();
  CHECK(kv.find("ffn_baseline") != std::string::npos);
  CHECK(kv.find("rnn_baseline") != std::string::npos);
  CHECK(kv.find("bootstrapped") != std::string::npos);
  CHECK(report.table().find("bootstrapped o gate") != std::string::npos);

  const auto again = run_bootstrap_experiment(corpus, dev, vocab, cfg, GateSelection::parse(UnitType::kLstm, "o"));
  CHECK(again.key_values() == kv);
}
