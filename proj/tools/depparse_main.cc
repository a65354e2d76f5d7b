// Command-line front end: train, parse, evaluate, synth, experiment, inspect.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "depparse/bootstrap.h"
#include "depparse/embeddings.h"
#include "depparse/error.h"
#include "depparse/evaluation.h"
#include "depparse/parser.h"
#include "depparse/serialization.h"
#include "depparse/trainer.h"
#include "depparse/treebank.h"

namespace fs = std::filesystem;
using namespace depparse;

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct TrainArgs {
  TrainConfig cfg;
  std::string unit = "ffn";
  std::string train_path, dev_path, out_path, embeddings_path;
  std::string init = "random";
  std::string from_model;
  std::string gates;
  bool add_forget_bias = false;
  bool full_bptt = false;
  bool no_hidden_dropout = false;
  bool quiet = false;
};

void add_hyperparameters(CLI::App* app, TrainArgs& a) {
  TrainConfig& c = a.cfg;
  app->add_option("--lr", c.learning_rate, "Learning rate")->capture_default_str();
  app->add_option("--momentum", c.momentum, "Momentum")->capture_default_str();
  app->add_option("--l2", c.l2, "L2 regularization strength")->capture_default_str();
  app->add_option("--dropout", c.dropout_rate, "Dropout rate on the input and hidden layers")
      ->capture_default_str();
  app->add_flag("--no-hidden-dropout", a.no_hidden_dropout, "Apply dropout to the input layer only");
  app->add_option("--tau", c.truncation, "BPTT truncation limit (steps)")->capture_default_str();
  app->add_flag("--full-bptt", a.full_bptt, "Backpropagate through the whole sentence");
  app->add_option("--hidden", c.hidden, "Hidden layer width")->capture_default_str();
  app->add_option("--word-dim", c.word_dim, "Word embedding size")->capture_default_str();
  app->add_option("--tag-dim", c.tag_dim, "Tag embedding size")->capture_default_str();
  app->add_option("--label-dim", c.label_dim, "Label embedding size")->capture_default_str();
  app->add_option("--batch-size", c.batch_size, "Sentences per update")->capture_default_str();
  app->add_option("--epochs", c.epochs, "Training epochs")->capture_default_str();
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_option("--min-word-freq", c.min_word_freq, "Words rarer than this map to UNK")
      ->capture_default_str();
  app->add_option("--eval-every", c.eval_every, "Epochs between dev evaluations")->capture_default_str();
  app->add_option("--workers", c.workers, "Threads for dev parsing")->capture_default_str();
  app->add_option("--embeddings", a.embeddings_path, "Pretrained word vectors (GloVe text format)");
  app->add_flag("--quiet", a.quiet, "No per-epoch progress on stderr");
}

void finalize(TrainArgs& a) {
  if (a.full_bptt) a.cfg.truncation = kFullBptt;
  a.cfg.hidden_dropout = !a.no_hidden_dropout;
}

std::vector<Sentence> read_treebank(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("--") + what + " is required");
  return read_conll_file(path);
}

void write_text(const fs::path& path, const std::string& text) { write_binary_file(path, text); }

std::function<void(const EpochLog&)> progress(const TrainArgs& a, const std::string& name) {
  if (a.quiet) return {};
  return [name](const EpochLog& e) {
    if (e.evaluated) {
      std::fprintf(stderr, "[%s] epoch %zu loss %.6f dev UAS %.2f LAS %.2f (%.1fs)\n", name.c_str(), e.epoch,
                   e.train_loss, e.dev_uas, e.dev_las, e.seconds);
    } else {
      std::fprintf(stderr, "[%s] epoch %zu loss %.6f (%.1fs)\n", name.c_str(), e.epoch, e.train_loss, e.seconds);
    }
  };
}

int cmd_train(TrainArgs& a, const CLI::App& sub) {
  finalize(a);
  const UnitType unit = parse_unit(a.unit);
  if (a.out_path.empty()) throw UsageError("--out is required");
  if (a.init != "random" && a.init != "bootstrap") throw UsageError("--init must be random or bootstrap");
  if (!a.gates.empty() && unit == UnitType::kFfn) throw UsageError("--gates is not valid with --unit ffn");
  if (a.init == "bootstrap" && a.from_model.empty()) throw UsageError("--init bootstrap requires --from-model");
  if (a.init == "bootstrap" && unit == UnitType::kFfn) throw UsageError("--init bootstrap needs a recurrent --unit");

  const auto train_set = read_treebank(a.train_path, "train");
  const std::vector<Sentence> dev_set = a.dev_path.empty() ? std::vector<Sentence>{} : read_conll_file(a.dev_path);

  Vocab vocab;
  ModelParams init;
  if (a.init == "bootstrap") {
    LoadedModel source = load_model(a.from_model);
    const ModelDims& d = source.params.dims;
    auto conflict = [&sub](const char* flag, std::size_t given, std::size_t have) {
      if (sub.count(flag) && given != have) {
        throw UsageError(std::string(flag) + " " + std::to_string(given) + " conflicts with the source model (" +
                         std::to_string(have) + ")");
      }
    };
    conflict("--hidden", a.cfg.hidden, d.hidden);
    conflict("--word-dim", a.cfg.word_dim, d.word_dim);
    conflict("--tag-dim", a.cfg.tag_dim, d.tag_dim);
    conflict("--label-dim", a.cfg.label_dim, d.label_dim);
    a.cfg.hidden = d.hidden;
    a.cfg.word_dim = d.word_dim;
    a.cfg.tag_dim = d.tag_dim;
    a.cfg.label_dim = d.label_dim;
    vocab = source.vocab;
    const GateSelection selection =
        a.gates.empty() ? GateSelection::all(unit) : GateSelection::parse(unit, a.gates);
    BootstrapOptions options;
    options.add_forget_bias = a.add_forget_bias;
    options.target_dims = model_dims(vocab, a.cfg);
    init = bootstrap_model(source.params, selection, a.cfg.seed, options);
    if (!a.quiet) std::fprintf(stderr, "bootstrapped %s gates {%s} from %s\n", a.unit.c_str(),
                               selection.to_string().c_str(), a.from_model.c_str());
  } else {
    vocab = build_vocab(train_set, a.cfg.min_word_freq);
    init = random_init(unit, model_dims(vocab, a.cfg), a.cfg.seed);
    if (!a.embeddings_path.empty()) {
      const auto table = load_embeddings(a.embeddings_path, a.cfg.word_dim);
      const std::size_t n = apply_pretrained(table, vocab, init);
      if (!a.quiet) std::fprintf(stderr, "pretrained vectors for %zu of %zu words\n", n, vocab.num_words() - 3);
    }
  }

  const TrainResult result = train(train_set, dev_set, vocab, a.cfg, std::move(init), progress(a, a.unit));
  if (result.skipped_nonprojective > 0 && !a.quiet) {
    std::fprintf(stderr, "skipped %zu non-projective training sentences\n", result.skipped_nonprojective);
  }
  save_model(a.out_path, result.best, vocab);
  write_text(a.out_path + ".log", format_epoch_log(result.log));
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "unit=%s\ninit=%s\nepochs=%zu\nbest_epoch=%zu\ndev_uas=%.2f\ndev_las=%.2f\n"
                "skipped_nonprojective=%zu\n",
                a.unit.c_str(), a.init.c_str(), a.cfg.epochs, result.best_epoch,
                std::max(result.best_dev_uas, 0.0), std::max(result.best_dev_las, 0.0),
                result.skipped_nonprojective);
  write_text(a.out_path + ".report", buf);
  std::printf("%s", buf);
  return 0;
}

struct ParseArgs {
  std::string model, input, output;
  std::size_t workers = 1;
};

int cmd_parse(const ParseArgs& a) {
  const LoadedModel m = load_model(a.model);
  const auto sentences = read_conll_file(a.input);
  ParseStats stats;
  const auto predicted = parse_corpus(sentences, m.params, m.vocab, a.workers, &stats);
  write_conll_file(a.output, sentences, predicted);
  if (stats.unknown_tags > 0) {
    std::fprintf(stderr, "warning: %zu tokens had tags unknown to the model\n", stats.unknown_tags);
  }
  return 0;
}

struct EvalArgs {
  std::string gold, pred, report, punct;
  bool include_punct = false;
};

int cmd_evaluate(const EvalArgs& a) {
  const auto gold = read_conll_file(a.gold);
  const auto pred_sents = read_conll_file(a.pred);
  std::vector<Annotation> pred;
  for (const auto& s : pred_sents) pred.push_back(gold_annotation(s));
  std::set<std::string> punct = default_punctuation();
  if (!a.punct.empty()) {
    punct.clear();
    std::stringstream ss(a.punct);
    for (std::string p; std::getline(ss, p, ' ');) {
      if (!p.empty()) punct.insert(p);
    }
  }
  const Score s = score(gold, pred, !a.include_punct, punct);
  std::printf("UAS: %s\nLAS: %s\nscored_tokens: %zu\n", s.uas_string().c_str(), s.las_string().c_str(), s.scored);
  if (!a.report.empty()) {
    write_text(a.report, "uas=" + s.uas_string() + "\nlas=" + s.las_string() +
                             "\nscored_tokens=" + std::to_string(s.scored) +
                             "\ncorrect_heads=" + std::to_string(s.correct_heads) +
                             "\ncorrect_labels=" + std::to_string(s.correct_labels) + "\n");
  }
  return 0;
}

struct SynthArgs {
  SyntheticOptions options;
  std::string out;
};

int cmd_synth(const SynthArgs& a) {
  if (a.out.empty()) throw UsageError("--out is required");
  const auto sentences = generate_synthetic(a.options);
  std::vector<Annotation> gold;
  for (const auto& s : sentences) gold.push_back(gold_annotation(s));
  write_conll_file(a.out, sentences, gold);
  return 0;
}

struct ExperimentArgs {
  TrainArgs train;
  std::string report;
  std::string save_prefix;
};

int cmd_experiment(ExperimentArgs& e) {
  TrainArgs& a = e.train;
  finalize(a);
  const UnitType unit = parse_unit(a.unit);
  if (unit == UnitType::kFfn) throw UsageError("experiment needs --unit elman, gru or lstm");
  const auto train_set = read_treebank(a.train_path, "train");
  const auto dev_set = read_treebank(a.dev_path, "dev");
  const Vocab vocab = build_vocab(train_set, a.cfg.min_word_freq);
  const GateSelection selection = a.gates.empty() ? GateSelection::all(unit) : GateSelection::parse(unit, a.gates);
  EmbeddingTable table;
  if (!a.embeddings_path.empty()) table = load_embeddings(a.embeddings_path, a.cfg.word_dim);
  BootstrapOptions options;
  options.add_forget_bias = a.add_forget_bias;
  ExperimentModels models;
  std::function<void(const std::string&, const EpochLog&)> on_epoch;
  if (!a.quiet) {
    on_epoch = [&a](const std::string& name, const EpochLog& log) { progress(a, name)(log); };
  }
  const ExperimentReport report =
      run_bootstrap_experiment(train_set, dev_set, vocab, a.cfg, selection,
                               a.embeddings_path.empty() ? nullptr : &table, options, &models, on_epoch);
  std::printf("%s", report.table().c_str());
  if (!e.report.empty()) write_text(e.report, report.key_values());
  if (!e.save_prefix.empty()) {
    save_model(e.save_prefix + ".ffn.mdl", models.ffn, vocab);
    save_model(e.save_prefix + ".baseline.mdl", models.baseline, vocab);
    save_model(e.save_prefix + ".bootstrapped.mdl", models.bootstrapped, vocab);
  }
  return 0;
}

int cmd_inspect(const std::string& path) {
  const LoadedModel m = load_model(path);
  const ModelDims& d = m.params.dims;
  std::printf("unit %s\nwords %zu tags %zu labels %zu\nword_dim %zu tag_dim %zu label_dim %zu hidden %zu\n",
              std::string(unit_name(m.params.unit)).c_str(), d.words, d.tags, d.labels, d.word_dim, d.tag_dim,
              d.label_dim, d.hidden);
  m.params.for_each([](const std::string& name, const Tensor& t) {
    double mx = 0.0;
    for (double v : t.values()) mx = std::max(mx, std::abs(v));
    std::printf("%-10s %-12s max|x| %.6g\n", name.c_str(), t.shape_string().c_str(), mx);
  });
  std::printf("parameters %zu\n", m.params.num_parameters());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transition-based dependency parser with FFN, Elman, GRU and LSTM scorers"};
  app.set_config("--config", "", "TOML/INI file with option values (flags take precedence)");
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train a model on a CoNLL treebank");
  train->add_option("--unit", train_args.unit, "Hidden unit")->capture_default_str()
      ->check(CLI::IsMember({"ffn", "elman", "gru", "lstm"}));
  train->add_option("--train", train_args.train_path, "Training treebank")->required();
  train->add_option("--dev", train_args.dev_path, "Development treebank for model selection");
  train->add_option("--out", train_args.out_path, "Output model file")->required();
  train->add_option("--init", train_args.init, "random or bootstrap")->capture_default_str();
  train->add_option("--from-model", train_args.from_model, "Trained FFN model to bootstrap from");
  train->add_option("--gates", train_args.gates, "Gates to bootstrap, e.g. i,j,f,o or o or r,z,htilde (default all)");
  train->add_flag("--add-forget-bias", train_args.add_forget_bias, "Add 1 to a bootstrapped LSTM forget bias");
  add_hyperparameters(train, train_args);

  ParseArgs parse_args;
  auto* parse = app.add_subcommand("parse", "Parse a CoNLL file with a trained model");
  parse->add_option("--model", parse_args.model, "Model file")->required();
  parse->add_option("--input", parse_args.input, "Input CoNLL file")->required();
  parse->add_option("--output", parse_args.output, "Output CoNLL file")->required();
  parse->add_option("--workers", parse_args.workers, "Parser threads")->capture_default_str();

  EvalArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Score predicted trees against gold (UAS/LAS)");
  evaluate->add_option("--gold", eval_args.gold, "Gold CoNLL file")->required();
  evaluate->add_option("--pred", eval_args.pred, "Predicted CoNLL file")->required();
  evaluate->add_flag("--include-punct", eval_args.include_punct, "Score punctuation tokens too");
  evaluate->add_option("--punct", eval_args.punct, "Space-separated punctuation tags (default: `` '' : , .)");
  evaluate->add_option("--report", eval_args.report, "Write a key=value report here");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic projective treebank");
  synth->add_option("--sentences", synth_args.options.num_sentences, "Number of sentences")->capture_default_str();
  synth->add_option("--max-len", synth_args.options.max_len, "Maximum sentence length")->capture_default_str();
  synth->add_option("--vocab", synth_args.options.vocab_size, "Vocabulary size")->capture_default_str();
  synth->add_option("--seed", synth_args.options.seed, "Random seed")->capture_default_str();
  synth->add_option("--out", synth_args.out, "Output CoNLL file")->required();

  ExperimentArgs exp_args;
  exp_args.train.unit = "lstm";
  auto* experiment = app.add_subcommand("experiment", "FFN baseline vs RNN baseline vs bootstrapped RNN");
  experiment->add_option("--unit", exp_args.train.unit, "Recurrent unit")->capture_default_str()
      ->check(CLI::IsMember({"elman", "gru", "lstm"}));
  experiment->add_option("--train", exp_args.train.train_path, "Training treebank")->required();
  experiment->add_option("--dev", exp_args.train.dev_path, "Development treebank")->required();
  experiment->add_option("--gates", exp_args.train.gates, "Gates to bootstrap (default all)");
  experiment->add_flag("--add-forget-bias", exp_args.train.add_forget_bias, "Add 1 to a bootstrapped LSTM forget bias");
  experiment->add_option("--report", exp_args.report, "Write a key=value report here");
  experiment->add_option("--save-prefix", exp_args.save_prefix, "Save the three models as PREFIX.{ffn,baseline,bootstrapped}.mdl");
  add_hyperparameters(experiment, exp_args.train);

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect", "Print a model's dimensions and tensors");
  inspect->add_option("model", inspect_path, "Model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help lands here too, with code 0; anything else is a usage error.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*train) return cmd_train(train_args, *train);
    if (*parse) return cmd_parse(parse_args);
    if (*evaluate) return cmd_evaluate(eval_args);
    if (*synth) return cmd_synth(synth_args);
    if (*experiment) return cmd_experiment(exp_args);
    if (*inspect) return cmd_inspect(inspect_path);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
