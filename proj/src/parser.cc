#include "depparse/parser.h"

#include <atomic>
#include <limits>
#include <thread>

#include "depparse/error.h"
#include "depparse/feature_model.h"
#include "depparse/neural.h"

namespace depparse {

std::vector<Transition> parse_transitions(const Sentence& sentence, const ModelParams& params,
                                          const Vocab& vocab, ParseStats* stats) {
  if (sentence.empty()) throw Error("cannot parse an empty sentence");
  const SentenceIds ids = sentence_ids(sentence, vocab);
  const std::size_t labels = vocab.num_labels();
  if (params.dims.labels != labels) {
    throw ShapeError("model has " + std::to_string(params.dims.labels) + " labels, vocabulary has " +
                     std::to_string(labels));
  }
  const std::size_t n = params.dims.hidden;
  Vector h(n, 0.0), c(n, 0.0);
  Configuration config = initial_config(sentence.size());
  std::vector<Transition> out;
  out.reserve(2 * sentence.size());
  while (!config.terminal()) {
    const FeatureIndices f = extract_features(config, ids, vocab);
    const Vector x = lookup_input(f, params);
    UnitOutput u = unit_step(x, h, c, params);
    const Vector logits = output_logits(u.h, params);

    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < static_cast<int>(logits.size()); ++k) {
      const Transition t = Transition::from_index(k, labels);
      if (!config.is_legal(t)) continue;
      if (best < 0 || logits[static_cast<std::size_t>(k)] > best_score) {
        best = k;
        best_score = logits[static_cast<std::size_t>(k)];
      }
    }
    if (best < 0) throw TransitionError("no legal transition in a non-terminal configuration");
    const Transition chosen = Transition::from_index(best, labels);
    config = config.apply(chosen);
    out.push_back(chosen);
    if (params.unit != UnitType::kFfn) {
      h = std::move(u.h);
      if (params.unit == UnitType::kLstm) c = std::move(u.c);
    }
  }
  if (stats != nullptr) {
    ++stats->sentences;
    stats->unknown_tags += ids.unknown_tags;
  }
  return out;
}

Annotation parse_sentence(const Sentence& sentence, const ModelParams& params, const Vocab& vocab,
                          ParseStats* stats) {
  const auto seq = parse_transitions(sentence, params, vocab, stats);
  const GoldTree tree = transitions_to_tree(seq, sentence.size());
  Annotation a;
  for (std::size_t d = 1; d <= sentence.size(); ++d) {
    a.heads.push_back(tree.heads[d]);
    a.labels.push_back(vocab.label(tree.labels[d]));
  }
  return a;
}

std::vector<Annotation> parse_corpus(const std::vector<Sentence>& sentences, const ModelParams& params,
                                     const Vocab& vocab, std::size_t workers, ParseStats* stats) {
  std::vector<Annotation> out(sentences.size());
  std::vector<ParseStats> local(std::max<std::size_t>(workers, 1));
  if (workers <= 1 || sentences.size() < 2) {
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      out[i] = parse_sentence(sentences[i], params, vocab, &local[0]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < sentences.size(); i = next++) {
            out[i] = parse_sentence(sentences[i], params, vocab, &local[w]);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  if (stats != nullptr) {
    for (const auto& l : local) {
      stats->sentences += l.sentences;
      stats->unknown_tags += l.unknown_tags;
    }
  }
  return out;
}

}  // namespace depparse
