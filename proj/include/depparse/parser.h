#ifndef DEPPARSE_PARSER_H_
#define DEPPARSE_PARSER_H_

#include <cstddef>
#include <vector>

#include "depparse/model.h"
#include "depparse/transition_system.h"
#include "depparse/treebank.h"

namespace depparse {

struct ParseStats {
  std::size_t sentences = 0;
  std::size_t unknown_tags = 0;  // tags missing from the vocabulary, read as NULL
};

// Greedy decoding: at every step illegal transitions are masked out and the
// highest-scoring legal one is applied (lowest index on ties). Always takes
// exactly 2n transitions for n tokens.
std::vector<Transition> parse_transitions(const Sentence& sentence, const ModelParams& params,
                                          const Vocab& vocab, ParseStats* stats = nullptr);

Annotation parse_sentence(const Sentence& sentence, const ModelParams& params, const Vocab& vocab,
                          ParseStats* stats = nullptr);

// Parses sentences on `workers` threads. The output is in input order and
// does not depend on the number of workers.
std::vector<Annotation> parse_corpus(const std::vector<Sentence>& sentences, const ModelParams& params,
                                     const Vocab& vocab, std::size_t workers = 1,
                                     ParseStats* stats = nullptr);

}  // namespace depparse

#endif  // DEPPARSE_PARSER_H_
