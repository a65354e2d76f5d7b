#ifndef DEPPARSE_EVALUATION_H_
#define DEPPARSE_EVALUATION_H_

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "depparse/treebank.h"

namespace depparse {

// Gold POS tags treated as punctuation: `` '' : , .
const std::set<std::string>& default_punctuation();

struct Score {
  std::size_t scored = 0;
  std::size_t correct_heads = 0;
  std::size_t correct_labels = 0;  // head and label correct

  double uas() const;  // percent; 0 when nothing was scored
  double las() const;
  // Percentages with two decimals, rounded half up.
  std::string uas_string() const;
  std::string las_string() const;
};

// Throws Error naming the sentence index when the corpora do not align.
Score score(const std::vector<Sentence>& gold, const std::vector<Annotation>& predicted,
            bool exclude_punct = true, const std::set<std::string>& punctuation = default_punctuation());

// correct / total as a percentage with two decimals, rounded half up.
std::string format_percent(std::size_t correct, std::size_t total);

}  // namespace depparse

#endif  // DEPPARSE_EVALUATION_H_
