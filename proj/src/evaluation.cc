#include "depparse/evaluation.h"

#include <cstdint>

#include "depparse/error.h"

namespace depparse {

const std::set<std::string>& default_punctuation() {
  static const std::set<std::string> punct{"``", "''", ":", ",", "."};
  return punct;
}

double Score::uas() const { return scored == 0 ? 0.0 : 100.0 * static_cast<double>(correct_heads) / static_cast<double>(scored); }
double Score::las() const { return scored == 0 ? 0.0 : 100.0 * static_cast<double>(correct_labels) / static_cast<double>(scored); }
std::string Score::uas_string() const { return format_percent(correct_heads, scored); }
std::string Score::las_string() const { return format_percent(correct_labels, scored); }

std::string format_percent(std::size_t correct, std::size_t total) {
  if (total == 0) return "0.00";
  // Hundredths of a percent, rounded half up in integer arithmetic.
  const std::uint64_t c = correct, t = total;
  const std::uint64_t hundredths = (c * 20000 + t) / (2 * t);
  std::string frac = std::to_string(hundredths % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return std::to_string(hundredths / 100) + "." + frac;
}

Score score(const std::vector<Sentence>& gold, const std::vector<Annotation>& predicted, bool exclude_punct,
            const std::set<std::string>& punctuation) {
  if (gold.size() != predicted.size()) {
    throw Error("evaluation: " + std::to_string(gold.size()) + " gold sentences but " +
                std::to_string(predicted.size()) + " predicted");
  }
  Score s;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const Sentence& g = gold[i];
    const Annotation& p = predicted[i];
    if (p.heads.size() != g.size() || p.labels.size() != g.size()) {
      throw Error("evaluation: sentence " + std::to_string(i) + " has " + std::to_string(g.size()) +
                  " gold tokens but " + std::to_string(p.heads.size()) + " predicted");
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Token& t = g.tokens[k];
      if (exclude_punct && punctuation.count(t.pos)) continue;
      ++s.scored;
      if (p.heads[k] == t.head) {
        ++s.correct_heads;
        if (p.labels[k] == t.label) ++s.correct_labels;
      }
    }
  }
  return s;
}

}  // namespace depparse
