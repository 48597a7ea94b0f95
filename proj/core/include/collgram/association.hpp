#pragma once

#include <optional>
#include <string_view>

#include "collgram/ngram_index.hpp"

namespace collgram {

/// Association of one bigram; every measure uses base-2 logarithms.
struct AssociationScores {
  double mi = 0;
  double t_score = 0;
  double log_dice = 0;
  double gravity = 0;

  friend bool operator==(const AssociationScores&, const AssociationScores&) = default;
};

// All measures throw std::domain_error when an operand is below 1 or not
// finite.

/// log2(N * f(x,y) / (f(x) * f(y)))
double mutual_information(double pair_count, double first_count, double second_count,
                          double total_tokens);

/// (f(x,y) - f(x) * f(y) / N) / sqrt(f(x,y))
double t_score(double pair_count, double first_count, double second_count, double total_tokens);

/// log2(2 * f(x,y) / (f(x) + f(y)))
double log_dice(double pair_count, double first_count, double second_count);

/// Gravity Counts:
/// log2(f(x,y) * n(x) / f(x)) + log2(f(x,y) * n'(y) / f(y))
double gravity(double pair_count, double first_count, double second_count,
               double first_right_diversity, double second_left_diversity);

AssociationScores score_operands(const BigramOperands& ops);

/// Absent when the bigram is not in the table.
std::optional<AssociationScores> score_bigram(const NGramTable& table, std::string_view first,
                                              std::string_view second);

}  // namespace collgram
