#include "collgram/association.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace collgram {

namespace {

void require_operand(double v, const char* name) {
  if (!(std::isfinite(v) && v >= 1.0)) {
    throw std::domain_error(std::string("association operand ") + name + " must be >= 1, got " +
                            std::to_string(v));
  }
}

}  // namespace

double mutual_information(double pair_count, double first_count, double second_count,
                          double total_tokens) {
  require_operand(pair_count, "f(x,y)");
  require_operand(first_count, "f(x)");
  require_operand(second_count, "f(y)");
  require_operand(total_tokens, "N");
  // Split into two ratios so large corpora cannot overflow the product.
  return std::log2(total_tokens / first_count) + std::log2(pair_count / second_count);
}

double t_score(double pair_count, double first_count, double second_count, double total_tokens) {
  require_operand(pair_count, "f(x,y)");
  require_operand(first_count, "f(x)");
  require_operand(second_count, "f(y)");
  require_operand(total_tokens, "N");
  const double expected = first_count * second_count / total_tokens;
  return (pair_count - expected) / std::sqrt(pair_count);
}

double log_dice(double pair_count, double first_count, double second_count) {
  require_operand(pair_count, "f(x,y)");
  require_operand(first_count, "f(x)");
  require_operand(second_count, "f(y)");
  return std::log2(2.0 * pair_count / (first_count + second_count));
}

double gravity(double pair_count, double first_count, double second_count,
               double first_right_diversity, double second_left_diversity) {
  require_operand(pair_count, "f(x,y)");
  require_operand(first_count, "f(x)");
  require_operand(second_count, "f(y)");
  require_operand(first_right_diversity, "n(x)");
  require_operand(second_left_diversity, "n'(y)");
  return std::log2(pair_count * first_right_diversity / first_count) +
         std::log2(pair_count * second_left_diversity / second_count);
}

AssociationScores score_operands(const BigramOperands& ops) {
  const auto fxy = static_cast<double>(ops.pair_count);
  const auto fx = static_cast<double>(ops.first_count);
  const auto fy = static_cast<double>(ops.second_count);
  const auto n = static_cast<double>(ops.total_tokens);
  return {mutual_information(fxy, fx, fy, n), t_score(fxy, fx, fy, n), log_dice(fxy, fx, fy),
          gravity(fxy, fx, fy, static_cast<double>(ops.first_right_div),
                  static_cast<double>(ops.second_left_div))};
}

std::optional<AssociationScores> score_bigram(const NGramTable& table, std::string_view first,
                                              std::string_view second) {
  // A retained bigram implies n(x) >= 1 and n'(y) >= 1, so gravity is defined.
  const auto ops = table.lookup_bigram(first, second);
  if (!ops) return std::nullopt;
  return score_operands(*ops);
}

}  // namespace collgram
