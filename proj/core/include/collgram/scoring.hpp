#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>

#include "collgram/profile.hpp"

namespace collgram {

enum class Label { depressed, healthy };

std::string_view to_string(Label label) noexcept;
std::optional<Label> parse_label(std::string_view s) noexcept;

/// Value in [0, 100]: 0 is a fully depressive text, 100 a healthy one.
class WellnessScore {
 public:
  /// Throws std::out_of_range outside [0, 100] or for NaN.
  explicit WellnessScore(double value);
  /// Clamps into range; NaN still throws.
  static WellnessScore clamped(double value);

  double value() const noexcept { return value_; }
  friend auto operator<=>(const WellnessScore&, const WellnessScore&) = default;

 private:
  double value_;
};

inline constexpr std::size_t kFeatureCount = 5;
using FeatureVector = std::array<double, kFeatureCount>;

/// mean_mi, mean_t, mean_log_dice, mean_gravity, absent_ratio.
FeatureVector profile_features(const CollgramProfile& p) noexcept;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "mean_mi", "mean_t", "mean_log_dice", "mean_gravity", "absent_ratio"};

/// Standardized logistic map from a profile to a wellness score.
struct ScoreModel {
  FeatureVector feature_means{};
  FeatureVector feature_stds{1, 1, 1, 1, 1};
  FeatureVector weights{};
  double degenerate_weight = 0;
  double bias = 0;

  std::size_t trained_on = 0;
  std::uint64_t seed = 42;
  std::size_t epochs = 500;
  double learning_rate = 0.1;
  double training_accuracy = 0;

  friend bool operator==(const ScoreModel&, const ScoreModel&) = default;
};

struct FitOptions {
  std::uint64_t seed = 42;
  std::size_t epochs = 500;
  double learning_rate = 0.1;
};

// Standardizes the features over the training set and fits logistic weights
// by full-batch gradient ascent on the likelihood of `healthy`. Constant
// features keep std 1 and weight 0. Throws ConfigError when a class is
// missing or the spans differ in length.
ScoreModel fit_model(std::span<const CollgramProfile> profiles, std::span<const Label> labels,
                     const FitOptions& options = {});

/// 100 * sigmoid(weights . standardized features + degenerate term + bias).
WellnessScore score_profile(const ScoreModel& model, const CollgramProfile& profile);

/// Healthy iff score >= threshold.
Label classify(WellnessScore score, double threshold) noexcept;

/// Arithmetic mean of the two scores.
WellnessScore hybrid_score(WellnessScore collgram, WellnessScore sentiment) noexcept;

inline constexpr std::string_view kModelMagic = "#collgram-model";
inline constexpr int kModelVersion = 1;

void write_model(const ScoreModel& model, std::ostream& out);
ScoreModel read_model(std::istream& in);
void save_model(const ScoreModel& model, const std::filesystem::path& path);
ScoreModel load_model(const std::filesystem::path& path);

}  // namespace collgram
