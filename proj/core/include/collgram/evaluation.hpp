#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collgram/dataset.hpp"
#include "collgram/ngram_index.hpp"
#include "collgram/scoring.hpp"
#include "collgram/sentiment.hpp"

namespace collgram {

enum class ScoreMode { collgram, sentiment, hybrid };

std::string_view to_string(ScoreMode mode) noexcept;
std::optional<ScoreMode> parse_score_mode(std::string_view s) noexcept;

struct ScoredLabel {
  double score = 0;
  Label label = Label::depressed;
};

struct SweepResult {
  double threshold = 0;
  double accuracy = 0;
};

// Tries 0, 100 and the midpoint between every pair of adjacent distinct
// scores; returns the most accurate cut, the smallest one on ties. Throws
// std::invalid_argument on empty input.
SweepResult sweep_threshold(std::span<const ScoredLabel> scores);

struct EntryOutcome {
  std::string id;
  double score = 0;
  Label label = Label::depressed;
  Label predicted = Label::depressed;
};

enum class OutcomeCategory { unwell_misdiagnosed, healthy_misdiagnosed, unwell_correct, healthy_correct };

std::string_view to_string(OutcomeCategory c) noexcept;
OutcomeCategory categorize(Label label, Label predicted) noexcept;

/// Three-way summary: correctly diagnosed, unwell misdiagnosed (false
/// negatives), healthy misdiagnosed (false positives). Percentages sum to 100.
struct EvalReport {
  ScoreMode mode = ScoreMode::collgram;
  double best_threshold = 0;
  double accuracy = 0;
  double correct_pct = 0;
  double unwell_misdiagnosed_pct = 0;
  double healthy_misdiagnosed_pct = 0;
  std::size_t too_short_entries = 0;
  std::vector<EntryOutcome> per_entry;
};

/// Sweeps the threshold over the given scores and fills the percentages.
EvalReport build_report(ScoreMode mode, std::span<const std::string> ids,
                        std::span<const ScoredLabel> scores);

// Standardizes and profiles every entry, scores it in `mode` and sweeps the
// threshold. `provider` is required for sentiment and hybrid modes
// (ConfigError otherwise); provider failures abort with a ProviderError
// listing every failed id.
EvalReport evaluate(std::span<const LabeledEntry> dataset, const NGramTable& table,
                    const ScoreModel& model, const SentimentProvider* provider, ScoreMode mode,
                    unsigned workers = 0);

/// Text handed to sentiment providers: the standardized tokens joined by spaces.
std::string sentiment_input(const StandardizedEntry& entry);

std::string report_json(const EvalReport& report);
void save_report(const EvalReport& report, const std::filesystem::path& path);

/// Table-style summary line: mode, correct %, unwell misdiagnosed %, healthy misdiagnosed %.
std::string report_summary(const EvalReport& report);

/// `id,score,label,predicted,category` rows plus a trailing `threshold,<value>`.
std::string figure_data_csv(const EvalReport& report);
void emit_figure_data(const EvalReport& report, const std::filesystem::path& path);

}  // namespace collgram
