#include "collgram/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "collgram/errors.hpp"
#include "collgram/profile.hpp"
#include "io_util.hpp"

namespace collgram {

std::string_view to_string(ScoreMode mode) noexcept {
  switch (mode) {
    case ScoreMode::collgram: return "collgram";
    case ScoreMode::sentiment: return "sentiment";
    case ScoreMode::hybrid: return "hybrid";
  }
  return "collgram";
}

std::optional<ScoreMode> parse_score_mode(std::string_view s) noexcept {
  if (s == "collgram") return ScoreMode::collgram;
  if (s == "sentiment") return ScoreMode::sentiment;
  if (s == "hybrid") return ScoreMode::hybrid;
  return std::nullopt;
}

SweepResult sweep_threshold(std::span<const ScoredLabel> scores) {
  if (scores.empty()) throw std::invalid_argument("sweep_threshold needs at least one score");

  std::vector<double> depressed, healthy, distinct;
  for (const auto& s : scores) {
    (s.label == Label::healthy ? healthy : depressed).push_back(s.score);
    distinct.push_back(s.score);
  }
  std::ranges::sort(depressed);
  std::ranges::sort(healthy);
  std::ranges::sort(distinct);
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<double> candidates{0.0, 100.0};
  for (std::size_t i = 1; i < distinct.size(); ++i) {
    candidates.push_back(distinct[i - 1] + (distinct[i] - distinct[i - 1]) / 2);
  }
  std::ranges::sort(candidates);
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Ascending candidates: count scores strictly below each cut.
  std::size_t dep_below = 0, healthy_below = 0;
  std::size_t best_correct = 0;
  double best_threshold = candidates.front();
  bool first = true;
  for (const double t : candidates) {
    while (dep_below < depressed.size() && depressed[dep_below] < t) ++dep_below;
    while (healthy_below < healthy.size() && healthy[healthy_below] < t) ++healthy_below;
    const std::size_t correct = dep_below + (healthy.size() - healthy_below);
    if (first || correct > best_correct) {
      best_correct = correct;
      best_threshold = t;
      first = false;
    }
  }
  return {best_threshold, static_cast<double>(best_correct) / static_cast<double>(scores.size())};
}

std::string_view to_string(OutcomeCategory c) noexcept {
  switch (c) {
    case OutcomeCategory::unwell_misdiagnosed: return "unwell_misdiagnosed";
    case OutcomeCategory::healthy_misdiagnosed: return "healthy_misdiagnosed";
    case OutcomeCategory::unwell_correct: return "unwell_correct";
    case OutcomeCategory::healthy_correct: return "healthy_correct";
  }
  return "unwell_correct";
}

OutcomeCategory categorize(Label label, Label predicted) noexcept {
  if (label == Label::depressed) {
    return predicted == Label::depressed ? OutcomeCategory::unwell_correct
                                         : OutcomeCategory::unwell_misdiagnosed;
  }
  return predicted == Label::healthy ? OutcomeCategory::healthy_correct
                                     : OutcomeCategory::healthy_misdiagnosed;
}

EvalReport build_report(ScoreMode mode, std::span<const std::string> ids,
                        std::span<const ScoredLabel> scores) {
  if (ids.size() != scores.size()) throw std::invalid_argument("ids and scores differ in length");
  const SweepResult sweep = sweep_threshold(scores);

  EvalReport report;
  report.mode = mode;
  report.best_threshold = sweep.threshold;
  report.accuracy = sweep.accuracy;
  std::size_t correct = 0, fn = 0, fp = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const Label predicted = scores[i].score >= sweep.threshold ? Label::healthy : Label::depressed;
    report.per_entry.push_back({ids[i], scores[i].score, scores[i].label, predicted});
    switch (categorize(scores[i].label, predicted)) {
      case OutcomeCategory::unwell_misdiagnosed: ++fn; break;
      case OutcomeCategory::healthy_misdiagnosed: ++fp; break;
      default: ++correct; break;
    }
  }
  const auto n = static_cast<double>(scores.size());
  report.correct_pct = 100.0 * static_cast<double>(correct) / n;
  report.unwell_misdiagnosed_pct = 100.0 * static_cast<double>(fn) / n;
  report.healthy_misdiagnosed_pct = 100.0 * static_cast<double>(fp) / n;
  return report;
}

std::string sentiment_input(const StandardizedEntry& entry) { return join_tokens(entry.tokens); }

EvalReport evaluate(std::span<const LabeledEntry> dataset, const NGramTable& table,
                    const ScoreModel& model, const SentimentProvider* provider, ScoreMode mode,
                    unsigned workers) {
  if (mode != ScoreMode::collgram && provider == nullptr) {
    throw ConfigError(std::string(to_string(mode)) + " mode needs a sentiment provider");
  }

  std::vector<StandardizedEntry> entries;
  entries.reserve(dataset.size());
  std::size_t too_short = 0;
  for (const auto& e : dataset) {
    entries.push_back(standardize_entry(e.text));
    if (entries.back().status == EntryStatus::too_short) ++too_short;
  }

  std::vector<double> collgram_scores(dataset.size());
  if (mode != ScoreMode::sentiment) {
    const auto profiles = profile_batch(table, entries, workers);
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      collgram_scores[i] = score_profile(model, profiles[i]).value();
    }
  }

  std::vector<double> sentiment_scores(dataset.size());
  if (mode != ScoreMode::collgram) {
    std::vector<std::string> failed;
    std::string first_error;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      try {
        sentiment_scores[i] = provider->score(sentiment_input(entries[i])).score.value();
      } catch (const ProviderError& err) {
        if (failed.empty()) first_error = err.what();
        failed.push_back(dataset[i].id);
      }
    }
    if (!failed.empty()) {
      std::string ids;
      for (const auto& id : failed) ids += (ids.empty() ? "" : ", ") + id;
      throw ProviderError("sentiment provider failed for " + std::to_string(failed.size()) +
                          " entries [" + ids + "]: " + first_error);
    }
  }

  std::vector<std::string> ids;
  std::vector<ScoredLabel> scored;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    double s = 0;
    switch (mode) {
      case ScoreMode::collgram: s = collgram_scores[i]; break;
      case ScoreMode::sentiment: s = sentiment_scores[i]; break;
      case ScoreMode::hybrid:
        s = hybrid_score(WellnessScore(collgram_scores[i]), WellnessScore(sentiment_scores[i])).value();
        break;
    }
    ids.push_back(dataset[i].id);
    scored.push_back({s, dataset[i].label});
  }
  EvalReport report = build_report(mode, ids, scored);
  report.too_short_entries = too_short;
  return report;
}

std::string report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(report.mode);
  j["entries"] = report.per_entry.size();
  j["too_short_entries"] = report.too_short_entries;
  j["best_threshold"] = report.best_threshold;
  j["accuracy"] = report.accuracy;
  j["correct_pct"] = report.correct_pct;
  j["unwell_misdiagnosed_pct"] = report.unwell_misdiagnosed_pct;
  j["healthy_misdiagnosed_pct"] = report.healthy_misdiagnosed_pct;
  auto& rows = j["per_entry"] = nlohmann::ordered_json::array();
  for (const auto& e : report.per_entry) {
    rows.push_back({{"id", e.id},
                    {"score", e.score},
                    {"label", to_string(e.label)},
                    {"predicted", to_string(e.predicted)},
                    {"category", to_string(categorize(e.label, e.predicted))}});
  }
  return j.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

void save_report(const EvalReport& report, const std::filesystem::path& path) {
  io::atomic_write(path, report_json(report));
}

std::string report_summary(const EvalReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s correct %6.2f%%  unwell misdiagnosed %6.2f%%  "
                "healthy misdiagnosed %6.2f%%  threshold %.4g",
                std::string(to_string(report.mode)).c_str(), report.correct_pct,
                report.unwell_misdiagnosed_pct, report.healthy_misdiagnosed_pct,
                report.best_threshold);
  return buf;
}

std::string figure_data_csv(const EvalReport& report) {
  std::string out = "id,score,label,predicted,category\n";
  for (const auto& e : report.per_entry) {
    out += io::csv_field(e.id);
    out += ',' + io::format_double(e.score);
    out += ',' + std::string(to_string(e.label));
    out += ',' + std::string(to_string(e.predicted));
    out += ',' + std::string(to_string(categorize(e.label, e.predicted)));
    out += '\n';
  }
  out += "threshold," + io::format_double(report.best_threshold) + "\n";
  return out;
}

void emit_figure_data(const EvalReport& report, const std::filesystem::path& path) {
  io::atomic_write(path, figure_data_csv(report));
}

}  // namespace collgram
