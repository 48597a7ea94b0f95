#include "collgram/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "collgram/errors.hpp"
#include "io_util.hpp"

namespace collgram {

std::string_view to_string(Label label) noexcept {
  return label == Label::healthy ? "healthy" : "depressed";
}

std::optional<Label> parse_label(std::string_view s) noexcept {
  if (s == "healthy") return Label::healthy;
  if (s == "depressed") return Label::depressed;
  return std::nullopt;
}

WellnessScore::WellnessScore(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 100.0)) {
    throw std::out_of_range("wellness score must lie in [0, 100], got " + std::to_string(value));
  }
}

WellnessScore WellnessScore::clamped(double value) {
  if (std::isnan(value)) throw std::out_of_range("wellness score is NaN");
  return WellnessScore(std::clamp(value, 0.0, 100.0));
}

FeatureVector profile_features(const CollgramProfile& p) noexcept {
  return {p.mean_mi, p.mean_t, p.mean_log_dice, p.mean_gravity, p.absent_ratio};
}

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double linear_term(const ScoreModel& m, const FeatureVector& x, bool degenerate) {
  double z = m.bias;
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    z += m.weights[j] * ((x[j] - m.feature_means[j]) / m.feature_stds[j]);
  }
  if (degenerate) z += m.degenerate_weight;
  return z;
}

}  // namespace

ScoreModel fit_model(std::span<const CollgramProfile> profiles, std::span<const Label> labels,
                     const FitOptions& options) {
  if (profiles.size() != labels.size()) {
    throw ConfigError("cannot fit: " + std::to_string(profiles.size()) + " profiles but " +
                      std::to_string(labels.size()) + " labels");
  }
  const bool has_healthy = std::ranges::count(labels, Label::healthy) > 0;
  const bool has_depressed = std::ranges::count(labels, Label::depressed) > 0;
  if (!has_healthy || !has_depressed) throw ConfigError("cannot fit: one class absent");
  if (!(options.learning_rate > 0) || !std::isfinite(options.learning_rate)) {
    throw ConfigError("learning rate must be positive");
  }

  const std::size_t n = profiles.size();
  std::vector<FeatureVector> raw(n);
  std::vector<double> flag(n), target(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw[i] = profile_features(profiles[i]);
    flag[i] = profiles[i].degenerate ? 1.0 : 0.0;
    target[i] = labels[i] == Label::healthy ? 1.0 : 0.0;
  }

  ScoreModel m;
  m.trained_on = n;
  m.seed = options.seed;
  m.epochs = options.epochs;
  m.learning_rate = options.learning_rate;

  std::array<bool, kFeatureCount> active{};
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    active[j] = std::ranges::any_of(raw, [&](const FeatureVector& x) { return x[j] != raw[0][j]; });
    double mean = 0;
    for (const auto& x : raw) mean += x[j];
    mean /= static_cast<double>(n);
    double var = 0;
    for (const auto& x : raw) var += (x[j] - mean) * (x[j] - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    m.feature_means[j] = mean;
    m.feature_stds[j] = active[j] && sd > 0 ? sd : 1.0;
    if (!(sd > 0)) active[j] = false;
  }
  const bool flag_active = std::ranges::any_of(flag, [&](double f) { return f != flag[0]; });

  std::vector<FeatureVector> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      z[i][j] = active[j] ? (raw[i][j] - m.feature_means[j]) / m.feature_stds[j] : 0.0;
    }
  }

  // Small symmetric initialisation drawn from the seed.
  std::mt19937_64 rng(options.seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5; };
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    const double u = uniform();
    m.weights[j] = active[j] ? 0.02 * u : 0.0;
  }
  const double u = uniform();
  m.degenerate_weight = flag_active ? 0.02 * u : 0.0;

  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    FeatureVector grad{};
    double grad_flag = 0, grad_bias = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = m.bias + m.degenerate_weight * flag[i];
      for (std::size_t j = 0; j < kFeatureCount; ++j) s += m.weights[j] * z[i][j];
      const double residual = target[i] - sigmoid(s);
      for (std::size_t j = 0; j < kFeatureCount; ++j) grad[j] += residual * z[i][j];
      grad_flag += residual * flag[i];
      grad_bias += residual;
    }
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      if (active[j]) m.weights[j] += options.learning_rate * grad[j] * inv_n;
    }
    if (flag_active) m.degenerate_weight += options.learning_rate * grad_flag * inv_n;
    m.bias += options.learning_rate * grad_bias * inv_n;
  }

  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (classify(score_profile(m, profiles[i]), 50.0) == labels[i]) ++correct;
  }
  m.training_accuracy = static_cast<double>(correct) * inv_n;
  return m;
}

WellnessScore score_profile(const ScoreModel& model, const CollgramProfile& profile) {
  const double z = linear_term(model, profile_features(profile), profile.degenerate);
  if (std::isnan(z)) return WellnessScore(50.0);
  return WellnessScore::clamped(100.0 * sigmoid(z));
}

Label classify(WellnessScore score, double threshold) noexcept {
  return score.value() >= threshold ? Label::healthy : Label::depressed;
}

WellnessScore hybrid_score(WellnessScore collgram, WellnessScore sentiment) noexcept {
  return WellnessScore::clamped((collgram.value() + sentiment.value()) / 2);
}

namespace {

std::string join_doubles(const FeatureVector& v) {
  std::string out;
  for (double d : v) {
    if (!out.empty()) out.push_back(' ');
    out += io::format_double(d);
  }
  return out;
}

}  // namespace

void write_model(const ScoreModel& m, std::ostream& out) {
  out << kModelMagic << " v" << kModelVersion << '\n';
  out << "features";
  for (auto name : kFeatureNames) out << ' ' << name;
  out << '\n';
  out << "feature_means " << join_doubles(m.feature_means) << '\n';
  out << "feature_stds " << join_doubles(m.feature_stds) << '\n';
  out << "weights " << join_doubles(m.weights) << '\n';
  out << "degenerate_weight " << io::format_double(m.degenerate_weight) << '\n';
  out << "bias " << io::format_double(m.bias) << '\n';
  out << "trained_on " << m.trained_on << '\n';
  out << "seed " << m.seed << '\n';
  out << "epochs " << m.epochs << '\n';
  out << "learning_rate " << io::format_double(m.learning_rate) << '\n';
  out << "training_accuracy " << io::format_double(m.training_accuracy) << '\n';
}

ScoreModel read_model(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw FormatError("empty model file", 1);
  ++lineno;
  const std::string expected = std::string(kModelMagic) + " v" + std::to_string(kModelVersion);
  if (line != expected) {
    const std::string prefix = std::string(kModelMagic) + " v";
    if (line.rfind(prefix, 0) == 0) {
      throw VersionError("unsupported model version '" + line.substr(prefix.size()) + "'");
    }
    throw FormatError("missing '" + expected + "' header", 1);
  }

  std::map<std::string, std::pair<std::string, std::size_t>, std::less<>> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) throw FormatError("expected '<key> <value>'", lineno);
    std::string key = line.substr(0, sp);
    if (!values.emplace(key, std::pair{line.substr(sp + 1), lineno}).second) {
      throw FormatError("duplicate key '" + key + "'", lineno);
    }
  }

  auto take = [&](std::string_view key) -> const std::pair<std::string, std::size_t>& {
    auto it = values.find(key);
    if (it == values.end()) throw FormatError("missing key '" + std::string(key) + "'");
    return it->second;
  };
  auto scalar = [&](std::string_view key) {
    const auto& [text, at] = take(key);
    const auto v = io::parse_double(text);
    if (!v) throw FormatError("bad number for '" + std::string(key) + "'", at);
    return *v;
  };
  auto count = [&](std::string_view key) {
    const auto& [text, at] = take(key);
    const auto v = io::parse_u64(text);
    if (!v) throw FormatError("bad integer for '" + std::string(key) + "'", at);
    return *v;
  };
  auto vec = [&](std::string_view key) {
    const auto& [text, at] = take(key);
    const auto parts = io::split(text, ' ');
    if (parts.size() != kFeatureCount) {
      throw FormatError("'" + std::string(key) + "' needs " + std::to_string(kFeatureCount) +
                            " values",
                        at);
    }
    FeatureVector out{};
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      const auto v = io::parse_double(parts[j]);
      if (!v) throw FormatError("bad number in '" + std::string(key) + "'", at);
      out[j] = *v;
    }
    return out;
  };

  {
    const auto& [text, at] = take("features");
    const auto names = io::split(text, ' ');
    if (!std::ranges::equal(names, kFeatureNames)) throw FormatError("unexpected feature list", at);
  }

  ScoreModel m;
  m.feature_means = vec("feature_means");
  m.feature_stds = vec("feature_stds");
  for (double sd : m.feature_stds) {
    if (!(sd > 0)) throw FormatError("feature_stds must be positive", take("feature_stds").second);
  }
  m.weights = vec("weights");
  m.degenerate_weight = scalar("degenerate_weight");
  m.bias = scalar("bias");
  m.trained_on = count("trained_on");
  m.seed = count("seed");
  m.epochs = count("epochs");
  m.learning_rate = scalar("learning_rate");
  m.training_accuracy = scalar("training_accuracy");

  static constexpr std::string_view kKnown[] = {
      "features", "feature_means", "feature_stds", "weights", "degenerate_weight", "bias",
      "trained_on", "seed", "epochs", "learning_rate", "training_accuracy"};
  for (const auto& [key, v] : values) {
    if (std::ranges::find(kKnown, key) == std::end(kKnown)) {
      throw FormatError("unknown key '" + key + "'", v.second);
    }
  }
  return m;
}

void save_model(const ScoreModel& model, const std::filesystem::path& path) {
  std::ostringstream out;
  write_model(model, out);
  io::atomic_write(path, out.str());
}

ScoreModel load_model(const std::filesystem::path& path) {
  std::istringstream in(io::read_file(path));
  return read_model(in);
}

}  // namespace collgram
