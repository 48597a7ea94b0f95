// collgram: build reference indexes, profile texts, train and evaluate the
// wellness scorer.
//
// Exit codes: 0 success, 2 usage error, 3 data/format error, 4 provider error.

#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "collgram/association.hpp"
#include "collgram/dataset.hpp"
#include "collgram/errors.hpp"
#include "collgram/evaluation.hpp"
#include "collgram/ngram_index.hpp"
#include "collgram/profile.hpp"
#include "collgram/scoring.hpp"
#include "collgram/sentiment.hpp"
#include "collgram/text_pipeline.hpp"

namespace {

using namespace collgram;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitProvider = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

std::unique_ptr<SentimentProvider> make_provider(const std::string& lexicon,
                                                 const std::string& endpoint, double timeout_s) {
  if (!lexicon.empty() && !endpoint.empty()) {
    throw UsageError("--lexicon and --endpoint are mutually exclusive");
  }
  if (!lexicon.empty()) return std::make_unique<LexiconSentimentProvider>(load_lexicon(lexicon));
  if (!endpoint.empty()) {
    RemoteOptions options;
    options.timeout = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000));
    return std::make_unique<RemoteSentimentProvider>(endpoint, options);
  }
  return nullptr;
}

ScoreMode require_mode(const std::string& text) {
  const auto mode = parse_score_mode(text);
  if (!mode) throw UsageError("unknown mode '" + text + "' (collgram|sentiment|hybrid)");
  return *mode;
}

int run_build_index(const std::vector<std::string>& inputs, const std::string& output,
                    std::uint64_t min_count) {
  NGramCounter counter;
  std::unordered_set<std::string> seen;
  std::size_t sentences = 0, duplicates = 0;
  for (const auto& path : inputs) {
    for (auto& sentence : prepare_corpus_text(read_text_file(path))) {
      if (!seen.insert(join_tokens(sentence)).second) {
        ++duplicates;
        continue;
      }
      counter.add_sentence(sentence);
      ++sentences;
    }
  }
  const NGramTable table = std::move(counter).finish(min_count);
  save_index(table, output);
  std::cerr << "indexed " << sentences << " sentences (" << duplicates << " duplicates dropped), "
            << table.total_tokens() << " tokens, " << table.vocabulary_size() << " word types, "
            << table.bigram_types() << " bigram types\n";
  return 0;
}

int run_profile(const std::string& index_path, const std::string& input, const std::string& output,
                bool verbose) {
  const NGramTable table = load_index(index_path);
  const auto records = load_text_entries(input);
  std::vector<StandardizedEntry> entries;
  std::size_t too_short = 0;
  for (const auto& r : records) {
    entries.push_back(standardize_entry(r.text));
    if (entries.back().status == EntryStatus::too_short) ++too_short;
  }

  std::vector<CollgramProfile> profiles;
  if (verbose) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      profiles.push_back(profile_tokens(
          table, entries[i].tokens,
          [&](std::string_view x, std::string_view y, const AssociationScores* s) {
            std::cerr << records[i].id << '\t' << x << '\t' << y;
            if (s) {
              std::cerr << '\t' << fmt(s->mi) << '\t' << fmt(s->t_score) << '\t'
                        << fmt(s->log_dice) << '\t' << fmt(s->gravity) << '\n';
            } else {
              std::cerr << "\tabsent\n";
            }
          }));
    }
  } else {
    profiles = profile_batch(table, entries);
  }

  std::vector<std::string> ids;
  for (const auto& r : records) ids.push_back(r.id);
  save_profiles(output, ids, profiles);

  if (too_short > 0) {
    std::cerr << "warning: " << too_short << " of " << entries.size() << " entries have fewer than "
              << kMinEntryWords << " words\n";
  }
  return 0;
}

int run_train(const std::string& index_path, const std::string& dataset_path,
              const std::string& output, const FitOptions& options) {
  const NGramTable table = load_index(index_path);
  const auto dataset = load_dataset(dataset_path);
  std::vector<StandardizedEntry> entries;
  std::vector<Label> labels;
  for (const auto& e : dataset) {
    entries.push_back(standardize_entry(e.text));
    labels.push_back(e.label);
  }
  const auto profiles = profile_batch(table, entries);
  const ScoreModel model = fit_model(profiles, labels, options);
  save_model(model, output);
  std::cout << "trained on " << model.trained_on << " entries, training accuracy "
            << fmt(model.training_accuracy) << '\n';
  return 0;
}

int run_score(const std::string& index_path, const std::string& model_path,
              const std::string& text_arg, bool use_stdin, const std::string& mode_text,
              const std::string& lexicon, const std::string& endpoint, double timeout_s) {
  if (use_stdin == !text_arg.empty()) throw UsageError("give exactly one of --text or --stdin");
  const ScoreMode mode = require_mode(mode_text);
  const auto provider = make_provider(lexicon, endpoint, timeout_s);
  if (mode != ScoreMode::collgram && !provider) {
    throw UsageError(std::string(to_string(mode)) + " mode needs --lexicon or --endpoint");
  }

  const std::string text =
      use_stdin ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : text_arg;
  const StandardizedEntry entry = standardize_entry(text);
  if (entry.status == EntryStatus::too_short) {
    std::cerr << "warning: text has " << entry.tokens.size() << " words (fewer than "
              << kMinEntryWords << ")\n";
  }

  std::optional<WellnessScore> collgram, sentiment;
  if (mode != ScoreMode::sentiment) {
    const NGramTable table = load_index(index_path);
    const ScoreModel model = load_model(model_path);
    collgram = score_profile(model, profile_text(table, entry));
    std::cout << "collgram\t" << fmt(collgram->value()) << '\n';
  }
  if (mode != ScoreMode::collgram) {
    const SentimentResult r = provider->score(sentiment_input(entry));
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    sentiment = r.score;
    std::cout << "sentiment\t" << fmt(sentiment->value()) << '\n';
  }
  const WellnessScore final_score = mode == ScoreMode::hybrid ? hybrid_score(*collgram, *sentiment)
                                    : collgram                ? *collgram
                                                              : *sentiment;
  std::cout << "score\t" << fmt(final_score.value()) << '\n';
  return 0;
}

int run_evaluate(const std::string& index_path, const std::string& model_path,
                 const std::string& dataset_path, const std::string& mode_text,
                 const std::string& report_path, const std::string& figure_path,
                 const std::string& lexicon, const std::string& endpoint, double timeout_s) {
  const ScoreMode mode = require_mode(mode_text);
  const auto provider = make_provider(lexicon, endpoint, timeout_s);
  if (mode != ScoreMode::collgram && !provider) {
    throw UsageError(std::string(to_string(mode)) + " mode needs --lexicon or --endpoint");
  }
  const NGramTable table = load_index(index_path);
  const ScoreModel model = load_model(model_path);
  const auto dataset = load_dataset(dataset_path);
  if (dataset.empty()) throw FormatError("dataset has no entries");

  const EvalReport report = evaluate(dataset, table, model, provider.get(), mode);
  save_report(report, report_path);
  if (!figure_path.empty()) emit_figure_data(report, figure_path);
  if (report.too_short_entries > 0) {
    std::cerr << "warning: " << report.too_short_entries << " entries have fewer than "
              << kMinEntryWords << " words\n";
  }
  std::cout << report_summary(report) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collocation-profile text screening toolkit"};
  app.require_subcommand(1);

  std::vector<std::string> inputs;
  std::string output, index, input, model, dataset, text, mode = "collgram", lexicon, endpoint,
                                                          report, figure;
  std::uint64_t min_count = 1;
  FitOptions fit;
  bool use_stdin = false, verbose = false;
  double timeout_s = 10.0;

  auto* build = app.add_subcommand("build-index", "Count unigrams and bigrams of a reference corpus");
  build->add_option("--input", inputs, "UTF-8 text files")->required()->expected(1, -1);
  build->add_option("--output", output, "Index file to write")->required();
  build->add_option("--min-count", min_count, "Drop bigrams seen fewer times")
      ->check(CLI::PositiveNumber);

  auto* prof = app.add_subcommand("profile", "Write collocation profiles of JSON-lines texts");
  prof->add_option("--index", index)->required();
  prof->add_option("--input", input, "JSON-lines records with id and text")->required();
  prof->add_option("--output", output, "Profile CSV")->required();
  prof->add_flag("--verbose", verbose, "Dump per-bigram scores to stderr");

  auto* train = app.add_subcommand("train", "Fit the profile-to-score model");
  train->add_option("--index", index)->required();
  train->add_option("--dataset", dataset)->required();
  train->add_option("--output", output)->required();
  train->add_option("--seed", fit.seed);
  train->add_option("--epochs", fit.epochs);
  train->add_option("--lr", fit.learning_rate)->check(CLI::PositiveNumber);

  auto* score = app.add_subcommand("score", "Score one text");
  score->add_option("--index", index)->required();
  score->add_option("--model", model)->required();
  auto* text_opt = score->add_option("--text", text);
  score->add_flag("--stdin", use_stdin)->excludes(text_opt);
  score->add_option("--mode", mode, "collgram|sentiment|hybrid");
  auto* score_lex = score->add_option("--lexicon", lexicon, "word<TAB>polarity file");
  score->add_option("--endpoint", endpoint, "http:// sentiment service")->excludes(score_lex);
  score->add_option("--timeout", timeout_s, "Remote provider timeout in seconds")
      ->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("evaluate", "Sweep the threshold over a labelled dataset");
  eval->add_option("--index", index)->required();
  eval->add_option("--model", model)->required();
  eval->add_option("--dataset", dataset)->required();
  eval->add_option("--mode", mode, "collgram|sentiment|hybrid")->required();
  eval->add_option("--report", report, "JSON report")->required();
  eval->add_option("--figure-data", figure, "Plot-ready CSV");
  auto* eval_lex = eval->add_option("--lexicon", lexicon, "word<TAB>polarity file");
  eval->add_option("--endpoint", endpoint, "http:// sentiment service")->excludes(eval_lex);
  eval->add_option("--timeout", timeout_s, "Remote provider timeout in seconds")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*build) return run_build_index(inputs, output, min_count);
    if (*prof) return run_profile(index, input, output, verbose);
    if (*train) return run_train(index, dataset, output, fit);
    if (*score) {
      return run_score(index, model, text, use_stdin, mode, lexicon, endpoint, timeout_s);
    }
    if (*eval) {
      return run_evaluate(index, model, dataset, mode, report, figure, lexicon, endpoint, timeout_s);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ProviderError& e) {
    std::cerr << "provider error: " << e.what() << '\n';
    return kExitProvider;
  } catch (const VersionError& e) {
    std::cerr << "version error: " << e.what() << '\n';
    return kExitData;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
