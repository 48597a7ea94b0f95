#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "collgram/ngram_index.hpp"
#include "collgram/scoring.hpp"

namespace collgram {

struct SentimentResult {
  WellnessScore score{50.0};
  /// False when the provider had nothing to go on (e.g. no lexicon hits).
  bool covered = true;
  std::vector<std::string> warnings;
};

/// Pluggable text -> [0, 100] sentiment score. Implementations throw
/// ProviderError instead of returning a made-up score.
class SentimentProvider {
 public:
  virtual ~SentimentProvider() = default;
  virtual SentimentResult score(std::string_view text) const = 0;
};

/// Normalized word -> polarity in [-1, 1].
using Lexicon = std::unordered_map<std::string, double, detail::StringHash, std::equal_to<>>;

// Lines are `word<TAB>polarity`. Words are normalized like text tokens and
// must form a single token. Blank lines and lines starting with '#' are
// skipped. Throws FormatError with the line number, or ConfigError when no
// entries remain.
Lexicon read_lexicon(std::istream& in);
Lexicon load_lexicon(const std::filesystem::path& path);

// Mean polarity of the tokens found in the lexicon, mapped from [-1, 1] onto
// [0, 100]. No hits gives 50 with covered = false. Empty lexicon throws
// ConfigError.
SentimentResult lexicon_sentiment(std::string_view text, const Lexicon& lexicon);

class LexiconSentimentProvider final : public SentimentProvider {
 public:
  explicit LexiconSentimentProvider(Lexicon lexicon);
  SentimentResult score(std::string_view text) const override;

 private:
  Lexicon lexicon_;
};

struct RemoteOptions {
  std::chrono::milliseconds timeout{10'000};
};

// POSTs {"text": ...} as application/json to `endpoint` (http://host[:port][/path])
// and reads {"score": <number>}. Out-of-range scores are clamped with a
// warning. Transport failures, non-2xx replies and malformed bodies throw
// ProviderError.
SentimentResult remote_sentiment(std::string_view text, std::string_view endpoint,
                                 const RemoteOptions& options = {});

/// Each call opens its own connection; no state is shared between calls.
class RemoteSentimentProvider final : public SentimentProvider {
 public:
  explicit RemoteSentimentProvider(std::string endpoint, RemoteOptions options = {});
  SentimentResult score(std::string_view text) const override;

 private:
  std::string endpoint_;
  RemoteOptions options_;
};

}  // namespace collgram
