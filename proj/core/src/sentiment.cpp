#include "collgram/sentiment.hpp"

#include <cmath>
#include <istream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "collgram/errors.hpp"
#include "collgram/text_pipeline.hpp"
#include "io_util.hpp"

namespace collgram {

Lexicon read_lexicon(std::istream& in) {
  Lexicon lexicon;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = io::split(line, '\t');
    if (fields.size() != 2) throw FormatError("expected 'word<TAB>polarity'", lineno);
    const auto tokens = tokenize(fields[0]);
    if (tokens.size() != 1) throw FormatError("lexicon word must be a single token", lineno);
    const auto polarity = io::parse_double(fields[1]);
    if (!polarity) throw FormatError("bad polarity '" + std::string(fields[1]) + "'", lineno);
    if (*polarity < -1.0 || *polarity > 1.0) {
      throw FormatError("polarity must lie in [-1, 1]", lineno);
    }
    lexicon[tokens.front()] = *polarity;
  }
  if (lexicon.empty()) throw ConfigError("lexicon has no entries");
  return lexicon;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::istringstream in(io::read_file(path));
  return read_lexicon(in);
}

SentimentResult lexicon_sentiment(std::string_view text, const Lexicon& lexicon) {
  if (lexicon.empty()) throw ConfigError("lexicon is empty");
  double sum = 0;
  std::size_t hits = 0;
  for (const auto& token : tokenize(text)) {
    auto it = lexicon.find(token);
    if (it == lexicon.end()) continue;
    sum += it->second;
    ++hits;
  }
  SentimentResult result;
  if (hits == 0) {
    result.covered = false;
    result.warnings.emplace_back("no lexicon coverage");
    return result;
  }
  const double mean = sum / static_cast<double>(hits);
  result.score = WellnessScore::clamped((mean + 1.0) * 50.0);
  return result;
}

LexiconSentimentProvider::LexiconSentimentProvider(Lexicon lexicon) : lexicon_(std::move(lexicon)) {
  if (lexicon_.empty()) throw ConfigError("lexicon is empty");
}

SentimentResult LexiconSentimentProvider::score(std::string_view text) const {
  return lexicon_sentiment(text, lexicon_);
}

namespace {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;
};

Endpoint parse_endpoint(std::string_view url) {
  constexpr std::string_view kHttp = "http://";
  if (url.substr(0, kHttp.size()) != kHttp) {
    throw ConfigError("sentiment endpoint must be an http:// URL: " + std::string(url));
  }
  const auto slash = url.find('/', kHttp.size());
  Endpoint ep;
  ep.base = std::string(url.substr(0, slash));
  ep.path = slash == std::string_view::npos ? "/" : std::string(url.substr(slash));
  if (ep.base.size() == kHttp.size()) throw ConfigError("sentiment endpoint has no host");
  return ep;
}

}  // namespace

SentimentResult remote_sentiment(std::string_view text, std::string_view endpoint,
                                 const RemoteOptions& options) {
  const Endpoint ep = parse_endpoint(endpoint);

  httplib::Client client(ep.base);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const nlohmann::json request = {{"text", std::string(text)}};
  const auto body = request.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  auto res = client.Post(ep.path, body, "application/json");
  if (!res) {
    throw ProviderError("sentiment request to " + std::string(endpoint) +
                        " failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw ProviderError("sentiment service returned HTTP " + std::to_string(res->status));
  }

  const auto reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.is_object()) {
    throw ProviderError("sentiment service returned a malformed body");
  }
  const auto it = reply.find("score");
  if (it == reply.end() || !it->is_number()) {
    throw ProviderError("sentiment reply lacks a numeric \"score\"");
  }
  const double value = it->get<double>();
  if (!std::isfinite(value)) throw ProviderError("sentiment score is not finite");

  SentimentResult result;
  if (value < 0.0 || value > 100.0) {
    result.warnings.push_back("sentiment score " + io::format_double(value) +
                              " outside [0, 100]; clamped");
  }
  result.score = WellnessScore::clamped(value);
  return result;
}

RemoteSentimentProvider::RemoteSentimentProvider(std::string endpoint, RemoteOptions options)
    : endpoint_(std::move(endpoint)), options_(options) {
  parse_endpoint(endpoint_);
}

SentimentResult RemoteSentimentProvider::score(std::string_view text) const {
  return remote_sentiment(text, endpoint_, options_);
}

}  // namespace collgram
