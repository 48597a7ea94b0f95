#include "collgram/text_pipeline.hpp"

#include <algorithm>
#include <unordered_set>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace collgram {

namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  return *n;
}

icu::UnicodeString normalize(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  if (U_FAILURE(status)) return s;
  return out;
}

bool is_word_char(UChar32 c) { return u_isalpha(c) || u_isdigit(c); }

bool is_mark(UChar32 c) {
  const auto mask = U_GET_GC_MASK(c);
  return (mask & (U_GC_MN_MASK | U_GC_MC_MASK | U_GC_ME_MASK)) != 0;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

constexpr std::string_view kEllipsis = "\xE2\x80\xA6";

// Length of the terminal punctuation mark starting at `pos`, or 0.
std::size_t terminal_at(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if (c == '.' || c == '!' || c == '?') return 1;
  if (s.substr(pos, kEllipsis.size()) == kEllipsis) return kEllipsis.size();
  return 0;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

}  // namespace

TokenSequence tokenize(std::string_view raw) {
  TokenSequence tokens;
  if (raw.empty()) return tokens;

  // fromUTF8 replaces ill-formed sequences with U+FFFD, which is a separator.
  const icu::UnicodeString text = normalize(
      icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size()))));

  icu::UnicodeString current;
  auto flush = [&] {
    if (current.isEmpty()) return;
    tokens.push_back(to_utf8(normalize(current)));
    current.remove();
  };

  for (int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    if (is_word_char(c)) {
      current.append(u_tolower(c));
    } else if (is_mark(c) && !current.isEmpty()) {
      current.append(c);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view raw) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t pos = 0;
  auto emit = [&](std::size_t end) {
    const std::string_view s = trim(raw.substr(start, end - start));
    if (!s.empty()) out.emplace_back(s);
    start = end;
  };
  while (pos < raw.size()) {
    std::size_t len = terminal_at(raw, pos);
    if (len == 0) {
      ++pos;
      continue;
    }
    std::size_t end = pos + len;
    while (end < raw.size() && (len = terminal_at(raw, end)) != 0) end += len;
    if (end == raw.size() || is_space(raw[end])) emit(end);
    pos = end;
  }
  if (start < raw.size()) emit(raw.size());
  return out;
}

std::vector<std::string> deduplicate(const std::vector<std::string>& sentences) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& s : sentences) {
    // Tokens contain no whitespace, so the space-joined form is a faithful key.
    if (seen.insert(join_tokens(tokenize(s))).second) out.push_back(s);
  }
  return out;
}

StandardizedEntry standardize_entry(std::string_view raw) {
  StandardizedEntry entry;
  entry.tokens = tokenize(raw);
  entry.original_word_count = entry.tokens.size();
  if (entry.tokens.size() > kMaxEntryWords) entry.tokens.resize(kMaxEntryWords);
  entry.status = entry.tokens.size() >= kMinEntryWords ? EntryStatus::ok : EntryStatus::too_short;
  return entry;
}

std::string join_tokens(const TokenSequence& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::vector<TokenSequence> prepare_corpus_text(std::string_view raw) {
  std::vector<TokenSequence> sentences;
  std::size_t line_start = 0;
  while (line_start <= raw.size()) {
    std::size_t line_end = raw.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = raw.size();
    for (const auto& s : split_sentences(raw.substr(line_start, line_end - line_start))) {
      auto tokens = tokenize(s);
      if (!tokens.empty()) sentences.push_back(std::move(tokens));
    }
    line_start = line_end + 1;
  }
  return sentences;
}

}  // namespace collgram
