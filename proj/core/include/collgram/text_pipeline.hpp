#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace collgram {

/// Normalized word tokens: lowercased, NFC, letter/digit runs only.
using TokenSequence = std::vector<std::string>;

inline constexpr std::size_t kMinEntryWords = 150;
inline constexpr std::size_t kMaxEntryWords = 250;

enum class EntryStatus { ok, too_short };

struct StandardizedEntry {
  TokenSequence tokens;
  std::size_t original_word_count = 0;
  EntryStatus status = EntryStatus::too_short;
};

// Splits UTF-8 text into lowercase letter/digit runs. Combining marks stay
// attached to the token they follow; invalid bytes act as separators.
TokenSequence tokenize(std::string_view raw);

// Splits after '.', '!', '?' or U+2026 when followed by whitespace or end of
// input. Runs of terminals ("?!", "...") stay with their sentence. No
// abbreviation handling. Returned sentences are trimmed and never empty.
std::vector<std::string> split_sentences(std::string_view raw);

// Order-preserving removal of sentences whose token sequences were already
// seen.
std::vector<std::string> deduplicate(const std::vector<std::string>& sentences);

// Tokenizes and head-truncates to kMaxEntryWords; entries shorter than
// kMinEntryWords are flagged too_short but keep all tokens.
StandardizedEntry standardize_entry(std::string_view raw);

/// Joins tokens with single spaces.
std::string join_tokens(const TokenSequence& tokens);

// Corpus preparation used by index building: every line is a paragraph,
// paragraphs are split into sentences, sentences are tokenized, and
// sentences with no tokens are dropped. Deduplication is left to the caller
// so that it can span several files.
std::vector<TokenSequence> prepare_corpus_text(std::string_view raw);

}  // namespace collgram
