#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "collgram/text_pipeline.hpp"

namespace collgram {

struct UnigramStats {
  std::uint64_t count = 0;
  /// Distinct words seen immediately right of this word, n(x).
  std::uint64_t right_diversity = 0;
  /// Distinct words seen immediately left of this word, n'(y).
  std::uint64_t left_diversity = 0;

  friend bool operator==(const UnigramStats&, const UnigramStats&) = default;
};

/// Every operand the association measures need for one bigram (x, y).
struct BigramOperands {
  std::uint64_t pair_count = 0;       // f(x,y)
  std::uint64_t first_count = 0;      // f(x)
  std::uint64_t second_count = 0;     // f(y)
  std::uint64_t first_right_div = 0;  // n(x)
  std::uint64_t second_left_div = 0;  // n'(y)
  std::uint64_t total_tokens = 0;     // N

  friend bool operator==(const BigramOperands&, const BigramOperands&) = default;
};

struct BigramRecord {
  std::string first;
  std::string second;
  std::uint64_t count = 0;

  friend bool operator==(const BigramRecord&, const BigramRecord&) = default;
};

namespace detail {
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};
}  // namespace detail

/// Reference frequency model: unigram and adjacent-bigram counts plus
/// neighbour diversity. Immutable once built; safe for concurrent readers.
class NGramTable {
 public:
  NGramTable() = default;

  std::uint64_t total_tokens() const noexcept { return total_tokens_; }
  std::uint64_t min_count() const noexcept { return min_count_; }
  std::size_t vocabulary_size() const noexcept { return words_.size(); }
  std::size_t bigram_types() const noexcept { return bigrams_.size(); }
  bool empty() const noexcept { return total_tokens_ == 0; }

  /// Zero-valued stats for unseen words.
  UnigramStats unigram(std::string_view word) const;
  std::uint64_t bigram_count(std::string_view first, std::string_view second) const;

  /// Absent unless (first, second) survived the min-count filter.
  std::optional<BigramOperands> lookup_bigram(std::string_view first,
                                              std::string_view second) const;

  /// Records in byte-wise lexicographic order.
  std::vector<std::pair<std::string, UnigramStats>> sorted_unigrams() const;
  std::vector<BigramRecord> sorted_bigrams() const;

  /// Content equality; independent of internal word numbering.
  friend bool operator==(const NGramTable& a, const NGramTable& b);

 private:
  friend class NGramCounter;
  friend NGramTable merge(const NGramTable& a, const NGramTable& b);
  friend NGramTable read_index(std::istream& in);

  using WordId = std::uint32_t;
  static std::uint64_t pair_key(WordId a, WordId b) noexcept {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  std::optional<WordId> find_id(std::string_view word) const;
  WordId intern(std::string_view word);
  void recompute_diversity();

  std::uint64_t total_tokens_ = 0;
  std::uint64_t min_count_ = 1;
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId, detail::StringHash, std::equal_to<>> ids_;
  std::vector<UnigramStats> unigrams_;
  std::unordered_map<std::uint64_t, std::uint64_t> bigrams_;
};

/// Streaming accumulator; bigrams are counted within a sentence only.
class NGramCounter {
 public:
  void add_sentence(std::span<const std::string> tokens);
  std::uint64_t tokens_seen() const noexcept { return table_.total_tokens_; }

  /// Drops bigrams below `min_count` and derives diversity from the rest.
  NGramTable finish(std::uint64_t min_count) &&;

 private:
  friend NGramTable build_index_parallel(std::span<const TokenSequence>, std::uint64_t, unsigned);

  NGramTable table_;
};

/// Throws std::invalid_argument when min_count == 0.
NGramTable build_index(std::span<const TokenSequence> sentences, std::uint64_t min_count = 1);

/// Same result as build_index; shards are counted raw on `workers` threads,
/// merged, then filtered.
NGramTable build_index_parallel(std::span<const TokenSequence> sentences,
                                std::uint64_t min_count, unsigned workers);

// Element-wise sum of counts with diversity re-derived from the merged
// bigrams. Tables must share a min_count; an empty table is the identity.
NGramTable merge(const NGramTable& a, const NGramTable& b);

inline constexpr std::string_view kIndexMagic = "#collgram-index";
inline constexpr int kIndexVersion = 1;

void write_index(const NGramTable& table, std::ostream& out);
NGramTable read_index(std::istream& in);

/// Atomic write (temporary file then rename).
void save_index(const NGramTable& table, const std::filesystem::path& path);
NGramTable load_index(const std::filesystem::path& path);

}  // namespace collgram
