#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "collgram/association.hpp"
#include "collgram/ngram_index.hpp"
#include "collgram/text_pipeline.hpp"

namespace collgram {

/// Per-text collocation profile. Means cover attested bigrams only; bigrams
/// missing from the reference table are counted in `absent_ratio`.
struct CollgramProfile {
  double mean_mi = 0;
  double mean_t = 0;
  double mean_log_dice = 0;
  double mean_gravity = 0;
  double absent_ratio = 0;
  std::size_t attested_count = 0;
  std::size_t total_bigrams = 0;
  /// No attested bigrams; the four means are then 0.
  bool degenerate = true;

  std::size_t absent_count() const noexcept { return total_bigrams - attested_count; }

  friend bool operator==(const CollgramProfile&, const CollgramProfile&) = default;
};

/// Called for every adjacent pair; `scores` is null for absent pairs.
using BigramVisitor =
    std::function<void(std::string_view, std::string_view, const AssociationScores* scores)>;

CollgramProfile profile_tokens(const NGramTable& table, std::span<const std::string> tokens,
                               const BigramVisitor& visit = {});

inline CollgramProfile profile_text(const NGramTable& table, const StandardizedEntry& entry) {
  return profile_tokens(table, entry.tokens);
}

/// Equal to mapping profile_text in order; `workers` == 0 picks the hardware
/// concurrency.
std::vector<CollgramProfile> profile_batch(const NGramTable& table,
                                           std::span<const StandardizedEntry> entries,
                                           unsigned workers = 0);

inline constexpr std::string_view kProfileCsvHeader =
    "id,mean_mi,mean_t,mean_log_dice,mean_gravity,absent_ratio,attested,total,degenerate";

/// One row per profile, doubles in shortest round-trip form.
std::string profile_csv(std::span<const std::string> ids, std::span<const CollgramProfile> profiles);
void save_profiles(const std::filesystem::path& path, std::span<const std::string> ids,
                   std::span<const CollgramProfile> profiles);

}  // namespace collgram
