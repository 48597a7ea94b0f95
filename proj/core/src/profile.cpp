#include "collgram/profile.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "io_util.hpp"

namespace collgram {

CollgramProfile profile_tokens(const NGramTable& table, std::span<const std::string> tokens,
                               const BigramVisitor& visit) {
  CollgramProfile p;
  if (tokens.size() < 2) return p;

  double sum_mi = 0, sum_t = 0, sum_dice = 0, sum_gravity = 0;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto scores = score_bigram(table, tokens[i - 1], tokens[i]);
    if (visit) visit(tokens[i - 1], tokens[i], scores ? &*scores : nullptr);
    if (!scores) continue;
    ++p.attested_count;
    sum_mi += scores->mi;
    sum_t += scores->t_score;
    sum_dice += scores->log_dice;
    sum_gravity += scores->gravity;
  }
  p.total_bigrams = tokens.size() - 1;
  p.absent_ratio = static_cast<double>(p.absent_count()) / static_cast<double>(p.total_bigrams);
  p.degenerate = p.attested_count == 0;
  if (!p.degenerate) {
    const auto n = static_cast<double>(p.attested_count);
    p.mean_mi = sum_mi / n;
    p.mean_t = sum_t / n;
    p.mean_log_dice = sum_dice / n;
    p.mean_gravity = sum_gravity / n;
  }
  return p;
}

std::vector<CollgramProfile> profile_batch(const NGramTable& table,
                                           std::span<const StandardizedEntry> entries,
                                           unsigned workers) {
  std::vector<CollgramProfile> out(entries.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, entries.size())));

  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = profile_text(table, entries[i]);
  };
  if (workers <= 1) {
    run(0, entries.size());
    return out;
  }
  const std::size_t chunk = (entries.size() + workers - 1) / workers;
  {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(entries.size(), w * chunk);
      const std::size_t end = std::min(entries.size(), begin + chunk);
      threads.emplace_back(run, begin, end);
    }
  }
  return out;
}

std::string profile_csv(std::span<const std::string> ids, std::span<const CollgramProfile> profiles) {
  if (ids.size() != profiles.size()) throw std::invalid_argument("ids and profiles differ in length");
  std::string out(kProfileCsvHeader);
  out.push_back('\n');
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& p = profiles[i];
    out += io::csv_field(ids[i]);
    for (double v : {p.mean_mi, p.mean_t, p.mean_log_dice, p.mean_gravity, p.absent_ratio}) {
      out += ',' + io::format_double(v);
    }
    out += ',' + std::to_string(p.attested_count) + ',' + std::to_string(p.total_bigrams);
    out += p.degenerate ? ",1\n" : ",0\n";
  }
  return out;
}

void save_profiles(const std::filesystem::path& path, std::span<const std::string> ids,
                   std::span<const CollgramProfile> profiles) {
  io::atomic_write(path, profile_csv(ids, profiles));
}

}  // namespace collgram
