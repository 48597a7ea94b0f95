#include "collgram/ngram_index.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "collgram/errors.hpp"
#include "io_util.hpp"

namespace collgram {

std::optional<NGramTable::WordId> NGramTable::find_id(std::string_view word) const {
  auto it = ids_.find(word);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

NGramTable::WordId NGramTable::intern(std::string_view word) {
  auto it = ids_.find(word);
  if (it != ids_.end()) return it->second;
  if (words_.size() >= 0xFFFFFFFFu) throw std::length_error("vocabulary exceeds 2^32-1 words");
  const auto id = static_cast<WordId>(words_.size());
  words_.emplace_back(word);
  ids_.emplace(words_.back(), id);
  unigrams_.push_back({});
  return id;
}

void NGramTable::recompute_diversity() {
  for (auto& u : unigrams_) u.right_diversity = u.left_diversity = 0;
  for (const auto& [key, count] : bigrams_) {
    ++unigrams_[static_cast<WordId>(key >> 32)].right_diversity;
    ++unigrams_[static_cast<WordId>(key & 0xFFFFFFFFu)].left_diversity;
  }
}

UnigramStats NGramTable::unigram(std::string_view word) const {
  const auto id = find_id(word);
  return id ? unigrams_[*id] : UnigramStats{};
}

std::uint64_t NGramTable::bigram_count(std::string_view first, std::string_view second) const {
  const auto a = find_id(first);
  const auto b = find_id(second);
  if (!a || !b) return 0;
  auto it = bigrams_.find(pair_key(*a, *b));
  return it == bigrams_.end() ? 0 : it->second;
}

std::optional<BigramOperands> NGramTable::lookup_bigram(std::string_view first,
                                                        std::string_view second) const {
  const auto a = find_id(first);
  if (!a) return std::nullopt;
  const auto b = find_id(second);
  if (!b) return std::nullopt;
  auto it = bigrams_.find(pair_key(*a, *b));
  if (it == bigrams_.end()) return std::nullopt;
  const auto& ua = unigrams_[*a];
  const auto& ub = unigrams_[*b];
  return BigramOperands{it->second,        ua.count,         ub.count,
                        ua.right_diversity, ub.left_diversity, total_tokens_};
}

std::vector<std::pair<std::string, UnigramStats>> NGramTable::sorted_unigrams() const {
  std::vector<std::pair<std::string, UnigramStats>> out;
  out.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) out.emplace_back(words_[i], unigrams_[i]);
  std::sort(out.begin(), out.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  return out;
}

std::vector<BigramRecord> NGramTable::sorted_bigrams() const {
  std::vector<BigramRecord> out;
  out.reserve(bigrams_.size());
  for (const auto& [key, count] : bigrams_) {
    out.push_back({words_[static_cast<WordId>(key >> 32)],
                   words_[static_cast<WordId>(key & 0xFFFFFFFFu)], count});
  }
  std::sort(out.begin(), out.end(), [](const BigramRecord& l, const BigramRecord& r) {
    return std::tie(l.first, l.second) < std::tie(r.first, r.second);
  });
  return out;
}

bool operator==(const NGramTable& a, const NGramTable& b) {
  if (a.total_tokens_ != b.total_tokens_ || a.min_count_ != b.min_count_ ||
      a.words_.size() != b.words_.size() || a.bigrams_.size() != b.bigrams_.size()) {
    return false;
  }
  std::vector<NGramTable::WordId> to_b(a.words_.size());
  for (std::size_t i = 0; i < a.words_.size(); ++i) {
    const auto id = b.find_id(a.words_[i]);
    if (!id || !(a.unigrams_[i] == b.unigrams_[*id])) return false;
    to_b[i] = *id;
  }
  for (const auto& [key, count] : a.bigrams_) {
    const auto mapped = NGramTable::pair_key(to_b[static_cast<NGramTable::WordId>(key >> 32)],
                                             to_b[static_cast<NGramTable::WordId>(key & 0xFFFFFFFFu)]);
    auto it = b.bigrams_.find(mapped);
    if (it == b.bigrams_.end() || it->second != count) return false;
  }
  return true;
}

void NGramCounter::add_sentence(std::span<const std::string> tokens) {
  auto& t = table_;
  NGramTable::WordId prev = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto id = t.intern(tokens[i]);
    ++t.unigrams_[id].count;
    if (i > 0) ++t.bigrams_[NGramTable::pair_key(prev, id)];
    prev = id;
  }
  t.total_tokens_ += tokens.size();
}

NGramTable NGramCounter::finish(std::uint64_t min_count) && {
  if (min_count == 0) throw std::invalid_argument("min_count must be >= 1");
  NGramTable t = std::move(table_);
  table_ = NGramTable{};
  t.min_count_ = min_count;
  if (min_count > 1) std::erase_if(t.bigrams_, [&](const auto& kv) { return kv.second < min_count; });
  t.recompute_diversity();
  return t;
}

NGramTable build_index(std::span<const TokenSequence> sentences, std::uint64_t min_count) {
  if (min_count == 0) throw std::invalid_argument("min_count must be >= 1");
  NGramCounter counter;
  for (const auto& s : sentences) counter.add_sentence(s);
  return std::move(counter).finish(min_count);
}

NGramTable build_index_parallel(std::span<const TokenSequence> sentences, std::uint64_t min_count,
                                unsigned workers) {
  if (min_count == 0) throw std::invalid_argument("min_count must be >= 1");
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(sentences.size())));
  if (workers <= 1) return build_index(sentences, min_count);

  std::vector<NGramTable> shards(workers);
  {
    std::vector<std::jthread> threads;
    const std::size_t chunk = (sentences.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(sentences.size(), w * chunk);
      const std::size_t end = std::min(sentences.size(), begin + chunk);
      threads.emplace_back([&shards, w, part = sentences.subspan(begin, end - begin)] {
        NGramCounter counter;
        for (const auto& s : part) counter.add_sentence(s);
        shards[w] = std::move(counter).finish(1);
      });
    }
  }
  NGramTable merged;
  for (const auto& shard : shards) merged = merge(merged, shard);

  // Filter after merging so that the floor applies to global counts.
  NGramCounter filter;
  filter.table_ = std::move(merged);
  return std::move(filter).finish(min_count);
}

NGramTable merge(const NGramTable& a, const NGramTable& b) {
  if (b.empty()) return a;
  if (a.empty()) return b;
  if (a.min_count_ != b.min_count_) {
    throw std::invalid_argument("cannot merge tables built with different min_count");
  }
  NGramTable out = a;
  std::vector<NGramTable::WordId> remap(b.words_.size());
  for (std::size_t i = 0; i < b.words_.size(); ++i) {
    remap[i] = out.intern(b.words_[i]);
    out.unigrams_[remap[i]].count += b.unigrams_[i].count;
  }
  for (const auto& [key, count] : b.bigrams_) {
    out.bigrams_[NGramTable::pair_key(remap[static_cast<NGramTable::WordId>(key >> 32)],
                                      remap[static_cast<NGramTable::WordId>(key & 0xFFFFFFFFu)])] +=
        count;
  }
  out.total_tokens_ += b.total_tokens_;
  out.recompute_diversity();
  return out;
}

void write_index(const NGramTable& table, std::ostream& out) {
  out << kIndexMagic << " v" << kIndexVersion << '\n';
  out << "#tokens " << table.total_tokens() << '\n';
  out << "#min-count " << table.min_count() << '\n';
  for (const auto& [word, u] : table.sorted_unigrams()) {
    out << "U\t" << word << '\t' << u.count << '\t' << u.right_diversity << '\t'
        << u.left_diversity << '\n';
  }
  for (const auto& b : table.sorted_bigrams()) {
    out << "B\t" << b.first << '\t' << b.second << '\t' << b.count << '\n';
  }
}

namespace {

std::uint64_t header_value(std::string_view line, std::string_view key, std::size_t lineno) {
  if (line.size() <= key.size() || line.substr(0, key.size()) != key || line[key.size()] != ' ') {
    throw FormatError("expected '" + std::string(key) + " <n>'", lineno);
  }
  const auto v = io::parse_u64(line.substr(key.size() + 1));
  if (!v) throw FormatError("bad number in '" + std::string(key) + "'", lineno);
  return *v;
}

bool valid_word(std::string_view w) {
  return !w.empty() && w.find_first_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

NGramTable read_index(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    return true;
  };

  if (!next()) throw FormatError("empty index file", 1);
  const std::string expected = std::string(kIndexMagic) + " v" + std::to_string(kIndexVersion);
  if (line != expected) {
    const std::string prefix = std::string(kIndexMagic) + " v";
    if (line.rfind(prefix, 0) == 0) {
      throw VersionError("unsupported index version '" + line.substr(prefix.size()) +
                         "' (expected " + std::to_string(kIndexVersion) + ")");
    }
    throw FormatError("missing '" + expected + "' header", 1);
  }
  if (!next()) throw FormatError("missing #tokens header", 2);
  const std::uint64_t total = header_value(line, "#tokens", lineno);
  if (!next()) throw FormatError("missing #min-count header", 3);
  const std::uint64_t min_count = header_value(line, "#min-count", lineno);
  if (min_count == 0) throw FormatError("min-count must be >= 1", lineno);

  NGramTable t;
  t.total_tokens_ = total;
  t.min_count_ = min_count;
  std::vector<UnigramStats> stored;
  std::vector<std::size_t> unigram_line;
  bool in_bigrams = false;
  std::uint64_t sum = 0;

  while (next()) {
    if (line.empty()) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw FormatError("empty record", lineno);
    }
    const auto f = io::split(line, '\t');
    if (f[0] == "U") {
      if (in_bigrams) throw FormatError("unigram record after bigram records", lineno);
      if (f.size() != 5) throw FormatError("unigram record needs 5 fields", lineno);
      if (!valid_word(f[1])) throw FormatError("invalid word", lineno);
      const auto c = io::parse_u64(f[2]);
      const auto r = io::parse_u64(f[3]);
      const auto l = io::parse_u64(f[4]);
      if (!c || !r || !l) throw FormatError("bad number in unigram record", lineno);
      if (*c == 0) throw FormatError("unigram count must be positive", lineno);
      if (t.find_id(f[1])) throw FormatError("duplicate unigram '" + std::string(f[1]) + "'", lineno);
      t.intern(f[1]);
      t.unigrams_.back().count = *c;
      stored.push_back({*c, *r, *l});
      unigram_line.push_back(lineno);
      sum += *c;
    } else if (f[0] == "B") {
      in_bigrams = true;
      if (f.size() != 4) throw FormatError("bigram record needs 4 fields", lineno);
      const auto a = t.find_id(f[1]);
      const auto b = t.find_id(f[2]);
      if (!a || !b) throw FormatError("bigram references an unknown word", lineno);
      const auto c = io::parse_u64(f[3]);
      if (!c) throw FormatError("bad number in bigram record", lineno);
      if (*c < min_count) throw FormatError("bigram count below min-count", lineno);
      if (*c > t.unigrams_[*a].count || *c > t.unigrams_[*b].count) {
        throw FormatError("bigram count exceeds a unigram count", lineno);
      }
      if (!t.bigrams_.emplace(NGramTable::pair_key(*a, *b), *c).second) {
        throw FormatError("duplicate bigram", lineno);
      }
    } else {
      throw FormatError("unknown record type '" + std::string(f[0]) + "'", lineno);
    }
  }
  if (sum != total) throw FormatError("unigram counts do not sum to #tokens", 2);

  t.recompute_diversity();
  for (std::size_t i = 0; i < stored.size(); ++i) {
    if (!(stored[i] == t.unigrams_[i])) {
      throw FormatError("diversity counts inconsistent with bigram records", unigram_line[i]);
    }
  }
  return t;
}

void save_index(const NGramTable& table, const std::filesystem::path& path) {
  std::ostringstream out;
  write_index(table, out);
  io::atomic_write(path, out.str());
}

NGramTable load_index(const std::filesystem::path& path) {
  std::istringstream in(io::read_file(path));
  return read_index(in);
}

}  // namespace collgram
