#include "synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace collgram::synth {

namespace {

constexpr const char* kSyllables[] = {"ka", "lo", "mi", "ne", "su", "ta", "po", "ri", "go", "de",
                                      "wa", "zy", "be", "cu", "fa", "ho", "ja", "le", "mo", "ś"};
constexpr std::size_t kBase = std::size(kSyllables);

}  // namespace

std::string synthetic_word(std::size_t i) {
  std::vector<std::size_t> digits;
  do {
    digits.push_back(i % kBase);
    i /= kBase;
  } while (i > 0);
  if (digits.size() < 2) digits.push_back(0);
  std::string w;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) w += kSyllables[*it];
  return w;
}

SyntheticLanguage::SyntheticLanguage(std::uint64_t seed, std::size_t vocabulary,
                                     std::size_t collocations) {
  words_.reserve(vocabulary);
  double total = 0;
  for (std::size_t i = 0; i < vocabulary; ++i) {
    words_.push_back(synthetic_word(i));
    total += 1.0 / static_cast<double>(i + 1);
    cdf_.push_back(total);
  }
  for (auto& c : cdf_) c /= total;

  // Collocations join mid/low-frequency words so that they carry high MI.
  Rng rng(seed);
  const std::size_t lo = vocabulary / 10;
  for (std::size_t k = 0; k < collocations; ++k) {
    const std::size_t a = lo + below(rng, vocabulary - lo);
    std::size_t b = lo + below(rng, vocabulary - lo);
    if (b == a) b = lo + (b + 1 - lo) % (vocabulary - lo);
    pairs_.emplace_back(words_[a], words_[b]);
  }
}

const std::string& SyntheticLanguage::zipf_word(Rng& rng) const {
  const double u = unit(rng);
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  return words_[std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), words_.size() - 1)];
}

const std::pair<std::string, std::string>& SyntheticLanguage::collocation(Rng& rng) const {
  return pairs_[below(rng, pairs_.size())];
}

TokenSequence SyntheticLanguage::sentence(Rng& rng, std::size_t length, double collocation_rate) const {
  TokenSequence out;
  out.reserve(length + 1);
  while (out.size() < length) {
    if (unit(rng) < collocation_rate) {
      const auto& [a, b] = collocation(rng);
      out.push_back(a);
      out.push_back(b);
    } else {
      out.push_back(zipf_word(rng));
    }
  }
  out.resize(length);
  return out;
}

std::vector<TokenSequence> SyntheticLanguage::reference_corpus(Rng& rng, std::size_t sentences,
                                                               double collocation_rate) const {
  std::vector<TokenSequence> out;
  out.reserve(sentences);
  for (std::size_t i = 0; i < sentences; ++i) {
    out.push_back(sentence(rng, 6 + below(rng, 15), collocation_rate));
  }
  return out;
}

std::string SyntheticLanguage::corpus_text(Rng& rng, std::size_t tokens, double collocation_rate) const {
  std::string out;
  std::size_t emitted = 0;
  std::size_t in_paragraph = 0;
  while (emitted < tokens) {
    const auto s = sentence(rng, std::min<std::size_t>(6 + below(rng, 15), tokens - emitted),
                            collocation_rate);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i == 0) {
        // Capitalise the first ASCII letter to exercise case folding.
        std::string w = s[i];
        if (w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
        out += w;
      } else {
        out += ' ';
        out += s[i];
      }
    }
    emitted += s.size();
    out += (below(rng, 5) == 0) ? "! " : ". ";
    if (++in_paragraph == 8) {
      out.back() = '\n';
      in_paragraph = 0;
    }
  }
  out.push_back('\n');
  return out;
}

std::string SyntheticLanguage::entry_text(Rng& rng, double collocation_rate) const {
  const std::size_t words = kMinEntryWords + below(rng, kMaxEntryWords - kMinEntryWords + 1);
  const auto tokens = sentence(rng, words, collocation_rate);
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += (i % 13 == 0) ? ". " : " ";
    out += tokens[i];
  }
  out += '.';
  return out;
}

std::vector<LabeledEntry> planted_dataset(const SyntheticLanguage& lang, Rng& rng,
                                          std::size_t healthy, std::size_t depressed,
                                          const std::string& id_prefix) {
  std::vector<LabeledEntry> out;
  std::size_t h = 0, d = 0;
  while (h < healthy || d < depressed) {
    // Interleave so that any prefix is roughly balanced.
    const bool pick_healthy = d >= depressed || (h < healthy && unit(rng) < 0.5);
    const double rate = pick_healthy ? 0.5 + 0.3 * unit(rng) : 0.2 + 0.3 * unit(rng);
    LabeledEntry e;
    e.id = id_prefix + std::to_string(out.size());
    e.text = lang.entry_text(rng, rate);
    e.label = pick_healthy ? Label::healthy : Label::depressed;
    out.push_back(std::move(e));
    (pick_healthy ? h : d)++;
  }
  return out;
}

std::vector<TokenSequence> random_sentences(Rng& rng, std::size_t count, std::size_t vocabulary,
                                            std::size_t max_length) {
  std::vector<TokenSequence> out(count);
  for (auto& s : out) {
    const std::size_t len = below(rng, max_length + 1);
    for (std::size_t i = 0; i < len; ++i) s.push_back(synthetic_word(below(rng, vocabulary)));
  }
  return out;
}

}  // namespace collgram::synth
