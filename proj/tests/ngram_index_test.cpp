#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "collgram/errors.hpp"
#include "collgram/ngram_index.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace collgram;

namespace {

NGramTable abab(std::uint64_t min_count = 1) {
  const std::vector<TokenSequence> corpus{{"a", "b", "a", "b"}};
  return build_index(corpus, min_count);
}

NGramTable read_string(const std::string& s) {
  std::istringstream in(s);
  return read_index(in);
}

std::string write_string(const NGramTable& t) {
  std::ostringstream out;
  write_index(t, out);
  return out.str();
}

}  // namespace

TEST(BuildIndex, HandCountedExample) {
  const auto t = abab();
  EXPECT_EQ(t.total_tokens(), 4u);
  EXPECT_EQ(t.unigram("a"), (UnigramStats{2, 1, 1}));
  EXPECT_EQ(t.unigram("b"), (UnigramStats{2, 1, 1}));
  EXPECT_EQ(t.bigram_count("a", "b"), 2u);
  EXPECT_EQ(t.bigram_count("b", "a"), 1u);
  EXPECT_EQ(t.bigram_count("a", "a"), 0u);
  EXPECT_EQ(t.bigram_types(), 2u);
}

TEST(BuildIndex, NoCrossSentencePairs) {
  const std::vector<TokenSequence> corpus{{"a"}, {"b"}};
  const auto t = build_index(corpus);
  EXPECT_EQ(t.total_tokens(), 2u);
  EXPECT_EQ(t.bigram_types(), 0u);
  EXPECT_EQ(t.unigram("a").right_diversity, 0u);
}

TEST(BuildIndex, MinCountFilterRederivesDiversity) {
  const auto t = abab(2);
  EXPECT_EQ(t.total_tokens(), 4u);
  EXPECT_EQ(t.bigram_count("b", "a"), 0u);
  EXPECT_EQ(t.bigram_count("a", "b"), 2u);
  EXPECT_EQ(t.unigram("b").right_diversity, 0u);
  EXPECT_EQ(t.unigram("a").left_diversity, 0u);
  EXPECT_EQ(t.unigram("a").count, 2u);
  EXPECT_FALSE(t.lookup_bigram("b", "a"));
}

TEST(BuildIndex, EmptyCorpusAndBadMinCount) {
  const auto t = build_index(std::vector<TokenSequence>{});
  EXPECT_EQ(t.total_tokens(), 0u);
  EXPECT_EQ(t.vocabulary_size(), 0u);
  EXPECT_THROW(build_index(std::vector<TokenSequence>{}, 0), std::invalid_argument);
}

TEST(BuildIndex, MatchesNaiveRecount) {
  synth::Rng rng(2024);
  for (std::uint64_t min_count : {1u, 2u, 3u}) {
    const auto corpus = synth::random_sentences(rng, 300, 25, 12);
    const auto t = build_index(corpus, min_count);
    EXPECT_TRUE(synth::matches_naive(t, synth::naive_count(corpus, min_count)))
        << "min_count=" << min_count;
  }
}

TEST(BuildIndex, TableInvariants) {
  synth::Rng rng(5);
  const auto corpus = synth::random_sentences(rng, 400, 40, 15);
  const auto t = build_index(corpus, 2);
  std::uint64_t sum = 0;
  for (const auto& [w, u] : t.sorted_unigrams()) {
    sum += u.count;
    EXPECT_LE(u.right_diversity, u.count);
    EXPECT_LE(u.left_diversity, u.count);
  }
  EXPECT_EQ(sum, t.total_tokens());
  for (const auto& b : t.sorted_bigrams()) {
    EXPECT_LE(b.count, std::min(t.unigram(b.first).count, t.unigram(b.second).count));
  }
}

TEST(BuildIndexParallel, EqualsSequential) {
  synth::Rng rng(99);
  const auto corpus = synth::random_sentences(rng, 500, 30, 10);
  for (unsigned workers : {1u, 2u, 3u, 8u}) {
    for (std::uint64_t k : {1u, 3u}) {
      EXPECT_EQ(build_index_parallel(corpus, k, workers), build_index(corpus, k));
    }
  }
}

TEST(LookupBigram, ReturnsAllOperands) {
  const auto t = abab();
  EXPECT_EQ(t.lookup_bigram("a", "b"), (BigramOperands{2, 2, 2, 1, 1, 4}));
  EXPECT_FALSE(t.lookup_bigram("a", "a"));
  EXPECT_FALSE(t.lookup_bigram("a", "zzz"));
  EXPECT_FALSE(t.lookup_bigram("zzz", "a"));
  EXPECT_FALSE(abab(2).lookup_bigram("b", "a"));
}

TEST(Merge, IdentityAndSelfMerge) {
  const auto t = abab();
  EXPECT_EQ(merge(t, NGramTable{}), t);
  EXPECT_EQ(merge(NGramTable{}, t), t);

  const auto doubled = merge(t, t);
  EXPECT_EQ(doubled.total_tokens(), 8u);
  EXPECT_EQ(doubled.unigram("a"), (UnigramStats{4, 1, 1}));
  EXPECT_EQ(doubled.bigram_count("a", "b"), 4u);
  EXPECT_EQ(doubled.bigram_count("b", "a"), 2u);
}

TEST(Merge, EqualsBuildOfConcatenation) {
  synth::Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto corpus = synth::random_sentences(rng, 50, 12, 8);
    const std::size_t cut = synth::below(rng, corpus.size() + 1);
    const std::span<const TokenSequence> all(corpus);
    const auto merged = merge(build_index(all.first(cut)), build_index(all.subspan(cut)));
    EXPECT_EQ(merged, build_index(all));
  }
}

TEST(Merge, CommutativeAndAssociative) {
  synth::Rng rng(23);
  const auto a = build_index(synth::random_sentences(rng, 30, 10, 6));
  const auto b = build_index(synth::random_sentences(rng, 30, 10, 6));
  const auto c = build_index(synth::random_sentences(rng, 30, 10, 6));
  EXPECT_EQ(merge(a, b), merge(b, a));
  EXPECT_EQ(merge(merge(a, b), c), merge(a, merge(b, c)));
}

TEST(Merge, RejectsMixedMinCount) {
  EXPECT_THROW(merge(abab(1), abab(2)), std::invalid_argument);
}

TEST(IndexFormat, BitExactLayout) {
  EXPECT_EQ(write_string(abab()),
            "#collgram-index v1\n"
            "#tokens 4\n"
            "#min-count 1\n"
            "U\ta\t2\t1\t1\n"
            "U\tb\t2\t1\t1\n"
            "B\ta\tb\t2\n"
            "B\tb\ta\t1\n");
}

TEST(IndexFormat, RoundTripExample) {
  const auto t = abab();
  EXPECT_EQ(read_string(write_string(t)), t);
  const auto t2 = abab(2);
  EXPECT_EQ(read_string(write_string(t2)), t2);
}

TEST(IndexFormat, RoundTripRandomTables) {
  synth::Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const auto corpus = synth::random_sentences(rng, 200, 50, 12);
    const auto t = build_index(corpus, 1 + synth::below(rng, 3));
    const auto text = write_string(t);
    const auto back = read_string(text);
    EXPECT_EQ(back, t);
    EXPECT_EQ(write_string(back), text);
  }
}

TEST(IndexFormat, UnicodeWordsRoundTrip) {
  const std::vector<TokenSequence> corpus{{"żółć", "gęślą", "jaźń"}, {"żółć", "gęślą"}};
  const auto t = build_index(corpus);
  EXPECT_EQ(read_string(write_string(t)), t);
}

TEST(IndexFormat, SaveLoadFile) {
  const auto path = std::filesystem::temp_directory_path() / "collgram_index_test.idx";
  const auto t = abab();
  save_index(t, path);
  EXPECT_EQ(load_index(path), t);
  std::filesystem::remove(path);
  EXPECT_THROW(load_index(path), IoError);
}

TEST(IndexFormat, VersionMismatchIsDistinct) {
  EXPECT_THROW(read_string("#collgram-index v99\n#tokens 0\n#min-count 1\n"), VersionError);
}

TEST(IndexFormat, CorruptInputNamesLine) {
  struct Case {
    std::string text;
    std::size_t line;
  };
  const std::string head = "#collgram-index v1\n#tokens 4\n#min-count 1\n";
  const Case cases[] = {
      {"garbage\n", 1},
      {"#collgram-index v1\n#tokens x\n#min-count 1\n", 2},
      {"#collgram-index v1\n#tokens 4\n#mincount 1\n", 3},
      {head + "U\ta\t2\t1\n", 4},
      {head + "U\ta\t2\t1\t1\nU\tb\tzwei\t1\t1\n", 5},
      {head + "U\ta\t2\t1\t1\nU\tb\t2\t1\t1\nB\ta\tb\t2\nB\tb\tc\t1\n", 7},
      {head + "U\ta\t2\t1\t1\nU\tb\t2\t1\t1\nX\ta\n", 6},
      {head + "U\ta\t2\t1\t1\nU\tb\t2\t1\t1\nB\ta\tb\t2\nU\tc\t1\t0\t0\n", 7},
      {head + "U\ta\t2\t1\t1\nU\ta\t2\t1\t1\n", 5},
      // Stored diversity disagrees with the bigram records.
      {head + "U\ta\t2\t5\t1\nU\tb\t2\t1\t1\nB\ta\tb\t2\nB\tb\ta\t1\n", 4},
      // Bigram count exceeds a unigram count.
      {head + "U\ta\t2\t1\t1\nU\tb\t2\t1\t1\nB\ta\tb\t3\nB\tb\ta\t1\n", 6},
      // Unigram counts do not add up to #tokens.
      {"#collgram-index v1\n#tokens 5\n#min-count 1\nU\ta\t2\t0\t0\nU\tb\t2\t0\t0\n", 2},
  };
  for (const auto& c : cases) {
    try {
      read_string(c.text);
      ADD_FAILURE() << "accepted corrupt input:\n" << c.text;
    } catch (const FormatError& e) {
      EXPECT_EQ(e.line(), c.line) << e.what() << "\n" << c.text;
    }
  }
}
