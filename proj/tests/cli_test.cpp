#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "collgram/dataset.hpp"
#include "collgram/ngram_index.hpp"
#include "collgram/scoring.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;
using namespace collgram;

namespace {

struct Outcome {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("collgram_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    synth::SyntheticLanguage lang(21, 600, 100);
    synth::Rng rng(21);
    spit(dir_ / "corpus.txt", lang.corpus_text(rng, 40000));
    spit(dir_ / "data.jsonl", dataset_jsonl(synth::planted_dataset(lang, rng, 15, 15, "e")));
    spit(dir_ / "lex.tsv", "# polarity\n" + synth::synthetic_word(0) + "\t0.5\n" +
                               synth::synthetic_word(1) + "\t-0.5\n");
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static Outcome run(const std::string& args, const std::string& stdin_text = "") {
    const fs::path out = dir_ / "stdout", err = dir_ / "stderr", in = dir_ / "stdin";
    spit(in, stdin_text);
    const std::string cmd = std::string(COLLGRAM_CLI) + " " + args + " <" + in.string() + " >" +
                            out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  static std::string p(const std::string& name) { return (dir_ / name).string(); }

  static void build_and_train() {
    ASSERT_EQ(run("build-index --input " + p("corpus.txt") + " --output " + p("ref.idx")).code, 0);
    ASSERT_EQ(run("train --index " + p("ref.idx") + " --dataset " + p("data.jsonl") + " --output " +
                  p("model.txt"))
                  .code,
              0);
  }

  static inline fs::path dir_;
};

}  // namespace

TEST_F(CliTest, EndToEndPipeline) {
  build_and_train();
  const NGramTable t = load_index(p("ref.idx"));
  EXPECT_GT(t.total_tokens(), 30000u);
  EXPECT_NO_THROW(load_model(p("model.txt")));

  auto r = run("profile --index " + p("ref.idx") + " --input " + p("data.jsonl") + " --output " +
               p("profiles.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(p("profiles.csv"));
  EXPECT_TRUE(csv.starts_with("id,mean_mi,"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 31);

  r = run("evaluate --index " + p("ref.idx") + " --model " + p("model.txt") + " --dataset " +
          p("data.jsonl") + " --mode collgram --report " + p("r1.json") + " --figure-data " +
          p("f1.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  r = run("evaluate --index " + p("ref.idx") + " --model " + p("model.txt") + " --dataset " +
          p("data.jsonl") + " --mode collgram --report " + p("r2.json") + " --figure-data " +
          p("f2.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(p("r1.json")), slurp(p("r2.json")));
  EXPECT_EQ(slurp(p("f1.csv")), slurp(p("f2.csv")));
  EXPECT_NE(slurp(p("f1.csv")).find("\nthreshold,"), std::string::npos);

  r = run("evaluate --index " + p("ref.idx") + " --model " + p("model.txt") + " --dataset " +
          p("data.jsonl") + " --mode hybrid --lexicon " + p("lex.tsv") + " --report " +
          p("r3.json"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(p("r3.json")).find("\"mode\": \"hybrid\""), std::string::npos);
}

TEST_F(CliTest, ScoreCommand) {
  build_and_train();
  const std::string base = "score --index " + p("ref.idx") + " --model " + p("model.txt");
  auto r = run(base + " --text 'Ala ma kota'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.starts_with("collgram\t"));
  EXPECT_NE(r.out.find("\nscore\t"), std::string::npos);
  EXPECT_NE(r.err.find("warning"), std::string::npos);

  const Outcome piped = run(base + " --stdin", "Ala ma kota");
  EXPECT_EQ(piped.code, 0);
  EXPECT_EQ(piped.out, r.out);

  r = run(base + " --mode hybrid --lexicon " + p("lex.tsv") + " --text '" +
          synth::synthetic_word(0) + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("sentiment\t75\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("build-index --output x").code, 2);
  EXPECT_EQ(run("build-index --input a --output b --min-count 0").code, 2);
  build_and_train();
  const std::string base = "score --index " + p("ref.idx") + " --model " + p("model.txt");
  EXPECT_EQ(run(base).code, 2);
  EXPECT_EQ(run(base + " --mode nonsense --text x").code, 2);
  EXPECT_EQ(run(base + " --mode sentiment --text x").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(CliTest, DataErrorsExitThree) {
  build_and_train();
  spit(p("bad.jsonl"), "{\"id\":\"a\",\"text\":\"t\",\"label\":\"healthy\"}\n{\"id\":\"b\"}\n");
  auto r = run("train --index " + p("ref.idx") + " --dataset " + p("bad.jsonl") + " --output " +
               p("m2.txt"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;

  spit(p("one.jsonl"), "{\"id\":\"a\",\"text\":\"t\",\"label\":\"healthy\"}\n");
  r = run("train --index " + p("ref.idx") + " --dataset " + p("one.jsonl") + " --output " +
          p("m3.txt"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("one class absent"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(p("m3.txt")));

  spit(p("future.idx"), "#collgram-index v9\n");
  EXPECT_EQ(run("score --index " + p("future.idx") + " --model " + p("model.txt") + " --text x").code,
            3);
  EXPECT_EQ(run("build-index --input " + p("missing.txt") + " --output " + p("x.idx")).code, 3);
}

TEST_F(CliTest, ProviderErrorsExitFour) {
  build_and_train();
  int port;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  spit(p("two.jsonl"), "{\"id\":\"a\",\"text\":\"t\",\"label\":\"healthy\"}\n"
                       "{\"id\":\"b\",\"text\":\"u\",\"label\":\"depressed\"}\n");
  const auto r = run("evaluate --index " + p("ref.idx") + " --model " + p("model.txt") +
                     " --dataset " + p("two.jsonl") + " --mode sentiment --timeout 1 --endpoint http://127.0.0.1:" +
                     std::to_string(port) + "/score --report " + p("r4.json"));
  EXPECT_EQ(r.code, 4) << r.err;
  EXPECT_NE(r.err.find("[a, b]"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(p("r4.json")));
}
