#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "stdout.txt";
  const std::string cmd = std::string(ATTEND_CLI_PATH) + " " + args + " > " + log.string() +
                          " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("attend_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    const auto r = run("synth --users 60 --groups 4 --seed 3 --posts " + p("posts.tsv") +
                           " --edges " + p("edges.txt"),
                       dir_);
    ASSERT_EQ(r.code, 0);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string p(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SynthWritesFiles) {
  EXPECT_TRUE(fs::exists(dir_ / "posts.tsv"));
  EXPECT_NE(slurp(dir_ / "edges.txt").find("u00"), std::string::npos);
}

TEST_F(Cli, EmbedEachMethod) {
  for (const std::string method : {"node2vec", "harp", "poincare"}) {
    const auto r = run("embed --method " + method + " --edges " + p("edges.txt") + " --out " +
                           p(method + ".emb") + " --dim 8 --epochs 1 --hierarchy " +
                           p("levels.txt"),
                       dir_);
    ASSERT_EQ(r.code, 0) << method;
    std::istringstream in(slurp(dir_ / (method + ".emb")));
    std::size_t rows = 0, dim = 0;
    in >> rows >> dim;
    EXPECT_EQ(rows, 60u);
    EXPECT_EQ(dim, 8u);
  }
  EXPECT_NE(slurp(dir_ / "levels.txt").find("level 0: 60 nodes"), std::string::npos);
}

TEST_F(Cli, TrainThenEvaluate) {
  ASSERT_EQ(run("embed --method harp --edges " + p("edges.txt") + " --out " + p("h.emb") +
                    " --dim 8 --epochs 1",
                dir_)
                .code,
            0);
  ASSERT_EQ(run("featurize --posts " + p("posts.tsv") + " --vocab-out " + p("vocab.tsv") +
                    " --vectors-out " + p("vectors.txt"),
                dir_)
                .code,
            0);
  EXPECT_FALSE(slurp(dir_ / "vocab.tsv").empty());
  ASSERT_EQ(run("train --posts " + p("posts.tsv") + " --embeddings " + p("h.emb") +
                    " --epochs 5 --model-out " + p("model.txt") + " --vocab-out " + p("v.tsv"),
                dir_)
                .code,
            0);
  const auto r = run("evaluate --posts " + p("posts.tsv") + " --model " + p("model.txt") +
                         " --vocab " + p("v.tsv") + " --embeddings " + p("h.emb"),
                     dir_);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("accuracy,precision,recall,f1\n", 0), 0u);
}

TEST_F(Cli, PipelineAndSweep) {
  std::ofstream(dir_ / "exp.ini") << "[synth]\nusers = 60\ngroups = 4\n"
                                  << "[node2vec]\ndim = 8\nwalk_length = 10\nepochs = 1\n"
                                  << "[mlp]\nepochs = 5\n"
                                  << "[experiment]\nvariants = T+HARP, T\n";
  const auto r = run("pipeline --config " + p("exp.ini") + " --report " + p("report.csv"), dir_);
  ASSERT_EQ(r.code, 0);
  const std::string report = slurp(dir_ / "report.csv");
  EXPECT_EQ(report.rfind("variant,fold,accuracy,precision,recall,f1\n", 0), 0u);
  EXPECT_NE(report.find("T+HARP,mean,"), std::string::npos);

  const auto s = run("embed --method node2vec --edges " + p("edges.txt") + " --posts " +
                         p("posts.tsv") + " --config " + p("exp.ini") + " --sweep d=4,8",
                     dir_);
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(s.out.rfind("parameter,value,accuracy\nd,4,", 0), 0u);
}

TEST_F(Cli, ErrorsExitNonzero) {
  EXPECT_NE(run("embed --method glove --edges " + p("edges.txt"), dir_).code, 0);
  EXPECT_NE(run("embed --method harp --edges " + p("missing.txt") + " --out " + p("x"), dir_).code,
            0);
  std::ofstream(dir_ / "loop.txt") << "a b\nc c\n";
  const auto r = run("embed --method harp --edges " + p("loop.txt") + " --out " + p("x"), dir_);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("self-loop at line 2"), std::string::npos);
  EXPECT_NE(run("pipeline --config " + p("nope.ini"), dir_).code, 0);
}
