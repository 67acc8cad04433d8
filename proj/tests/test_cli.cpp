#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const char* bin = std::getenv("FORA_CLI");
    ASSERT_NE(bin, nullptr) << "FORA_CLI must point at the CLI binary";
    cli_ = bin;
    dir_ = fs::temp_directory_path() /
           ("fora_cli_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd =
        cli_ + " " + args + " >" + (dir_ / "stdout").string() + " 2>" +
        (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  std::string cli_;
  fs::path dir_;
};

TEST_F(CliTest, GenerateExamples) {
  ASSERT_EQ(run("generate --kind cycle --n 2"), 0);
  EXPECT_EQ(read("stdout"), "0 1\n1 0\n");
  ASSERT_EQ(run("generate --kind star --n 4"), 0);
  EXPECT_EQ(read("stdout"), "0 1\n0 2\n0 3\n");
  ASSERT_EQ(run("generate --kind erdos-renyi --n 100 --m 300 --seed 4 --out " +
                path("a.txt")),
            0);
  ASSERT_EQ(run("generate --kind erdos-renyi --n 100 --m 300 --seed 4 --out " +
                path("b.txt")),
            0);
  EXPECT_EQ(read("a.txt"), read("b.txt"));
  EXPECT_FALSE(read("a.txt").empty());
}

TEST_F(CliTest, QueryIsReproducible) {
  ASSERT_EQ(run("generate --kind erdos-renyi --n 300 --m 2000 --seed 1 --out " +
                path("g.txt")),
            0);
  for (const char* method : {"fora", "fora-basic", "mc"}) {
    const std::string base = "query --graph " + path("g.txt") +
                             " --source 0 --seed 1 --method " + method;
    ASSERT_EQ(run(base + " --out " + path("1.tsv")), 0);
    ASSERT_EQ(run(base + " --out " + path("2.tsv")), 0);
    EXPECT_EQ(read("1.tsv"), read("2.tsv")) << method;
    const std::string tsv = read("1.tsv");
    EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 300);
  }
}

TEST_F(CliTest, TopKWithIndexMatchesOnline) {
  ASSERT_EQ(run("generate --kind ba-preferential --n 400 --m 3 --seed 2 --out " +
                path("g.txt")),
            0);
  const std::string g = " --graph " + path("g.txt");
  ASSERT_EQ(run("build-index" + g + " --topk 10 --seed 5 --out " +
                path("g.idx")),
            0);
  ASSERT_EQ(run("topk" + g + " --source 3 --k 10 --seed 5 --method fora-plus "
                "--index " + path("g.idx") + " --out " + path("plus.tsv")),
            0);
  ASSERT_EQ(run("topk" + g + " --source 3 --k 10 --seed 5 --method fora "
                "--out " + path("online.tsv")),
            0);
  EXPECT_EQ(read("plus.tsv"), read("online.tsv"));
  EXPECT_EQ(read("plus.tsv.json"), read("online.tsv.json"));
  const std::string tsv = read("online.tsv");
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 10);
  const std::string json = read("online.tsv.json");
  for (const char* key :
       {"delta_final", "iterations", "walks", "pushes", "certified"}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
  ASSERT_EQ(run("build-index" + g + " --topk 10 --topk-refine --seed 5 --out " +
                path("r.idx")),
            0);
  ASSERT_EQ(run("topk" + g + " --source 3 --k 10 --seed 5 --method fora-plus "
                "--algorithm refine --index " + path("r.idx") + " --out " +
                path("plus_r.tsv")),
            0);
  ASSERT_EQ(run("topk" + g + " --source 3 --k 10 --seed 5 --method topk-refine "
                "--out " + path("online_r.tsv")),
            0);
  EXPECT_EQ(read("plus_r.tsv"), read("online_r.tsv"));
}

TEST_F(CliTest, WholeGraphIndexQuery) {
  ASSERT_EQ(run("generate --kind erdos-renyi --n 200 --m 1500 --seed 3 --out " +
                path("g.txt")),
            0);
  const std::string g = " --graph " + path("g.txt");
  ASSERT_EQ(run("build-index" + g + " --seed 7 --out " + path("g.idx")), 0);
  EXPECT_NE(read("stdout").find("destinations"), std::string::npos);
  ASSERT_EQ(run("query" + g + " --source 1 --method fora-plus --index " +
                path("g.idx") + " --out " + path("plus.tsv")),
            0);
  ASSERT_EQ(run("query" + g + " --source 1 --method fora-basic --seed 7 --out " +
                path("basic.tsv")),
            0);
  EXPECT_EQ(read("plus.tsv"), read("basic.tsv"));
}

TEST_F(CliTest, PageRankSumsToOne) {
  ASSERT_EQ(run("generate --kind ba-preferential --n 200 --m 2 --seed 3 --out " +
                path("g.txt")),
            0);
  ASSERT_EQ(run("pagerank --graph " + path("g.txt") + " --out " +
                path("pr.tsv")),
            0);
  std::istringstream in(read("pr.tsv"));
  double sum = 0.0;
  double previous = 1.0;
  unsigned node;
  double score;
  while (in >> node >> score) {
    EXPECT_LE(score, previous);
    previous = score;
    sum += score;
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST_F(CliTest, EvalWritesMetricsCsv) {
  ASSERT_EQ(run("generate --kind erdos-renyi --n 300 --m 2400 --seed 5 --out " +
                path("g.txt")),
            0);
  ASSERT_EQ(run("eval --graph " + path("g.txt") +
                " --method fora --sources 5 --seed 7 --out " + path("m.csv")),
            0);
  std::istringstream in(read("m.csv"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "query_id,method,k,precision,ndcg,violations,walks,pushes,"
            "violation_fraction");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 5 * 5);
  ASSERT_EQ(run("eval --graph " + path("g.txt") +
                " --method topk-fast --sources 2 --k 10 --seed 7"),
            0);
  EXPECT_NE(read("stdout").find(",topk-fast,10,"), std::string::npos);
}

TEST_F(CliTest, BenchWritesTable) {
  ASSERT_EQ(run("generate --kind erdos-renyi --n 200 --m 1200 --seed 5 --out " +
                path("g.txt")),
            0);
  ASSERT_EQ(run("bench --graph " + path("g.txt") + " --sources 3 --k 5"), 0);
  const std::string csv = read("stdout");
  EXPECT_EQ(csv.rfind("method,queries,total_ms,mean_ms,walks,pushes\n", 0), 0u);
  for (const char* row : {"\nmc,", "\nfora-basic,", "\nfora,", "\nfora-plus,",
                          "\ntopk-fast,", "\ntopk-refine,", "\nmc-topk,"}) {
    EXPECT_NE(csv.find(row), std::string::npos) << row;
  }
}

TEST_F(CliTest, ExitCodes) {
  write("bad.txt", "0 1\nnot an edge\n");
  write("g.txt", "0 1\n1 2\n2 0\n");
  EXPECT_EQ(run("query --graph " + path("missing.txt") + " --source 0"), 3);
  EXPECT_EQ(run("query --graph " + path("bad.txt") + " --source 0"), 4);
  EXPECT_EQ(run("topk --graph " + path("g.txt") + " --source 0 --k 9"), 2);
  EXPECT_EQ(run("query --graph " + path("g.txt") + " --source 7"), 2);
  EXPECT_EQ(run("query --graph " + path("g.txt") + " --source 0 --epsilon 2"),
            2);
  EXPECT_EQ(run("nonsense"), 2);
  EXPECT_EQ(run("query --graph " + path("g.txt") +
                " --source 0 --method fora-plus"),
            2);
  EXPECT_EQ(run("query --graph " + path("g.txt") +
                " --source 0 --method fora-plus --index " + path("none.idx")),
            3);
  write("junk.idx", "FORAIDX1 but not really");
  EXPECT_EQ(run("query --graph " + path("g.txt") +
                " --source 0 --method fora-plus --index " + path("junk.idx")),
            4);
  // An index built for other parameters is incompatible.
  ASSERT_EQ(run("build-index --graph " + path("g.txt") +
                " --epsilon 0.3 --out " + path("other.idx")),
            0);
  EXPECT_EQ(run("query --graph " + path("g.txt") +
                " --source 0 --method fora-plus --index " + path("other.idx")),
            4);
  // A whole-graph index is too small for top-k.
  EXPECT_EQ(run("topk --graph " + path("g.txt") +
                " --source 0 --k 1 --method fora-plus --index " +
                path("other.idx")),
            4);
}

}  // namespace
