#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Cli : ::testing::Test {
  fs::path dir;

  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / ("stylex-cli-" + std::string(info->name()) + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(STYLEX_CLI) + " " + args + " > " + (dir / "stdout.txt").string() + " 2> " +
                            (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string p(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const std::string kFixtures = STYLEX_FIXTURES;

}  // namespace

TEST_F(Cli, UnknownStrategyIsAConfigError) {
  EXPECT_EQ(run("crawl --backend sim:" + kFixtures + "/two-state-anchor.json --strategy BFS --out " + p("o")), 2);
}

TEST_F(Cli, MissingArgumentsAndAppsAreConfigErrors) {
  EXPECT_EQ(run("crawl --strategy DEF"), 2);
  EXPECT_EQ(run("crawl --backend sim:" + p("absent.json") + " --strategy DEF --out " + p("o")), 2);
  EXPECT_EQ(run("nonsense"), 2);
}

TEST_F(Cli, StyleGuidedCrawlWithoutModelsIsAConfigError) {
  EXPECT_EQ(run("crawl --backend sim:" + kFixtures + "/two-state-anchor.json --strategy STYLEX_CLK --out " + p("o")), 2);
}

TEST_F(Cli, GenAppThenCrawlWritesEveryOutput) {
  ASSERT_EQ(run("gen-app --kind deep-menu --depth 2 --out " + p("app.json")), 0);
  ASSERT_EQ(run("crawl --backend sim:" + p("app.json") + " --strategy DEF --budget-actions 20 --out " + p("crawl")), 0);
  for (const char* f : {"graph.json", "graph.dot", "registry.json", "actions.csv", "timings.csv", "crawl-report.json",
                        "config.json"})
    EXPECT_TRUE(fs::exists(dir / "crawl" / f)) << f;
  const auto cfg = nlohmann::json::parse(slurp(dir / "crawl" / "config.json"));
  EXPECT_EQ(cfg["command"], "crawl");
  EXPECT_EQ(cfg["strategy"], "DEF");
  const auto graph = nlohmann::json::parse(slurp(dir / "crawl" / "graph.json"));
  EXPECT_EQ(graph["states"].size(), 4u);
}

TEST_F(Cli, CompareIsReproducible) {
  const std::string args = "compare --backend sim:" + kFixtures +
                           "/equivalence-classes-5x10.json --models oracle --strategies STYLEX_CLK,RND "
                           "--repeats 1 --seed 9 --budget-actions 15 --out ";
  ASSERT_EQ(run(args + p("one")), 0);
  ASSERT_EQ(run(args + p("two")), 0);
  for (const char* f : {"compare-report.json", "coverage-per-action.csv", "coverage.svg", "config.json"})
    EXPECT_EQ(slurp(dir / "one" / f), slurp(dir / "two" / f)) << f;
  const auto rep = nlohmann::json::parse(slurp(dir / "one" / "compare-report.json"));
  EXPECT_EQ(rep["strategies"][0]["strategy"], "STYLEX_CLK");
  EXPECT_EQ(rep["strategies"][0]["actions_to_final"][0], 5);
}

TEST_F(Cli, CollectTrainEvalCrawlPipeline) {
  ASSERT_EQ(run("collect --backend sim:" + kFixtures + "/equivalence-classes-5x10.json --backend sim:" + kFixtures +
                "/two-state-anchor.json --backend sim:" + kFixtures + "/deep-menu.json --out " + p("data")),
            0);
  ASSERT_TRUE(fs::exists(dir / "data" / "corpus.jsonl"));
  ASSERT_EQ(run("train --corpus " + p("data/corpus.jsonl") + " --event click --boosting-rounds 3 --out " + p("train")), 0)
      << slurp(dir / "stderr.txt");
  EXPECT_TRUE(fs::exists(dir / "train" / "models" / "click.model.json"));
  EXPECT_TRUE(fs::exists(dir / "train" / "importance.json"));
  ASSERT_EQ(run("eval --corpus " + p("data/corpus.jsonl") + " --models " + p("train/models") + " --out " + p("eval")), 0);
  EXPECT_TRUE(fs::exists(dir / "eval" / "eval-report.csv"));
  EXPECT_EQ(run("crawl --backend sim:" + kFixtures + "/deep-menu.json --strategy STYLEX_CLK --models " +
                p("train/models") + " --budget-actions 10 --out " + p("crawl")),
            0)
      << slurp(dir / "stderr.txt");
}

TEST_F(Cli, MalformedCorpusIsADataError) {
  std::ofstream(dir / "bad.jsonl") << "{\"format\": \"nope\"}\n";
  EXPECT_EQ(run("train --corpus " + p("bad.jsonl") + " --out " + p("t")), 4);
}
