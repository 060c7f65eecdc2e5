#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "iormon/errors.hpp"
#include "iormon/generators.hpp"
#include "iormon/run.hpp"
#include "iormon/stream_io.hpp"

namespace iormon {
namespace {

namespace fs = std::filesystem;

class RunTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("iormon_run_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }
  std::string read(const std::string& name) {
    std::ifstream in(dir_ / name);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }
  RunConfig config(BackendKind backend, Norm norm) {
    RunConfig c;
    c.monitor.backend = backend;
    c.monitor.metric = MetricSpec{.norm = norm, .epsilon_x = 0.05};
    c.monitor.tau = 16;
    c.schema_path = dir_ / "schema.json";
    c.input_path = dir_ / "stream.csv";
    return c;
  }

  fs::path dir_;
};

TEST_F(RunTest, ViolationFreeStream) {
  const Schema s = Schema::all_numeric(3);
  write("schema.json", schema_to_json(s));
  const auto planted = plant_violations(gen_uniform(300, 3, 2, 1), s, Norm::kL2, 0, 0.05, 1);
  std::ostringstream csv;
  write_points(csv, StreamFormat::kCsv, s, planted.points);
  write("stream.csv", csv.str());
  std::ostringstream reports;
  const RunStats stats = run(config(BackendKind::kKdTree, Norm::kL2), reports);
  EXPECT_EQ(stats.steps, 300u);
  EXPECT_EQ(stats.violations, 0u);
  EXPECT_EQ(stats.witness_pairs, 0u);
  const auto j = nlohmann::json::parse(stats.summary_json());
  EXPECT_EQ(j["backend"], "kdtree");
  EXPECT_EQ(j["counters"]["rebuilds"], 300 / 16);
}

TEST_F(RunTest, OnePlantedPairIsReportedOnce) {
  const Schema s = Schema::all_numeric(3);
  write("schema.json", schema_to_json(s));
  const auto planted = plant_violations(gen_uniform(300, 3, 2, 2), s, Norm::kLinf, 1, 0.05, 3);
  std::ostringstream csv;
  write_points(csv, StreamFormat::kCsv, s, planted.points);
  write("stream.csv", csv.str());
  for (BackendKind backend : {BackendKind::kBruteForce, BackendKind::kBdd}) {
    std::ostringstream reports;
    RunConfig c = config(backend, Norm::kLinf);
    c.full_witnesses = true;
    const RunStats stats = run(c, reports);
    EXPECT_EQ(stats.violations, 1u);
    std::istringstream lines(reports.str());
    std::size_t hits = 0;
    for (std::string line; std::getline(lines, line);) {
      const auto rec = nlohmann::json::parse(line);
      if (rec["count"] == 0) continue;
      ++hits;
      EXPECT_EQ(rec["id"], planted.truth[0].copy);
      EXPECT_EQ(rec["witnesses"][0], planted.truth[0].original);
      EXPECT_EQ(rec["decisions"][0]["id"], planted.truth[0].original);
    }
    EXPECT_EQ(hits, 1u);
  }
}

TEST_F(RunTest, DeterministicOutputFile) {
  const Schema s = Schema::all_numeric(2);
  write("schema.json", schema_to_json(s));
  std::ostringstream csv;
  write_points(csv, StreamFormat::kCsv, s, gen_uniform(200, 2, 2, 5));
  write("stream.csv", csv.str());
  RunConfig c = config(BackendKind::kSnn, Norm::kL2);
  std::ostringstream unused;
  c.output_path = dir_ / "a.jsonl";
  run(c, unused);
  c.output_path = dir_ / "b.jsonl";
  run(c, unused);
  EXPECT_EQ(read("a.jsonl"), read("b.jsonl"));
  EXPECT_FALSE(read("a.jsonl").empty());
}

TEST_F(RunTest, InvalidComboFailsBeforeReadingInput) {
  RunConfig c = config(BackendKind::kSnn, Norm::kLinf);
  c.schema_path = dir_ / "missing.json";
  c.input_path = dir_ / "missing.csv";
  std::ostringstream reports;
  EXPECT_THROW(run(c, reports), ConfigError);
}

TEST_F(RunTest, BddNeedsBounds) {
  write("schema.json", R"({"columns":[{"name":"x"}]})");
  write("stream.csv", "x,label\n0.5,A\n");
  std::ostringstream reports;
  EXPECT_THROW(run(config(BackendKind::kBdd, Norm::kLinf), reports), ConfigError);
}

TEST_F(RunTest, CliExitCodes) {
  const std::string bin = MONITOR_BINARY;
  const std::string d = dir_.string();
  auto sh = [](const std::string& cmd) {
    const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
  };
  ASSERT_EQ(sh(bin + " gen plant --n 400 --d 4 --count 2 --epsilon 0.05 --seed 1 --out " + d +
               "/s.csv --schema-out " + d + "/s.json --truth " + d + "/t.json"),
            0);
  EXPECT_EQ(sh(bin + " run --backend kdtree --epsilon 0.05 --schema " + d + "/s.json --input " + d +
               "/s.csv --out " + d + "/r.jsonl --stats " + d + "/st.json"),
            0);
  const auto stats = nlohmann::json::parse(read("st.json"));
  EXPECT_EQ(stats["violations"], 2);
  EXPECT_EQ(sh(bin + " run --backend snn --norm linf --schema nope --input nope"), 2);
  EXPECT_EQ(sh(bin + " run --backend bruteforce --schema " + d + "/s.json --input " + d + "/t.json"), 3);
  EXPECT_EQ(sh(bin + " bench --n 50 --d 2 --sweep bruteforce,bdd --out " + d + "/b.csv"), 0);
  EXPECT_NE(read("b.csv").find("config,step,latency_ns,rolling_ns,comparisons"), std::string::npos);
}

}  // namespace
}  // namespace iormon
