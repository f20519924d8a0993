#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cbpre/bench/bench.hpp"

using namespace cbpre;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cbpre-cli-" + std::to_string(getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int cli(const std::string& args) const {
    std::string cmd = std::string(CBPRE_CLI) + " " + args + " > " + (dir_ / "stdout.txt").string() + " 2>&1";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, KeygenWritesValidKey) {
  ASSERT_EQ(cli("keygen --id 0x1234 --out " + path("keys")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "keys/ca.json"));
  ASSERT_TRUE(fs::exists(dir_ / "keys/key-00001234.json"));
  EXPECT_NE(slurp(dir_ / "stdout.txt").find("valid"), std::string::npos);
  EXPECT_EQ(cli("validate --ca " + path("keys/ca.json") + " --key " + path("keys/key-00001234.json")), 0);
}

TEST_F(Cli, TwoIdsGetDistinctCertificates) {
  ASSERT_EQ(cli("keygen --id 7 --out " + path("keys")), 0);
  ASSERT_EQ(cli("keygen --id 8 --out " + path("keys")), 0);
  auto a = nlohmann::json::parse(slurp(dir_ / "keys/key-00000007.json"));
  auto b = nlohmann::json::parse(slurp(dir_ / "keys/key-00000008.json"));
  EXPECT_NE(a["cert"], b["cert"]);
  EXPECT_NE(a["P_pub"], b["P_pub"]);
}

TEST_F(Cli, CorruptCertificateFailsValidation) {
  ASSERT_EQ(cli("keygen --id 9 --out " + path("keys")), 0);
  auto key = dir_ / "keys/key-00000009.json";
  auto j = nlohmann::json::parse(slurp(key));

  // A different valid point: decodes, but breaks the validation equation.
  auto swapped = j;
  swapped["cert"] = j["P_pub"];
  std::ofstream(path("swapped.json")) << swapped.dump();
  EXPECT_EQ(cli("validate --ca " + path("keys/ca.json") + " --key " + path("swapped.json")), 2);

  // Garbage bytes that do not decode as a point.
  auto garbled = j;
  auto cert = j["cert"].get<std::string>();
  cert[2] = cert[2] == 'f' ? '0' : 'f';
  cert[3] = cert[3] == 'f' ? '0' : 'f';
  garbled["cert"] = cert;
  std::ofstream(path("garbled.json")) << garbled.dump();
  int rc = cli("validate --ca " + path("keys/ca.json") + " --key " + path("garbled.json"));
  EXPECT_EQ(rc, 2);
}

TEST_F(Cli, RunExitCodes) {
  EXPECT_EQ(cli("run --out " + path("ok")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "ok/trace.jsonl"));
  EXPECT_TRUE(fs::exists(dir_ / "ok/events.jsonl"));
  EXPECT_EQ(slurp(dir_ / "ok/metrics.csv").substr(0, std::string(bench::kCsvHeader).size()), bench::kCsvHeader);

  std::ofstream(path("stall.json")) << R"({"block_capacity": 0})";
  EXPECT_EQ(cli("run --config " + path("stall.json") + " --out " + path("stall")), 3);

  std::ofstream(path("tamper.json")) << R"({"tamper_at_proxy": true})";
  EXPECT_EQ(cli("run --config " + path("tamper.json") + " --out " + path("tamper")), 4);

  std::ofstream(path("bad.json")) << R"({"no_such_field": 1})";
  EXPECT_EQ(cli("run --config " + path("bad.json") + " --out " + path("bad")), 1);
}

TEST_F(Cli, RunIsByteStableUnderSeed) {
  ASSERT_EQ(cli("run --seed 5 --out " + path("a")), 0);
  ASSERT_EQ(cli("run --seed 5 --out " + path("b")), 0);
  ASSERT_EQ(cli("run --seed 6 --out " + path("c")), 0);
  EXPECT_EQ(slurp(dir_ / "a/metrics.csv"), slurp(dir_ / "b/metrics.csv"));
  EXPECT_EQ(slurp(dir_ / "a/trace.jsonl"), slurp(dir_ / "b/trace.jsonl"));
  EXPECT_EQ(slurp(dir_ / "a/events.jsonl"), slurp(dir_ / "b/events.jsonl"));
  EXPECT_NE(slurp(dir_ / "a/metrics.csv"), slurp(dir_ / "c/metrics.csv"));
}

TEST_F(Cli, BenchImpactIsByteStable) {
  ASSERT_EQ(cli("bench-impact --reps 3 --seed 4 --out " + path("a.csv")), 0);
  ASSERT_EQ(cli("bench-impact --reps 3 --seed 4 --out " + path("b.csv")), 0);
  auto a = slurp(dir_ / "a.csv");
  EXPECT_EQ(a, slurp(dir_ / "b.csv"));
  // Header, 3 + 3 per-request rows, 3 summary rows.
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 10);
}

TEST(Csv, Format) {
  sim::LatencyRecord l;
  l.request_id = 3;
  l.t_request = 10;
  l.t_request_mined = 12.5;
  l.t_rekey_mined = 20;
  l.t_addr_submitted = 20.25;
  l.t_data_ready = 33;
  l.t_decrypted = 35.0004;
  std::vector<bench::MetricsRow> rows{bench::to_row("pre", 1, "0.3", l),
                                      bench::MetricsRow{"overhead_ratio", 1, "", 0.6, std::nullopt}};
  std::ostringstream out;
  bench::write_csv(out, rows);
  EXPECT_EQ(out.str(), std::string(bench::kCsvHeader) +
                           "\npre,1,0.3,25.000,2.500,7.500,0.250,12.750,2.000\noverhead_ratio,1,,0.600,,,,,\n");
}

TEST(Bench, PhasesSumToLatency) {
  sim::ScenarioConfig cfg;
  cfg.n_requesters = 4;
  for (bool pre : {true, false}) {
    cfg.pre_enabled = pre;
    auto res = sim::run_scenario(cfg);
    ASSERT_EQ(res.latencies.size(), 4u);
    for (const auto& l : res.latencies) {
      auto p = bench::phases(l);
      double sum = p[0] + p[1] + p[2] + p[3] + p[4];
      EXPECT_NEAR(sum, l.latency(), 1e-9);
      for (double x : p) EXPECT_GE(x, 0);
      if (!pre) EXPECT_EQ(p[1], 0);
    }
  }
}

TEST(Bench, BaselineFasterInEveryBatch) {
  for (std::uint64_t seed : {1u, 101u, 201u}) {
    sim::ScenarioConfig cfg;
    cfg.seed = seed;
    auto r = bench::bench_impact(10, cfg);
    ASSERT_EQ(r.pre.size(), 10u);
    ASSERT_EQ(r.baseline.size(), 10u);
    EXPECT_LT(r.baseline_mean, r.pre_mean) << "seed " << seed;
    EXPECT_EQ(r.rows.size(), 23u);  // 20 requests, 3 summary rows
  }
}

TEST(Bench, SweepEndpoints) {
  auto ns = bench::scale_sweep();
  ASSERT_EQ(ns.size(), 11u);
  EXPECT_EQ(ns.front(), 1u);
  EXPECT_EQ(ns[1], 5u);
  EXPECT_EQ(ns.back(), 50u);
  for (std::size_t i = 2; i < ns.size(); ++i) EXPECT_EQ(ns[i] - ns[i - 1], 5u);
}

// Each request needs three transactions mined in order (request, rekey, data
// address), so the 3n transactions of a run cannot all be included before the
// ceil(3n / capacity)-th block after the first request. The last requester
// decrypts no earlier than that block.
TEST(Bench, LoadRespectsInclusionBound) {
  auto r = bench::bench_scale(10, {1, 50});
  ASSERT_EQ(r.points.size(), 2u);
  for (const auto& p : r.points) {
    ASSERT_EQ(p.last_decrypted.size(), 10u);
    for (std::size_t i = 0; i < p.last_decrypted.size(); ++i) {
      ASSERT_FALSE(std::isnan(p.inclusion_bound[i]));
      EXPECT_GE(p.last_decrypted[i], p.inclusion_bound[i]) << "n " << p.n << " rep " << i;
    }
  }
  EXPECT_GT(r.points[1].mean_latency, r.points[0].mean_latency);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_GT(r.points[1].rep_means[i], r.points[0].rep_means[i]);
}
