#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cbpre/bench/bench.hpp"
#include "cbpre/pre/production.hpp"
#include "cbpre/sim/scenario.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace cbpre;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitStalled = 3;
constexpr int kExitMismatch = 4;

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return json::parse(in);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string id_hex(std::uint32_t id) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", id);
  return buf;
}

std::uint32_t parse_id(const std::string& s) {
  std::size_t pos = 0;
  auto v = std::stoull(s, &pos, 0);
  if (pos != s.size() || v > 0xffffffffULL) throw std::invalid_argument("bad identity: " + s);
  return static_cast<std::uint32_t>(v);
}

struct Ca {
  pre::ProdParams pp;
  pre::ProdMasterSecret msk;
};

Ca load_ca(const pre::ProdGroup& g, const fs::path& path) {
  auto j = read_json(path);
  auto pp = pre::deserialize_params(g, from_hex(j.at("params").get<std::string>()));
  Ca ca{pp, {}};
  if (j.contains("alpha")) ca.msk.alpha = g.decode_scalar(from_hex(j["alpha"].get<std::string>()));
  return ca;
}

pre::ProdKeyPair load_key(const pre::ProdGroup& g, const fs::path& path) {
  auto j = read_json(path);
  return pre::ProdKeyPair{g.decode_scalar(from_hex(j.at("d").get<std::string>())),
                          pre::deserialize_public_key(g, from_hex(j.at("P_pub").get<std::string>())),
                          pre::deserialize_certificate(g, from_hex(j.at("cert").get<std::string>())),
                          pre::Identity{parse_id(j.at("id").get<std::string>())}};
}

int cmd_keygen(const std::string& id_text, const fs::path& out, std::uint64_t seed) {
  pre::ProdGroup g;
  group::Rng rng(seed);
  fs::create_directories(out);
  auto ca_path = out / "ca.json";
  Ca ca = [&] {
    if (fs::exists(ca_path)) return load_ca(g, ca_path);
    auto [pp, msk] = pre::setup(g, rng);
    json j;
    j["params"] = to_hex(pre::serialize(pp));
    j["alpha"] = to_hex(g.encode(msk.alpha));
    write_text(ca_path, j.dump(2) + "\n");
    return Ca{pp, msk};
  }();
  auto id = parse_id(id_text);
  auto kp = pre::certified_keygen(ca.pp, ca.msk, pre::Identity{id}, rng);
  json j;
  j["id"] = "0x" + id_hex(id);
  j["d"] = to_hex(g.encode(kp.d));
  j["P_pub"] = to_hex(g.encode(kp.P_pub));
  j["cert"] = to_hex(pre::serialize(g, kp.cert));
  auto key_path = out / ("key-" + id_hex(id) + ".json");
  write_text(key_path, j.dump(2) + "\n");
  std::cout << "key " << key_path.string() << "\npublic " << j["P_pub"].get<std::string>() << "\n";
  if (!pre::validate_key(ca.pp, kp)) {
    std::cout << "invalid\n";
    return kExitInvalid;
  }
  std::cout << "valid\n";
  return 0;
}

int cmd_validate(const fs::path& ca_path, const fs::path& key_path) {
  pre::ProdGroup g;
  bool ok = false;
  try {
    ok = pre::validate_key(load_ca(g, ca_path).pp, load_key(g, key_path));
  } catch (const DecodeError& e) {
    std::cerr << "malformed key material: " << e.what() << "\n";
  }
  std::cout << (ok ? "valid" : "invalid") << "\n";
  return ok ? 0 : kExitInvalid;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, const fs::path& out,
            std::optional<double> realtime) {
  sim::ScenarioConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read " + config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = sim::ScenarioConfig::from_json(ss.str());
  }
  if (seed) cfg.seed = *seed;
  if (realtime) cfg.realtime_scale = *realtime;
  cfg.validate();
  fs::create_directories(out);

  sim::Scenario scenario(cfg);
  sim::ScenarioResult res;
  try {
    res = scenario.run();
  } catch (const sim::ScenarioStalled& e) {
    std::cerr << "stalled: " << e.what() << "\n";
    return kExitStalled;
  }
  {
    std::ofstream f(out / "trace.jsonl", std::ios::binary);
    res.write_trace_jsonl(f);
  }
  {
    std::ofstream f(out / "events.jsonl", std::ios::binary);
    scenario.chain().export_events_jsonl(f);
  }
  std::vector<bench::MetricsRow> rows;
  const char* name = cfg.pre_enabled ? "pre" : "baseline";
  for (const auto& l : res.latencies) rows.push_back(bench::to_row(name, cfg.n_requesters, std::to_string(l.request_id), l));
  {
    std::ofstream f(out / "metrics.csv", std::ios::binary);
    bench::write_csv(f, rows);
  }
  std::printf("requests %zu delivered %zu mismatches %zu\n", res.latencies.size(), res.delivered_items, res.mismatches);
  for (const auto& l : res.latencies) std::printf("request %llu latency %.3f s\n", static_cast<unsigned long long>(l.request_id), l.latency());
  return res.mismatches ? kExitMismatch : 0;
}

void write_rows(const fs::path& path, const std::vector<bench::MetricsRow>& rows) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  bench::write_csv(f, rows);
}

int cmd_bench_impact(unsigned reps, std::uint64_t seed, const fs::path& out) {
  sim::ScenarioConfig cfg;
  cfg.seed = seed;
  auto r = bench::bench_impact(reps, cfg);
  write_rows(out, r.rows);
  std::printf("pre_mean %.3f s\nbaseline_mean %.3f s\noverhead %.1f%%\n", r.pre_mean, r.baseline_mean,
              100 * r.overhead_ratio);
  return 0;
}

int cmd_bench_scale(unsigned reps, std::uint64_t seed, const fs::path& out) {
  sim::ScenarioConfig cfg;
  cfg.seed = seed;
  auto r = bench::bench_scale(reps, bench::scale_sweep(), cfg);
  write_rows(out, r.rows);
  for (const auto& p : r.points) std::printf("n %2u mean %.3f s\n", p.n, p.mean_latency);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certificate-based proxy re-encryption over a simulated ledger"};
  app.require_subcommand(1);

  std::string id;
  fs::path out_dir = ".";
  std::uint64_t seed = 1;
  auto* keygen = app.add_subcommand("keygen", "Issue a certified key pair");
  keygen->add_option("--id", id, "Identity, decimal or 0x-prefixed hex")->required();
  keygen->add_option("--out", out_dir, "Directory for ca.json and the key file");
  keygen->add_option("--seed", seed, "RNG seed");

  fs::path ca_path, key_path;
  auto* validate = app.add_subcommand("validate", "Check a key file against the CA parameters");
  validate->add_option("--ca", ca_path)->required();
  validate->add_option("--key", key_path)->required();

  std::string config_path;
  std::optional<std::uint64_t> run_seed;
  std::optional<double> realtime;
  fs::path run_out = "run";
  auto* run = app.add_subcommand("run", "Run the full protocol scenario");
  run->add_option("--config", config_path, "Scenario JSON");
  run->add_option("--seed", run_seed);
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--realtime", realtime, "Wall seconds per simulated second");

  unsigned reps = 30;
  fs::path impact_out = "impact.csv";
  auto* impact = app.add_subcommand("bench-impact", "Latency with and without re-encryption");
  impact->add_option("--reps", reps);
  impact->add_option("--seed", seed);
  impact->add_option("--out", impact_out);

  unsigned scale_reps = 10;
  fs::path scale_out = "scale.csv";
  auto* scale = app.add_subcommand("bench-scale", "Latency against concurrent requests");
  scale->add_option("--reps", scale_reps);
  scale->add_option("--seed", seed);
  scale->add_option("--out", scale_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen) return cmd_keygen(id, out_dir, seed);
    if (*validate) return cmd_validate(ca_path, key_path);
    if (*run) return cmd_run(config_path, run_seed, run_out, realtime);
    if (*impact) return cmd_bench_impact(reps, seed, impact_out);
    if (*scale) return cmd_bench_scale(scale_reps, seed, scale_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
