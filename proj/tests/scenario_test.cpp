#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "cbpre/sim/scenario.hpp"

using namespace cbpre;
using namespace cbpre::sim;

namespace {

std::string trace_text(const ScenarioResult& r) {
  std::ostringstream out;
  r.write_trace_jsonl(out);
  return out.str();
}

double first_time(const ScenarioResult& r, ledger::ContractId req, int step, const std::string& label) {
  for (const auto& e : r.trace) {
    if (e.request == req && e.step == step && e.label == label) return e.t;
  }
  return NAN;
}

struct MeanSd {
  double mean = 0, sd = 0;
};

MeanSd latency_stats(ScenarioConfig cfg, int runs) {
  std::vector<double> xs;
  for (int s = 1; s <= runs; ++s) {
    cfg.seed = static_cast<std::uint64_t>(s);
    for (const auto& l : run_scenario(cfg).latencies) xs.push_back(l.latency());
  }
  MeanSd m;
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  for (double x : xs) m.sd += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(m.sd / static_cast<double>(xs.size() - 1));
  return m;
}

}  // namespace

TEST(Sensor, PublishRoundTripAndDuplicateGuard) {
  std::mt19937_64 rng(5);
  pre::ProdGroup g;
  auto [pp, msk] = pre::setup(g, rng);
  SensorActor sensor(pp, pre::certified_keygen(pp, msk, pre::Identity{1}, rng));
  storage::RecordStore store({});
  pre::MessageBlock key;
  key.bytes[0] = 0x42;
  std::string reading = "23.5C";
  auto id = sensor.publish(store, key, Bytes(reading.begin(), reading.end()), kEpoch, 0);
  auto records = store.query_records(pre::Identity{1}, kEpoch, kEpoch);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].record_id, id);
  auto opened = owner_open(pp, sensor.key(), records[0]);
  EXPECT_EQ(std::string(opened.begin(), opened.end()), reading);

  EXPECT_THROW(sensor.publish(store, key, Bytes{1}, kEpoch, 1), DuplicateTimestamp);

  std::uint64_t prev = id;
  for (std::uint32_t i = 1; i <= 100; ++i) {
    auto next = sensor.publish(store, key, Bytes{static_cast<std::uint8_t>(i)}, kEpoch + i, i);
    EXPECT_GT(next, prev);
    prev = next;
  }
  EXPECT_EQ(store.size(), 101u);
}

TEST(Scenario, DefaultRunDeliversVerifiedData) {
  ScenarioConfig cfg;
  Scenario sc(cfg);
  auto r = sc.run();
  EXPECT_EQ(r.mismatches, 0u);
  ASSERT_EQ(r.latencies.size(), 1u);
  EXPECT_EQ(r.delivered_items, cfg.readings_per_sensor);
  const auto& l = r.latencies[0];
  EXPECT_EQ(l.items, cfg.readings_per_sensor);
  EXPECT_LE(l.t_request, l.t_request_mined);
  EXPECT_LE(l.t_request_mined, l.t_rekey_mined);
  EXPECT_LE(l.t_rekey_mined, l.t_addr_submitted);
  EXPECT_LE(l.t_addr_submitted, l.t_data_ready);
  EXPECT_LE(l.t_data_ready, l.t_decrypted);
  EXPECT_EQ(sc.chain().request(l.request_id)->state(), ledger::RequestState::Completed);
  EXPECT_EQ(sc.chain().total_escrow(), 0u);
  EXPECT_EQ(sc.chain().balance(ledger::Address::from_label("owner")), 1000u + cfg.price);
  EXPECT_EQ(sc.chain().total_supply(), 2000u + cfg.requester_funds);
}

TEST(Scenario, StepsFollowProtocolOrder) {
  auto r = run_scenario(ScenarioConfig{});
  double first_publish = INFINITY, last_register = -1;
  for (const auto& e : r.trace) {
    if (e.step == 1) last_register = std::max(last_register, e.t);
    if (e.step == 2 && e.label == "publish") first_publish = std::min(first_publish, e.t);
  }
  EXPECT_LT(last_register, first_publish);
  auto id = r.latencies.at(0).request_id;
  double t3 = r.latencies[0].t_request;
  double t6 = first_time(r, id, 6, "post_rekey");
  double t7 = first_time(r, id, 7, "reencrypt");
  double t8 = first_time(r, id, 8, "address_mined");
  double t9 = first_time(r, id, 9, "decrypted");
  EXPECT_LT(t3, t6);
  EXPECT_LT(t6, t7);
  EXPECT_LT(t7, t8);
  EXPECT_LT(t8, t9);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i - 1].t, r.trace[i].t);
}

TEST(Scenario, TwoSensorsGetDistinctValidatedKeys) {
  ScenarioConfig cfg;
  cfg.n_sensors = 2;
  cfg.n_requesters = 2;
  Scenario sc(cfg);
  auto r = sc.run();
  EXPECT_EQ(r.mismatches, 0u);
  EXPECT_EQ(r.latencies.size(), 2u);
  auto keys = sc.sensor_keys();
  ASSERT_EQ(keys.size(), 2u);
  EXPECT_NE(keys[0].id, keys[1].id);
  EXPECT_FALSE(keys[0].P_pub == keys[1].P_pub);
  for (const auto& k : keys) {
    EXPECT_TRUE(pre::validate_key(sc.params(), k));
    EXPECT_LT(k.id.value, kRequesterIdBase);
    auto records = sc.proxy().store().query_records(k.id, 0, UINT32_MAX);
    EXPECT_EQ(records.size(), cfg.readings_per_sensor);
    for (const auto& rec : records) EXPECT_NO_THROW(owner_open(sc.params(), k, rec));
  }
}

TEST(Scenario, RequestContractCarriesCertificateAndKeyBatch) {
  ScenarioConfig cfg;
  Scenario sc(cfg);
  auto r = sc.run();
  auto req_keys = sc.requester_keys();
  ASSERT_EQ(req_keys.size(), 1u);
  const auto* req = sc.chain().request(r.latencies.at(0).request_id);
  EXPECT_EQ(req->requester_cert(), pre::serialize(sc.params().group, req_keys[0].cert));
  EXPECT_EQ(req->requester_id(), req_keys[0].id);
  EXPECT_EQ(req->rekeys().size(), cfg.readings_per_sensor);

  std::size_t rekey_txs = 0;
  for (const auto& b : sc.chain().blocks()) {
    for (const auto& tx : b.txs) rekey_txs += tx.kind == ledger::TxKind::PostReKey;
  }
  EXPECT_EQ(rekey_txs, 1u);

  cfg.readings_per_sensor = 1;
  Scenario one(cfg);
  auto r1 = one.run();
  EXPECT_EQ(one.chain().request(r1.latencies.at(0).request_id)->rekeys().size(), 1u);
  EXPECT_EQ(r1.mismatches, 0u);
}

TEST(Scenario, UnfundedRequesterCannotDeposit) {
  ScenarioConfig cfg;
  cfg.requester_funds = cfg.price - 1;
  try {
    run_scenario(cfg);
    FAIL() << "request went through";
  } catch (const ledger::LedgerError& e) {
    EXPECT_EQ(e.code(), ledger::LedgerErrc::InsufficientDeposit);
  }
}

TEST(Scenario, DeterministicUnderSeed) {
  ScenarioConfig cfg;
  cfg.n_requesters = 3;
  cfg.seed = 17;
  Scenario a(cfg), b(cfg);
  auto ra = a.run(), rb = b.run();
  EXPECT_EQ(trace_text(ra), trace_text(rb));
  EXPECT_EQ(a.chain().chain_bytes(), b.chain().chain_bytes());
  cfg.seed = 18;
  EXPECT_NE(trace_text(ra), trace_text(run_scenario(cfg)));
}

TEST(Scenario, BaselineSkipsRekeyHop) {
  ScenarioConfig cfg;
  cfg.pre_enabled = false;
  Scenario sc(cfg);
  auto r = sc.run();
  EXPECT_EQ(r.mismatches, 0u);
  ASSERT_EQ(r.latencies.size(), 1u);
  EXPECT_EQ(r.latencies[0].t_rekey_mined, r.latencies[0].t_request_mined);
  for (const auto& e : sc.chain().events()) EXPECT_NE(e.kind, ledger::EventKind::ReKeyPosted);
}

// Closed form for one request on an idle chain. Block arrivals are memoryless,
// so every on-chain hop waits one full mean interval; every poll adds half a
// poll period on average.
TEST(Scenario, MeanLatencyMatchesQueueingModel) {
  ScenarioConfig cfg;
  const double B = cfg.block_interval_s, poll = cfg.poll_interval_s, k = cfg.readings_per_sensor;
  const double m = cfg.scalar_mult_cost_s;
  const double proxy = k * cfg.reencrypt_cost_s + cfg.upload_latency_s;
  const double pre_expect = 3 * B + 3 * poll / 2 + 3 * m * k + proxy + cfg.fetch_latency_s + 3 * m * k;
  const double base_expect = 2 * B + 2 * poll / 2 + proxy + cfg.fetch_latency_s;

  const int runs = 300;
  auto pre = latency_stats(cfg, runs);
  cfg.pre_enabled = false;
  auto base = latency_stats(cfg, runs);
  // Three standard errors, plus slack for pads that occasionally arrive after the data address.
  EXPECT_NEAR(pre.mean, pre_expect, 3 * pre.sd / std::sqrt(runs));
  EXPECT_NEAR(base.mean, base_expect, 3 * base.sd / std::sqrt(runs) + 0.5);
  EXPECT_GE(pre.mean, 3 * B);
  EXPECT_LE(pre.mean, 4 * B);
  EXPECT_NEAR(pre.mean - base.mean, B + poll / 2 + 6 * m * k, 3 * (pre.sd + base.sd) / std::sqrt(runs));
}

TEST(Scenario, ZeroCapacityStalls) {
  ScenarioConfig cfg;
  cfg.block_capacity = 0;
  EXPECT_THROW(run_scenario(cfg), ScenarioStalled);
}

TEST(Scenario, TamperedCiphertextIsDetected) {
  for (bool pre_enabled : {true, false}) {
    ScenarioConfig cfg;
    cfg.tamper_at_proxy = true;
    cfg.pre_enabled = pre_enabled;
    auto r = run_scenario(cfg);
    EXPECT_GT(r.mismatches, 0u) << pre_enabled;
    EXPECT_TRUE(r.latencies.empty());
  }
}

TEST(Scenario, CapabilityAudit) {
  ScenarioConfig cfg;
  cfg.n_sensors = 2;
  cfg.n_requesters = 3;
  Scenario sc(cfg);
  auto r = sc.run();
  std::map<std::uint32_t, std::set<std::string>> holders;
  for (const auto& c : r.capabilities) {
    EXPECT_EQ(c.master_secret, c.actor == "ca") << c.actor;
    if (c.actor == "proxy") EXPECT_TRUE(c.private_keys.empty());
    for (auto id : c.private_keys) holders[id.value].insert(c.actor);
  }
  for (const auto& k : sc.sensor_keys()) {
    EXPECT_EQ(holders[k.id.value], (std::set<std::string>{"owner", "sensor-" + to_hex(k.id.bytes())}));
  }
  for (const auto& k : sc.requester_keys()) {
    EXPECT_EQ(holders[k.id.value], (std::set<std::string>{"requester-" + std::to_string(k.id.value - kRequesterIdBase)}));
  }
}

TEST(Config, JsonRoundTrip) {
  ScenarioConfig cfg;
  cfg.n_requesters = 7;
  cfg.pre_enabled = false;
  cfg.chain_seed = 99;
  auto back = ScenarioConfig::from_json(cfg.to_json());
  EXPECT_EQ(back.n_requesters, 7u);
  EXPECT_FALSE(back.pre_enabled);
  EXPECT_EQ(back.chain_seed, std::optional<std::uint64_t>(99));
  EXPECT_EQ(back.to_json(), cfg.to_json());
  EXPECT_THROW(ScenarioConfig::from_json(R"({"bogus": 1})"), std::invalid_argument);
  EXPECT_THROW(ScenarioConfig::from_json(R"({"n_sensors": 0})"), std::invalid_argument);
}
