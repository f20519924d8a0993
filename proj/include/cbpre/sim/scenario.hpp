#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbpre/ledger/ledger.hpp"
#include "cbpre/pre/production.hpp"
#include "cbpre/storage/proxy.hpp"

namespace cbpre::sim {

/// Sensor readings carry T0 = kEpoch + floor(simulated seconds).
inline constexpr std::uint32_t kEpoch = 1'500'000'000;
/// Requester identities live above this bound; sensor ids come from the registry.
inline constexpr std::uint32_t kRequesterIdBase = 0x80000000;

struct ScenarioConfig {
  std::uint32_t n_sensors = 1;
  std::uint32_t n_requesters = 1;
  std::uint32_t readings_per_sensor = 10;
  double reading_interval_s = 60.0;
  double block_interval_s = 13.0;
  std::size_t block_capacity = 10;
  ledger::Amount price = 40;
  std::uint64_t seed = 1;
  bool pre_enabled = true;  // false: baseline that shares C_A and hands pads over off-chain

  // Timing model, simulated seconds.
  double poll_interval_s = 2.0;    // actors read new ledger events this often
  // Owner and requester cost is counted in scalar multiplications per record:
  // rekey 3, delegator pad 1, decrypt2 3, baseline decryption 0.
  double scalar_mult_cost_s = 0.1;
  double reencrypt_cost_s = 0.01;  // proxy, per record
  double upload_latency_s = 0.5;   // proxy to temporary location, owner to requester
  double fetch_latency_s = 0.5;
  double request_spread_s = 1.0;   // requests start uniformly within this window

  ledger::Amount requester_funds = 400;
  std::optional<std::uint64_t> chain_seed;  // block-time stream; defaults to seed
  bool tamper_at_proxy = false;             // flip one ciphertext byte before re-encryption
  double realtime_scale = 0;                // 0: run as fast as possible
  std::filesystem::path store_dir;          // empty: in-memory record store

  double timeout_s() const { return 100.0 * block_interval_s; }
  /// Throws std::invalid_argument.
  void validate() const;

  /// JSON object with any subset of the field names above.
  static ScenarioConfig from_json(const std::string& text);
  std::string to_json() const;
};

struct TraceEvent {
  double t = 0;
  std::string actor;
  int step = 0;  // 1..9, the protocol step this event belongs to
  std::string label;
  ledger::ContractId request = 0;
  std::string detail;
};

struct LatencyRecord {
  ledger::ContractId request_id = 0;
  std::uint32_t requester = 0;
  std::size_t items = 0;
  double t_request = 0;
  double t_request_mined = 0;
  double t_rekey_mined = 0;  // equals t_request_mined without re-encryption
  double t_addr_submitted = 0;
  double t_data_ready = 0;
  double t_decrypted = 0;

  double latency() const { return t_decrypted - t_request; }
};

struct Capability {
  std::string actor;
  std::vector<pre::Identity> private_keys;
  bool master_secret = false;
};

struct ScenarioResult {
  std::vector<TraceEvent> trace;
  std::vector<LatencyRecord> latencies;  // verified requests, by contract id
  std::size_t delivered_items = 0;
  std::size_t mismatches = 0;
  std::vector<double> block_times;
  double t_requests_start = 0;
  std::vector<Capability> capabilities;

  void write_trace_jsonl(std::ostream& out) const;
};

class ScenarioStalled : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateTimestamp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sensor after key provisioning. Encrypts each reading with a fresh
/// content key: the key goes through the PRE scheme, the payload through the DEM.
class SensorActor {
 public:
  SensorActor(const pre::ProdParams& pp, pre::ProdKeyPair kp);

  /// Throws DuplicateTimestamp if `t0` was used before.
  std::uint64_t publish(storage::RecordStore& store, const pre::MessageBlock& content_key, ByteView payload,
                        std::uint32_t t0, double now);

  const pre::ProdKeyPair& key() const { return kp_; }
  const std::vector<std::uint32_t>& timestamps() const { return t0s_; }

 private:
  const pre::ProdParams* pp_;
  pre::ProdKeyPair kp_;
  std::vector<std::uint32_t> t0s_;
};

/// Owner-side read of a stored record: decrypt1 on the key block, then the DEM.
Bytes owner_open(const pre::ProdParams& pp, const pre::ProdKeyPair& kp, const storage::DataRecord& record);

/// Owner, sensors, proxy and requesters wired to one ledger and one store.
class Scenario {
 public:
  explicit Scenario(ScenarioConfig config);
  ~Scenario();
  Scenario(const Scenario&) = delete;
  Scenario& operator=(const Scenario&) = delete;

  /// Runs the nine-step flow for every requester. Throws ScenarioStalled.
  ScenarioResult run();

  const ScenarioConfig& config() const;
  const pre::ProdParams& params() const;
  const ledger::Ledger& chain() const;
  const storage::ProxyNode& proxy() const;
  std::vector<pre::ProdKeyPair> sensor_keys() const;
  std::vector<pre::ProdKeyPair> requester_keys() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

inline ScenarioResult run_scenario(const ScenarioConfig& config) { return Scenario(config).run(); }

}  // namespace cbpre::sim
