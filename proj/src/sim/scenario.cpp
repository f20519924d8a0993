#include "cbpre/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

#include "cbpre/pre/dem.hpp"
#include "cbpre/sim/scheduler.hpp"

namespace cbpre::sim {

using ledger::Address;
using ledger::ContractId;
using ledger::EventKind;
using ledger::TxKind;
using nlohmann::json;
using nlohmann::ordered_json;

void ScenarioConfig::validate() const {
  if (n_sensors < 1 || n_requesters < 1 || readings_per_sensor < 1) {
    throw std::invalid_argument("n_sensors, n_requesters and readings_per_sensor must be at least 1");
  }
  if (!(reading_interval_s >= 1.0)) throw std::invalid_argument("reading_interval_s must be at least 1");
  if (!(block_interval_s > 0)) throw std::invalid_argument("block_interval_s must be positive");
  if (!(poll_interval_s > 0)) throw std::invalid_argument("poll_interval_s must be positive");
  for (double v : {scalar_mult_cost_s, reencrypt_cost_s, upload_latency_s, fetch_latency_s,
                   request_spread_s, realtime_scale}) {
    if (!(v >= 0)) throw std::invalid_argument("timing parameters must be non-negative");
  }
}

ScenarioConfig ScenarioConfig::from_json(const std::string& text) {
  auto j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  ScenarioConfig c;
  for (const auto& [k, v] : j.items()) {
    if (k == "n_sensors") c.n_sensors = v.get<std::uint32_t>();
    else if (k == "n_requesters") c.n_requesters = v.get<std::uint32_t>();
    else if (k == "readings_per_sensor") c.readings_per_sensor = v.get<std::uint32_t>();
    else if (k == "reading_interval_s") c.reading_interval_s = v.get<double>();
    else if (k == "block_interval_s") c.block_interval_s = v.get<double>();
    else if (k == "block_capacity") c.block_capacity = v.get<std::size_t>();
    else if (k == "price") c.price = v.get<ledger::Amount>();
    else if (k == "seed") c.seed = v.get<std::uint64_t>();
    else if (k == "pre_enabled") c.pre_enabled = v.get<bool>();
    else if (k == "poll_interval_s") c.poll_interval_s = v.get<double>();
    else if (k == "scalar_mult_cost_s") c.scalar_mult_cost_s = v.get<double>();
    else if (k == "reencrypt_cost_s") c.reencrypt_cost_s = v.get<double>();
    else if (k == "upload_latency_s") c.upload_latency_s = v.get<double>();
    else if (k == "fetch_latency_s") c.fetch_latency_s = v.get<double>();
    else if (k == "request_spread_s") c.request_spread_s = v.get<double>();
    else if (k == "requester_funds") c.requester_funds = v.get<ledger::Amount>();
    else if (k == "chain_seed") c.chain_seed = v.is_null() ? std::nullopt : std::optional(v.get<std::uint64_t>());
    else if (k == "tamper_at_proxy") c.tamper_at_proxy = v.get<bool>();
    else if (k == "realtime_scale") c.realtime_scale = v.get<double>();
    else if (k == "store_dir") c.store_dir = v.get<std::string>();
    else throw std::invalid_argument("unknown config key: " + k);
  }
  c.validate();
  return c;
}

std::string ScenarioConfig::to_json() const {
  ordered_json j;
  j["n_sensors"] = n_sensors;
  j["n_requesters"] = n_requesters;
  j["readings_per_sensor"] = readings_per_sensor;
  j["reading_interval_s"] = reading_interval_s;
  j["block_interval_s"] = block_interval_s;
  j["block_capacity"] = block_capacity;
  j["price"] = price;
  j["seed"] = seed;
  j["pre_enabled"] = pre_enabled;
  j["poll_interval_s"] = poll_interval_s;
  j["scalar_mult_cost_s"] = scalar_mult_cost_s;
  j["reencrypt_cost_s"] = reencrypt_cost_s;
  j["upload_latency_s"] = upload_latency_s;
  j["fetch_latency_s"] = fetch_latency_s;
  j["request_spread_s"] = request_spread_s;
  j["requester_funds"] = requester_funds;
  j["chain_seed"] = chain_seed ? json(*chain_seed) : json(nullptr);
  j["tamper_at_proxy"] = tamper_at_proxy;
  j["realtime_scale"] = realtime_scale;
  j["store_dir"] = store_dir.string();
  return j.dump(2);
}

void ScenarioResult::write_trace_jsonl(std::ostream& out) const {
  for (const auto& e : trace) {
    ordered_json j;
    j["t"] = e.t;
    j["actor"] = e.actor;
    j["step"] = e.step;
    j["label"] = e.label;
    if (e.request != 0) j["request"] = e.request;
    j["detail"] = e.detail;
    out << j.dump() << '\n';
  }
}

SensorActor::SensorActor(const pre::ProdParams& pp, pre::ProdKeyPair kp) : pp_(&pp), kp_(std::move(kp)) {}

std::uint64_t SensorActor::publish(storage::RecordStore& store, const pre::MessageBlock& content_key,
                                   ByteView payload, std::uint32_t t0, double now) {
  if (std::find(t0s_.begin(), t0s_.end(), t0) != t0s_.end()) {
    throw DuplicateTimestamp("timestamp " + std::to_string(t0) + " already used by this sensor");
  }
  auto c = pre::encrypt(*pp_, content_key, kp_, t0);
  auto sealed = pre::dem_seal(content_key.bytes, c.meta, payload);
  auto id = store.put_record(kp_.id, pre::serialize(pp_->group, c), std::move(sealed), now);
  t0s_.push_back(t0);
  return id;
}

Bytes owner_open(const pre::ProdParams& pp, const pre::ProdKeyPair& kp, const storage::DataRecord& record) {
  auto c = pre::deserialize_ciphertext(pp.group, record.ciphertext);
  auto m = pre::decrypt1(pp, c, kp);
  return pre::dem_open(m.bytes, c.meta, record.payload_ct.value_or(Bytes{}));
}

namespace {

std::string id_hex(pre::Identity id) { return to_hex(id.bytes()); }

ledger::LedgerConfig ledger_config(const ScenarioConfig& c) {
  ledger::LedgerConfig l;
  l.block_interval_s = c.block_interval_s;
  l.block_capacity = c.block_capacity;
  l.seed = c.chain_seed.value_or(c.seed);
  l.contract_ttl_s = c.timeout_s();
  return l;
}

}  // namespace

struct Scenario::Impl {
  struct SensorSlot {
    pre::ProdGroup::Scalar r_U;
    pre::ProdGroup::Scalar r_t;  // kept by the CA until the registry assigns an id
    std::optional<pre::CertRequest<pre::ProdGroup>> request;
    Bytes cert;
    std::optional<SensorActor> actor;
    std::uint32_t published = 0;
  };

  struct OwnerState {
    Address addr = Address::from_label("owner");
    std::size_t cursor = 0;
    double busy_until = 0;
  };

  // Holds no key material by construction.
  struct ProxyState {
    Address addr = Address::from_label("proxy");
    std::size_t cursor = 0;
    double busy_until = 0;
    bool tampered = false;
  };

  struct RequesterState {
    std::uint32_t index = 0;
    std::string name;
    Address addr;
    pre::Identity id;
    std::optional<pre::ProdKeyPair> kp;
    std::size_t cursor = 0;
    double busy_until = 0;
    ledger::TxId request_tx = 0;
    ContractId contract = 0;
    std::optional<std::string> share_id;
    std::optional<std::map<pre::Metadata, Block32>> pads;
    bool processing = false;
    bool confirmed = false;
    bool resolved = false;
    LatencyRecord lat;
  };

  explicit Impl(ScenarioConfig c)
      : cfg((c.validate(), std::move(c))),
        rng(cfg.seed),
        ca(pre::setup(g, rng)),
        chain(ledger_config(cfg)),
        proxy_node(cfg.store_dir, cfg.seed ^ 0x9e3779b97f4a7c15ULL) {
    sched.set_realtime(cfg.realtime_scale);
  }

  const pre::ProdParams& pp() const { return ca.first; }

  void log(double t, std::string actor, int step, std::string label, ContractId req = 0, std::string detail = {}) {
    result.trace.push_back(TraceEvent{t, std::move(actor), step, std::move(label), req, std::move(detail)});
  }

  ledger::TxId submit(const Address& from, TxKind kind, Bytes payload) {
    return chain.submit_tx(ledger::Tx{from, chain.next_nonce(from), kind, std::move(payload), sched.now()});
  }

  double block_time(std::uint64_t height) const { return chain.blocks().at(height - 1).timestamp; }

  void enqueue(double& busy_until, double cost, std::function<void()> fn) {
    busy_until = std::max(sched.now(), busy_until) + cost;
    sched.at(busy_until, [this, fn = std::move(fn)] {
      if (!done) fn();
    });
  }

  void poll_loop(double t, std::function<void()> fn) {
    sched.at(t, [this, t, fn = std::move(fn)]() mutable {
      if (done) return;
      fn();
      poll_loop(t + cfg.poll_interval_s, std::move(fn));
    });
  }

  void schedule_block() {
    sched.at(chain.next_block_time(), [this] {
      if (done) return;
      if (sched.now() > deadline) {
        throw ScenarioStalled(std::to_string(resolved) + " of " + std::to_string(requesters.size()) +
                              " requests resolved by t=" + std::to_string(sched.now()));
      }
      result.block_times.push_back(chain.mine_next_block().timestamp);
      schedule_block();
    });
  }

  double uniform(double hi) { return std::uniform_real_distribution<double>(0.0, hi)(rng); }

  SensorSlot* slot_for(pre::Identity id) {
    for (auto& s : sensors) {
      if (s.actor && s.actor->key().id == id) return &s;
    }
    return nullptr;
  }

  std::vector<pre::Metadata> metas_in_range(const SensorSlot& s, std::uint32_t from, std::uint32_t to) const {
    std::vector<pre::Metadata> out;
    for (auto t0 : s.actor->timestamps()) {
      if (t0 >= from && t0 <= to) out.push_back(pre::Metadata{s.actor->key().id, t0});
    }
    return out;
  }

  // Step 1: owner registers every sensor; the CA commits to r_t before the id exists.
  void register_sensors() {
    for (std::uint32_t i = 0; i < cfg.n_sensors; ++i) {
      SensorSlot s;
      auto [r_U, req] = pre::cert_request(pp(), pre::Identity{0}, rng);
      s.r_U = r_U;
      s.r_t = g.random_scalar(rng);
      s.request = req;
      s.cert = pre::serialize(g, pre::ca_issue_with(pp(), ca.second, req, s.r_t).cert);
      ledger::MacAddress mac{0x02, 0x00, 0x00, static_cast<std::uint8_t>(i >> 16), static_cast<std::uint8_t>(i >> 8),
                             static_cast<std::uint8_t>(i)};
      submit(owner.addr, TxKind::RegisterSensor,
             ledger::RegisterSensorPayload{s.cert, cfg.price, "sensor " + std::to_string(i), mac}.encode());
      log(sched.now(), "owner", 1, "register_sensor", 0, "mac index " + std::to_string(i));
      sensors.push_back(std::move(s));
    }
  }

  // Step 2: CA finishes issuance against the registry entry, sensor validates its key.
  void provision(pre::Identity id, double mined_at) {
    const auto* entry = chain.registry().find(id);
    for (auto& s : sensors) {
      if (s.actor || entry == nullptr || entry->cert != s.cert || entry->owner != owner.addr) continue;
      s.request->id = id;
      auto resp = pre::ca_issue_with(pp(), ca.second, *s.request, s.r_t);
      s.actor.emplace(pp(), pre::finalize_key(pp(), s.r_U, resp, id));
      log(mined_at, "owner", 1, "sensor_registered", 0, "sensor " + id_hex(id));
      log(sched.now(), "ca", 2, "key_provisioned", 0, "sensor " + id_hex(id));
      for (std::uint32_t j = 0; j < cfg.readings_per_sensor; ++j) {
        sched.after(j * cfg.reading_interval_s, [this, &s] { publish(s); });
      }
      return;
    }
  }

  void publish(SensorSlot& s) {
    auto t0 = kEpoch + static_cast<std::uint32_t>(std::floor(sched.now()));
    pre::MessageBlock key;
    for (std::size_t i = 0; i < 4; ++i) {
      auto w = rng();
      for (std::size_t b = 0; b < 8; ++b) key.bytes[8 * i + b] = static_cast<std::uint8_t>(w >> (56 - 8 * b));
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.1fC", 15.0 + static_cast<double>(rng() % 150) / 10.0);
    Bytes payload(buf, buf + std::char_traits<char>::length(buf));
    auto rid = s.actor->publish(proxy_node.store(), key, payload, t0, sched.now());
    truth[{s.actor->key().id.value, t0}] = {key.bytes, payload};
    log(sched.now(), "sensor-" + id_hex(s.actor->key().id), 2, "publish", 0,
        "record " + std::to_string(rid) + " T0 " + std::to_string(t0));
    if (++s.published == cfg.readings_per_sensor && ++sensors_done == sensors.size()) start_requests();
  }

  void start_requests() {
    result.t_requests_start = sched.now();
    deadline = sched.now() + cfg.timeout_s();
    for (auto& r : requesters) {
      sched.after(uniform(cfg.request_spread_s), [this, &r] { request(r); });
    }
  }

  // Step 3: requester creates its key lazily and opens a request contract.
  void request(RequesterState& r) {
    if (!r.kp) {
      r.kp = pre::certified_keygen(pp(), ca.second, r.id, rng);
      log(sched.now(), r.name, 3, "keygen", 0, "id " + id_hex(r.id));
    }
    if (chain.balance(r.addr) < cfg.price) throw ledger::LedgerError(ledger::LedgerErrc::InsufficientDeposit);
    const auto& s = sensors[r.index % sensors.size()];
    const auto& ts = s.actor->timestamps();
    ledger::RequestDataPayload p{r.id,
                                 pre::serialize(g, r.kp->cert),
                                 s.actor->key().id,
                                 *std::min_element(ts.begin(), ts.end()),
                                 *std::max_element(ts.begin(), ts.end()),
                                 cfg.price,
                                 cfg.pre_enabled ? ledger::Delegation::ProxyReEncryption : ledger::Delegation::Direct};
    r.request_tx = submit(r.addr, TxKind::RequestData, p.encode());
    r.lat.requester = r.index;
    r.lat.t_request = sched.now();
    log(sched.now(), r.name, 3, "request", 0, "sensor " + id_hex(s.actor->key().id));
  }

  void owner_poll() {
    for (const auto& ev : chain.events_since(owner.cursor)) {
      if (ev.kind == EventKind::SensorRegistered && ev.account == owner.addr) {
        provision(ev.sensor, block_time(ev.block));
      } else if (ev.kind == EventKind::RequestCreated) {
        auto* s = slot_for(ev.sensor);
        if (s == nullptr) continue;
        const auto* req = chain.request(ev.contract);
        log(sched.now(), "owner", 5, "request_observed", ev.contract);
        auto k = metas_in_range(*s, req->t_from(), req->t_to()).size();
        double mults = req->delegation() == ledger::Delegation::ProxyReEncryption ? 3 : 1;
        enqueue(owner.busy_until, cfg.scalar_mult_cost_s * mults * static_cast<double>(k),
                [this, cid = ev.contract] { owner_serve(cid); });
      }
    }
    owner.cursor = chain.event_count();
  }

  // Step 6: one re-encryption key per record in range, in one transaction.
  void owner_serve(ContractId cid) {
    const auto* req = chain.request(cid);
    const auto& kp = slot_for(req->sensor_id())->actor->key();
    auto metas = metas_in_range(*slot_for(req->sensor_id()), req->t_from(), req->t_to());
    if (req->delegation() == ledger::Delegation::ProxyReEncryption) {
      auto cert_B = pre::deserialize_certificate(g, req->requester_cert());
      ledger::PostReKeyPayload p{cid, {}};
      for (const auto& m : metas) p.entries.push_back({m, pre::rekey(pp(), kp, req->requester_id(), cert_B, m)});
      submit(owner.addr, TxKind::PostReKey, p.encode());
      log(sched.now(), "owner", 6, "post_rekey", cid, std::to_string(metas.size()) + " keys");
      return;
    }
    std::map<pre::Metadata, Block32> pads;
    for (const auto& m : metas) pads[m] = pre::delegator_pad(pp(), kp, m);
    auto& r = requesters.at(by_addr.at(req->requester()));
    sched.after(cfg.upload_latency_s, [this, &r, cid, pads = std::move(pads)]() mutable {
      r.pads = std::move(pads);
      log(sched.now(), "owner", 6, "pads_offchain", cid, std::to_string(r.pads->size()) + " pads");
      maybe_start(r);
    });
  }

  void proxy_poll() {
    for (const auto& ev : chain.events_since(proxy.cursor)) {
      if (ev.kind != EventKind::RequestCreated && ev.kind != EventKind::ReKeyPosted) continue;
      const auto* req = chain.request(ev.contract);
      if (ev.kind == EventKind::RequestCreated) {
        log(sched.now(), "proxy", 5, "request_observed", ev.contract);
        if (req->delegation() != ledger::Delegation::Direct) continue;
      }
      auto k = proxy_node.store().query_records(req->sensor_id(), req->t_from(), req->t_to()).size();
      enqueue(proxy.busy_until, cfg.reencrypt_cost_s * static_cast<double>(k) + cfg.upload_latency_s,
              [this, cid = ev.contract] { proxy_serve(cid); });
    }
    proxy.cursor = chain.event_count();
  }

  // Steps 7 and 8: re-encrypt into a temporary share and publish its address.
  void proxy_serve(ContractId cid) {
    const auto* req = chain.request(cid);
    auto records = proxy_node.store().query_records(req->sensor_id(), req->t_from(), req->t_to());
    if (cfg.tamper_at_proxy && !proxy.tampered && !records.empty()) {
      records.front().ciphertext[1] ^= 0x01;
      proxy.tampered = true;
    }
    const storage::TempShare* share = nullptr;
    if (req->delegation() == ledger::Delegation::Direct) {
      share = &proxy_node.apply_rekey(records, pre::ReEncKey{}, req->requester_id(), sched.now());
    } else {
      std::map<pre::Metadata, pre::ReEncKey> rks;
      for (const auto& e : req->rekeys()) rks[e.meta] = e.rk;
      share = &proxy_node.apply_rekey(records, rks, req->requester_id(), sched.now());
    }
    log(sched.now(), "proxy", 7, req->delegation() == ledger::Delegation::Direct ? "copy" : "reencrypt", cid,
        std::to_string(share->items.size()) + " items");
    submit(proxy.addr, TxKind::PostDataAddr, ledger::PostDataAddrPayload{cid, share->share_id}.encode());
    addr_submitted[cid] = sched.now();
  }

  void requester_poll(RequesterState& r) {
    if (r.resolved) return;
    for (const auto& ev : chain.events_since(r.cursor)) {
      if (r.request_tx != 0 && ev.tx == r.request_tx) {
        if (ev.kind == EventKind::TxFailed) throw ledger::LedgerError(*ev.error);
        r.contract = ev.contract;
        r.lat.request_id = ev.contract;
        r.lat.t_request_mined = block_time(ev.block);
        log(r.lat.t_request_mined, "ledger", 4, "request_created", ev.contract, "requester cert stored");
        continue;
      }
      if (r.contract == 0 || ev.contract != r.contract) continue;
      switch (ev.kind) {
        case EventKind::ReKeyPosted:
          r.lat.t_rekey_mined = block_time(ev.block);
          log(r.lat.t_rekey_mined, "ledger", 6, "rekey_mined", r.contract);
          break;
        case EventKind::DataReady:
          r.lat.t_data_ready = block_time(ev.block);
          if (!cfg.pre_enabled) r.lat.t_rekey_mined = r.lat.t_request_mined;
          r.share_id = ev.share_id;
          log(r.lat.t_data_ready, "ledger", 8, "address_mined", r.contract, ev.share_id);
          maybe_start(r);
          break;
        case EventKind::Settled:
          if (r.confirmed && !r.resolved) {
            r.resolved = true;
            result.latencies.push_back(r.lat);
            log(sched.now(), r.name, 9, "settled", r.contract);
            resolve_one();
          }
          break;
        case EventKind::Cancelled:
          throw ScenarioStalled("request " + std::to_string(r.contract) + " expired before delivery");
        default: break;
      }
    }
    r.cursor = chain.event_count();
  }

  void maybe_start(RequesterState& r) {
    if (r.processing || !r.share_id || (!cfg.pre_enabled && !r.pads)) return;
    r.processing = true;
    const auto* req = chain.request(r.contract);
    auto k = metas_in_range(*slot_for(req->sensor_id()), req->t_from(), req->t_to()).size();
    double mults = cfg.pre_enabled ? 3 : 0;
    enqueue(r.busy_until, cfg.fetch_latency_s + cfg.scalar_mult_cost_s * mults * static_cast<double>(k),
            [this, &r] { requester_finish(r); });
  }

  // Step 9: fetch, decrypt, check against what the sensor produced, confirm.
  void requester_finish(RequesterState& r) {
    const auto* req = chain.request(r.contract);
    const auto& sensor = *slot_for(req->sensor_id());
    auto expected = metas_in_range(sensor, req->t_from(), req->t_to()).size();
    auto P_A = pre::derive_public_key(
        pp(), pre::deserialize_certificate(g, chain.registry().find(req->sensor_id())->cert), req->sensor_id());
    std::size_t good = 0;
    try {
      for (const auto& item : proxy_node.fetch_share(*r.share_id, sched.now())) {
        try {
          pre::MessageBlock m = cfg.pre_enabled ? pre::decrypt2(pp(), item.ct, *r.kp, P_A)
                                                : pre::MessageBlock{item.ct.C_B ^ r.pads->at(item.ct.meta)};
          auto payload = pre::dem_open(m.bytes, item.ct.meta, item.payload_ct.value_or(Bytes{}));
          auto it = truth.find({item.ct.meta.id.value, item.ct.meta.t0});
          if (it != truth.end() && it->second.first == m.bytes && it->second.second == payload) ++good;
        } catch (const pre::AuthError&) {
        } catch (const std::out_of_range&) {
        }
      }
    } catch (const storage::StorageError&) {
    }
    result.delivered_items += good;
    if (good != expected) {
      result.mismatches += expected - std::min(good, expected);
      log(sched.now(), r.name, 9, "verify_failed", r.contract,
          std::to_string(good) + " of " + std::to_string(expected) + " items verified");
      r.resolved = true;
      resolve_one();
      return;
    }
    r.lat.items = good;
    r.lat.t_addr_submitted = addr_submitted.at(r.contract);
    r.lat.t_decrypted = sched.now();
    log(sched.now(), r.name, 9, "decrypted", r.contract, std::to_string(good) + " items verified");
    submit(r.addr, TxKind::Confirm, ledger::ConfirmPayload{r.contract}.encode());
    r.confirmed = true;
  }

  void resolve_one() {
    if (++resolved == requesters.size()) done = true;
  }

  ScenarioResult run() {
    chain.create_account(owner.addr, 1000);
    chain.create_account(proxy.addr, 1000);
    for (std::uint32_t i = 0; i < cfg.n_requesters; ++i) {
      RequesterState r;
      r.index = i;
      r.name = "requester-" + std::to_string(i);
      r.addr = Address::from_label(r.name);
      r.id = pre::Identity{kRequesterIdBase + i};
      chain.create_account(r.addr, cfg.requester_funds);
      by_addr[r.addr] = i;
      requesters.push_back(std::move(r));
    }
    deadline = cfg.timeout_s();
    register_sensors();
    schedule_block();
    poll_loop(uniform(cfg.poll_interval_s), [this] { owner_poll(); });
    poll_loop(uniform(cfg.poll_interval_s), [this] { proxy_poll(); });
    for (auto& r : requesters) poll_loop(uniform(cfg.poll_interval_s), [this, &r] { requester_poll(r); });

    while (!done && sched.step()) {
    }

    std::stable_sort(result.trace.begin(), result.trace.end(),
                     [](const TraceEvent& a, const TraceEvent& b) { return a.t < b.t; });
    std::sort(result.latencies.begin(), result.latencies.end(),
              [](const auto& a, const auto& b) { return a.request_id < b.request_id; });
    result.capabilities.push_back({"ca", {}, true});
    Capability owner_cap{"owner", {}, false};
    for (const auto& s : sensors) {
      if (!s.actor) continue;
      owner_cap.private_keys.push_back(s.actor->key().id);
      result.capabilities.push_back({"sensor-" + id_hex(s.actor->key().id), {s.actor->key().id}, false});
    }
    result.capabilities.push_back(owner_cap);
    result.capabilities.push_back({"proxy", {}, false});
    for (const auto& r : requesters) {
      Capability c{r.name, {}, false};
      if (r.kp) c.private_keys.push_back(r.kp->id);
      result.capabilities.push_back(c);
    }
    return result;
  }

  ScenarioConfig cfg;
  Scheduler sched;
  std::mt19937_64 rng;
  pre::ProdGroup g;
  std::pair<pre::ProdParams, pre::ProdMasterSecret> ca;
  ledger::Ledger chain;
  storage::ProxyNode proxy_node;

  OwnerState owner;
  ProxyState proxy;
  std::vector<SensorSlot> sensors;
  std::vector<RequesterState> requesters;
  std::map<Address, std::size_t> by_addr;

  // Ground truth kept by the harness, not by any actor.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<Block32, Bytes>> truth;
  std::map<ContractId, double> addr_submitted;

  ScenarioResult result;
  std::size_t sensors_done = 0;
  std::size_t resolved = 0;
  double deadline = 0;
  bool done = false;
};

Scenario::Scenario(ScenarioConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
Scenario::~Scenario() = default;

ScenarioResult Scenario::run() { return impl_->run(); }
const ScenarioConfig& Scenario::config() const { return impl_->cfg; }
const pre::ProdParams& Scenario::params() const { return impl_->pp(); }
const ledger::Ledger& Scenario::chain() const { return impl_->chain; }
const storage::ProxyNode& Scenario::proxy() const { return impl_->proxy_node; }

std::vector<pre::ProdKeyPair> Scenario::sensor_keys() const {
  std::vector<pre::ProdKeyPair> out;
  for (const auto& s : impl_->sensors) {
    if (s.actor) out.push_back(s.actor->key());
  }
  return out;
}

std::vector<pre::ProdKeyPair> Scenario::requester_keys() const {
  std::vector<pre::ProdKeyPair> out;
  for (const auto& r : impl_->requesters) {
    if (r.kp) out.push_back(*r.kp);
  }
  return out;
}

}  // namespace cbpre::sim
