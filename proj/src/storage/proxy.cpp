#include "cbpre/storage/proxy.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

namespace cbpre::storage {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(StorageErrc e) {
  switch (e) {
    case StorageErrc::MalformedCiphertext: return "MalformedCiphertext";
    case StorageErrc::IdMismatch: return "IdMismatch";
    case StorageErrc::EmptySelection: return "EmptySelection";
    case StorageErrc::MixedSensors: return "MixedSensors";
    case StorageErrc::MissingReKey: return "MissingReKey";
    case StorageErrc::UnknownShare: return "UnknownShare";
    case StorageErrc::Expired: return "Expired";
  }
  return "Unknown";
}

RecordStore::RecordStore(fs::path dir) : dir_(std::move(dir)) {
  if (dir_.empty()) return;
  fs::create_directories(dir_);
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (entry.path().extension() != ".jsonl") continue;
    std::ifstream in(entry.path());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = json::parse(line);
      DataRecord r;
      r.record_id = j.at("record_id").get<std::uint64_t>();
      r.sensor_id = pre::Identity{get_be32(from_hex(j.at("sensor_id").get<std::string>()))};
      r.ciphertext = from_hex(j.at("ct").get<std::string>());
      if (j.contains("payload_ct")) r.payload_ct = from_hex(j.at("payload_ct").get<std::string>());
      r.stored_at = j.at("stored_at").get<double>();
      next_id_ = std::max(next_id_, r.record_id + 1);
      index_[r.sensor_id].emplace(std::pair{r.meta().t0, r.record_id}, std::move(r));
      ++count_;
    }
  }
}

fs::path RecordStore::file_for(pre::Identity sensor_id) const {
  return dir_ / ("sensor-" + to_hex(sensor_id.bytes()) + ".jsonl");
}

std::uint64_t RecordStore::put_record(pre::Identity sensor_id, ByteView ciphertext, std::optional<Bytes> payload_ct,
                                      SimTime now) {
  pre::ProdCiphertext c;
  try {
    c = pre::deserialize_ciphertext(group_, ciphertext);
  } catch (const DecodeError&) {
    throw StorageError(StorageErrc::MalformedCiphertext);
  }
  if (c.meta.id != sensor_id) throw StorageError(StorageErrc::IdMismatch);

  DataRecord r{next_id_, sensor_id, Bytes(ciphertext.begin(), ciphertext.end()), std::move(payload_ct), now};
  ordered_json j;
  j["record_id"] = r.record_id;
  j["sensor_id"] = to_hex(sensor_id.bytes());
  j["ct"] = to_hex(r.ciphertext);
  if (r.payload_ct) j["payload_ct"] = to_hex(*r.payload_ct);
  j["stored_at"] = r.stored_at;
  if (!dir_.empty()) {
    std::ofstream out(file_for(sensor_id), std::ios::app);
    out << j.dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("record store write failed");
  }
  ++next_id_;
  ++count_;
  auto id = r.record_id;
  index_[sensor_id].emplace(std::pair{c.meta.t0, id}, std::move(r));
  return id;
}

std::vector<DataRecord> RecordStore::query_records(pre::Identity sensor_id, std::uint32_t t_from,
                                                   std::uint32_t t_to) const {
  std::vector<DataRecord> out;
  auto it = index_.find(sensor_id);
  if (it == index_.end() || t_from > t_to) return out;
  auto lo = it->second.lower_bound({t_from, 0});
  auto hi = it->second.upper_bound({t_to, UINT64_MAX});
  for (auto r = lo; r != hi; ++r) out.push_back(r->second);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.record_id < b.record_id; });
  return out;
}

ProxyNode::ProxyNode(fs::path dir, std::uint64_t seed, double share_ttl_s)
    : store_(std::move(dir)), rng_(seed), ttl_(share_ttl_s) {}

std::string ProxyNode::fresh_share_id() {
  for (;;) {
    Bytes b;
    put_be64(b, rng_());
    put_be64(b, rng_());
    auto id = to_hex(b);
    if (shares_.count(id) == 0) return id;
  }
}

const TempShare& ProxyNode::apply_rekey(const std::vector<DataRecord>& records,
                                        const std::map<pre::Metadata, pre::ReEncKey>& rks, pre::Identity id_B,
                                        SimTime now) {
  if (records.empty()) throw StorageError(StorageErrc::EmptySelection);
  TempShare share{fresh_share_id(), {}, now, ttl_};
  for (const auto& r : records) {
    if (r.sensor_id != records.front().sensor_id) throw StorageError(StorageErrc::MixedSensors);
    auto c = pre::deserialize_ciphertext(group_, r.ciphertext);
    auto rk = rks.find(c.meta);
    if (rk == rks.end()) throw StorageError(StorageErrc::MissingReKey);
    share.items.push_back(ShareItem{pre::reencrypt(c, rk->second, id_B), r.payload_ct});
  }
  auto id = share.share_id;
  return shares_.emplace(id, std::move(share)).first->second;
}

const TempShare& ProxyNode::apply_rekey(const std::vector<DataRecord>& records, const pre::ReEncKey& rk,
                                        pre::Identity id_B, SimTime now) {
  std::map<pre::Metadata, pre::ReEncKey> rks;
  for (const auto& r : records) rks[r.meta()] = rk;
  return apply_rekey(records, rks, id_B, now);
}

const std::vector<ShareItem>& ProxyNode::fetch_share(const std::string& share_id, SimTime now) const {
  auto it = shares_.find(share_id);
  if (it == shares_.end()) throw StorageError(StorageErrc::UnknownShare);
  if (now >= it->second.created_at + it->second.ttl_s) throw StorageError(StorageErrc::Expired);
  return it->second.items;
}

std::size_t ProxyNode::gc_expired(SimTime now) {
  return std::erase_if(shares_, [&](const auto& kv) { return kv.second.created_at + kv.second.ttl_s <= now; });
}

std::string ProxyNode::share_manifest(const std::string& share_id) const {
  auto it = shares_.find(share_id);
  if (it == shares_.end()) throw StorageError(StorageErrc::UnknownShare);
  ordered_json j;
  j["share_id"] = share_id;
  j["items"] = json::array();
  for (const auto& item : it->second.items) {
    auto b = pre::serialize(group_, item.ct);
    if (item.payload_ct) append(b, *item.payload_ct);
    j["items"].push_back(to_hex(b));
  }
  j["created_at"] = it->second.created_at;
  j["ttl_s"] = it->second.ttl_s;
  return j.dump();
}

}  // namespace cbpre::storage
