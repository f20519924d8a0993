#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbpre/pre/production.hpp"

namespace cbpre::storage {

using SimTime = double;

enum class StorageErrc { MalformedCiphertext, IdMismatch, EmptySelection, MixedSensors, MissingReKey, UnknownShare, Expired };

std::string_view to_string(StorageErrc e);

class StorageError : public std::runtime_error {
 public:
  explicit StorageError(StorageErrc code) : std::runtime_error(std::string(to_string(code))), code_(code) {}
  StorageErrc code() const { return code_; }

 private:
  StorageErrc code_;
};

struct DataRecord {
  std::uint64_t record_id = 0;
  pre::Identity sensor_id;
  Bytes ciphertext;  // serialized pre::Ciphertext
  std::optional<Bytes> payload_ct;
  SimTime stored_at = 0;

  pre::Metadata meta() const { return pre::Metadata::from_bytes(ByteView(ciphertext).subspan(33, 8)); }
};

struct ShareItem {
  pre::ProdReEncCiphertext ct;
  std::optional<Bytes> payload_ct;
};

struct TempShare {
  std::string share_id;
  std::vector<ShareItem> items;
  SimTime created_at = 0;
  double ttl_s = 0;
};

/// Append-only record store. One JSON-lines file per sensor under `dir`,
/// reloaded on construction. An empty `dir` keeps records in memory only.
class RecordStore {
 public:
  explicit RecordStore(std::filesystem::path dir);

  /// Throws MalformedCiphertext or IdMismatch.
  std::uint64_t put_record(pre::Identity sensor_id, ByteView ciphertext, std::optional<Bytes> payload_ct,
                           SimTime now);
  /// Records of `sensor_id` with T0 in [t_from, t_to], ordered by record_id.
  std::vector<DataRecord> query_records(pre::Identity sensor_id, std::uint32_t t_from, std::uint32_t t_to) const;

  std::size_t size() const { return count_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path file_for(pre::Identity sensor_id) const;

  std::filesystem::path dir_;
  pre::ProdGroup group_;
  // sensor -> (T0, record_id) -> record
  std::map<pre::Identity, std::map<std::pair<std::uint32_t, std::uint64_t>, DataRecord>> index_;
  std::uint64_t next_id_ = 1;
  std::size_t count_ = 0;
};

/// Storage server plus semi-trusted proxy. Only public material and
/// re-encryption keys ever reach it.
class ProxyNode {
 public:
  static constexpr double kDefaultShareTtl = 3600.0;

  ProxyNode(std::filesystem::path dir, std::uint64_t seed, double share_ttl_s = kDefaultShareTtl);

  RecordStore& store() { return store_; }
  const RecordStore& store() const { return store_; }

  /// Re-encrypts every record under the key posted for its metadata.
  /// Throws EmptySelection, MixedSensors or MissingReKey.
  const TempShare& apply_rekey(const std::vector<DataRecord>& records,
                               const std::map<pre::Metadata, pre::ReEncKey>& rks, pre::Identity id_B, SimTime now);
  /// Same key for every record.
  const TempShare& apply_rekey(const std::vector<DataRecord>& records, const pre::ReEncKey& rk, pre::Identity id_B,
                               SimTime now);

  /// Throws UnknownShare or Expired.
  const std::vector<ShareItem>& fetch_share(const std::string& share_id, SimTime now) const;
  std::size_t gc_expired(SimTime now);
  std::size_t share_count() const { return shares_.size(); }

  /// {"share_id","items":[hex(reenc || payload_ct)],"created_at","ttl_s"}
  std::string share_manifest(const std::string& share_id) const;

 private:
  std::string fresh_share_id();

  RecordStore store_;
  pre::ProdGroup group_;
  std::mt19937_64 rng_;
  double ttl_;
  std::map<std::string, TempShare> shares_;
};

}  // namespace cbpre::storage
