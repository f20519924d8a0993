#pragma once

#include <string>
#include <vector>

#include "cbpre/ledger/types.hpp"

// Kind-specific transaction payloads and their byte encodings. Variable
// length fields carry a 4-byte big-endian length prefix.

namespace cbpre::ledger {

struct RegisterSensorPayload {
  Bytes cert;
  Amount price = 0;
  std::string description;
  MacAddress mac{};

  Bytes encode() const;
  static RegisterSensorPayload decode(ByteView in);
};

/// How the requester expects the data to be delegated.
enum class Delegation : std::uint8_t {
  ProxyReEncryption = 1,  // owner posts re-encryption keys before the proxy may deliver
  Direct = 2,             // baseline without re-encryption: the proxy delivers right away
};

struct RequestDataPayload {
  pre::Identity requester_id;
  Bytes requester_cert;
  pre::Identity sensor_id;
  std::uint32_t t_from = 0;
  std::uint32_t t_to = 0;
  Amount deposit = 0;
  Delegation delegation = Delegation::ProxyReEncryption;

  Bytes encode() const;
  static RequestDataPayload decode(ByteView in);
};

/// One re-encryption key per record, keyed by the record's metadata.
struct RekeyEntry {
  pre::Metadata meta;
  pre::ReEncKey rk;
  auto operator<=>(const RekeyEntry&) const = default;
};

struct PostReKeyPayload {
  ContractId contract = 0;
  std::vector<RekeyEntry> entries;

  Bytes encode() const;
  static PostReKeyPayload decode(ByteView in);
};

struct PostDataAddrPayload {
  ContractId contract = 0;
  std::string share_id;

  Bytes encode() const;
  static PostDataAddrPayload decode(ByteView in);
};

struct ConfirmPayload {
  ContractId contract = 0;

  Bytes encode() const;
  static ConfirmPayload decode(ByteView in);
};

struct TransferPayload {
  Address to;
  Amount amount = 0;

  Bytes encode() const;
  static TransferPayload decode(ByteView in);
};

/// Structural check that `payload` decodes for `kind`; throws DecodeError.
void validate_payload(TxKind kind, ByteView payload);

/// Currency that leaves the sender's balance when the tx executes (excluding fees).
Amount value_of(TxKind kind, ByteView payload);

}  // namespace cbpre::ledger
