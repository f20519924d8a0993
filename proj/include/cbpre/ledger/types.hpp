#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cbpre/bytes.hpp"
#include "cbpre/pre/types.hpp"

namespace cbpre::ledger {

using Amount = std::uint64_t;
using SimTime = double;  // simulated seconds
using ContractId = std::uint64_t;
using TxId = std::uint64_t;
using MacAddress = std::array<std::uint8_t, 6>;

struct Address {
  std::array<std::uint8_t, 20> bytes{};

  /// Deterministic address for a named simulation participant.
  static Address from_label(std::string_view label);
  std::string hex() const { return to_hex(bytes); }
  auto operator<=>(const Address&) const = default;
};

enum class LedgerErrc {
  BadNonce,
  InsufficientFunds,
  UnknownAccount,
  MalformedPayload,
  DuplicateMac,
  UnknownSensor,
  InsufficientDeposit,
  UnknownContract,
  NotOwner,
  NotRequester,
  BadState,
};

std::string_view to_string(LedgerErrc e);

class LedgerError : public std::runtime_error {
 public:
  explicit LedgerError(LedgerErrc code) : std::runtime_error(std::string(to_string(code))), code_(code) {}
  LedgerErrc code() const { return code_; }

 private:
  LedgerErrc code_;
};

enum class TxKind : std::uint8_t {
  RegisterSensor = 1,
  RequestData = 2,
  PostReKey = 3,
  PostDataAddr = 4,
  Confirm = 5,
  Transfer = 6,
};

std::string_view to_string(TxKind k);

struct Tx {
  Address sender;
  std::uint64_t nonce = 0;
  TxKind kind = TxKind::Transfer;
  Bytes payload;
  SimTime submitted_at = 0;
};

struct Receipt {
  TxId tx = 0;
  std::uint64_t block = 0;
  std::uint32_t tx_index = 0;
  std::optional<LedgerErrc> error;  // empty on success

  bool ok() const { return !error.has_value(); }
};

struct Block {
  std::uint64_t height = 0;
  SimTime timestamp = 0;
  std::vector<Tx> txs;
  std::vector<TxId> tx_ids;
};

}  // namespace cbpre::ledger
