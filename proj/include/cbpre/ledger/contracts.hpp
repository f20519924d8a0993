#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cbpre/ledger/payload.hpp"
#include "cbpre/ledger/types.hpp"

namespace cbpre::ledger {

struct SensorEntry {
  Address owner;
  Bytes cert;
  Amount price = 0;
  std::string description;
  MacAddress mac{};
};

/// Static sensor catalog. Ids are handed out sequentially from 1.
class RegistryContract {
 public:
  /// Throws LedgerError(DuplicateMac).
  pre::Identity register_sensor(const Address& owner, Bytes cert, Amount price, std::string description,
                                const MacAddress& mac);

  const SensorEntry* find(pre::Identity id) const;
  pre::Identity next_id() const { return pre::Identity{next_}; }
  const std::map<pre::Identity, SensorEntry>& sensors() const { return sensors_; }

 private:
  std::map<pre::Identity, SensorEntry> sensors_;
  std::map<MacAddress, pre::Identity> by_mac_;
  std::uint32_t next_ = 1;
};

enum class RequestState { Requested, ReKeyPosted, DataReady, Completed, Cancelled };

std::string_view to_string(RequestState s);

bool is_terminal(RequestState s);

/// Declared edges of the per-request state machine. `Direct` requests (no
/// re-encryption) additionally allow Requested -> DataReady.
bool is_allowed_transition(RequestState from, RequestState to, Delegation delegation);

/// Where escrowed currency goes when a request contract closes.
struct Settlement {
  Amount to_owner = 0;
  Amount refund = 0;
};

/// Per-request contract, created when a RequestData transaction executes.
class RequestContract {
 public:
  RequestContract(ContractId id, const Address& requester, const RequestDataPayload& request, const Address& owner,
                  Amount price, SimTime created_at, SimTime deadline);

  ContractId id() const { return id_; }
  const Address& requester() const { return requester_; }
  const Address& owner() const { return owner_; }
  pre::Identity requester_id() const { return requester_id_; }
  const Bytes& requester_cert() const { return requester_cert_; }
  pre::Identity sensor_id() const { return sensor_id_; }
  std::uint32_t t_from() const { return t_from_; }
  std::uint32_t t_to() const { return t_to_; }
  Amount escrow() const { return escrow_; }
  Amount price() const { return price_; }
  Delegation delegation() const { return delegation_; }
  const std::vector<RekeyEntry>& rekeys() const { return rekeys_; }
  const std::optional<std::string>& data_addr() const { return data_addr_; }
  RequestState state() const { return state_; }
  SimTime created_at() const { return created_at_; }
  SimTime deadline() const { return deadline_; }

  /// Throws NotOwner or BadState.
  void post_rekey(const Address& caller, std::vector<RekeyEntry> entries);
  /// Throws BadState.
  void post_data_address(std::string share_id);
  /// DataReady -> Completed: price to the owner, remainder refunded. Throws BadState.
  Settlement settle();
  /// Any non-terminal state -> Cancelled with a full refund. Throws BadState.
  Settlement cancel();

 private:
  void move_to(RequestState next);

  ContractId id_;
  Address requester_;
  Address owner_;
  pre::Identity requester_id_;
  Bytes requester_cert_;
  pre::Identity sensor_id_;
  std::uint32_t t_from_;
  std::uint32_t t_to_;
  Amount escrow_;
  Amount price_;
  Delegation delegation_;
  std::vector<RekeyEntry> rekeys_;
  std::optional<std::string> data_addr_;
  RequestState state_ = RequestState::Requested;
  SimTime created_at_;
  SimTime deadline_;
};

}  // namespace cbpre::ledger
