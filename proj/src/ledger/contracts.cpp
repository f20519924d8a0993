#include "cbpre/ledger/contracts.hpp"

namespace cbpre::ledger {

pre::Identity RegistryContract::register_sensor(const Address& owner, Bytes cert, Amount price,
                                                std::string description, const MacAddress& mac) {
  if (by_mac_.count(mac) != 0) throw LedgerError(LedgerErrc::DuplicateMac);
  pre::Identity id{next_++};
  sensors_.emplace(id, SensorEntry{owner, std::move(cert), price, std::move(description), mac});
  by_mac_.emplace(mac, id);
  return id;
}

const SensorEntry* RegistryContract::find(pre::Identity id) const {
  auto it = sensors_.find(id);
  return it == sensors_.end() ? nullptr : &it->second;
}

std::string_view to_string(RequestState s) {
  switch (s) {
    case RequestState::Requested: return "Requested";
    case RequestState::ReKeyPosted: return "ReKeyPosted";
    case RequestState::DataReady: return "DataReady";
    case RequestState::Completed: return "Completed";
    case RequestState::Cancelled: return "Cancelled";
  }
  return "Unknown";
}

bool is_terminal(RequestState s) { return s == RequestState::Completed || s == RequestState::Cancelled; }

bool is_allowed_transition(RequestState from, RequestState to, Delegation delegation) {
  if (is_terminal(from)) return false;
  if (to == RequestState::Cancelled) return true;
  switch (from) {
    case RequestState::Requested:
      return to == RequestState::ReKeyPosted ||
             (delegation == Delegation::Direct && to == RequestState::DataReady);
    case RequestState::ReKeyPosted: return to == RequestState::DataReady;
    case RequestState::DataReady: return to == RequestState::Completed;
    default: return false;
  }
}

RequestContract::RequestContract(ContractId id, const Address& requester, const RequestDataPayload& request,
                                 const Address& owner, Amount price, SimTime created_at, SimTime deadline)
    : id_(id),
      requester_(requester),
      owner_(owner),
      requester_id_(request.requester_id),
      requester_cert_(request.requester_cert),
      sensor_id_(request.sensor_id),
      t_from_(request.t_from),
      t_to_(request.t_to),
      escrow_(request.deposit),
      price_(price),
      delegation_(request.delegation),
      created_at_(created_at),
      deadline_(deadline) {}

void RequestContract::move_to(RequestState next) {
  if (!is_allowed_transition(state_, next, delegation_)) throw LedgerError(LedgerErrc::BadState);
  state_ = next;
}

void RequestContract::post_rekey(const Address& caller, std::vector<RekeyEntry> entries) {
  if (caller != owner_) throw LedgerError(LedgerErrc::NotOwner);
  if (state_ != RequestState::Requested || delegation_ != Delegation::ProxyReEncryption) {
    throw LedgerError(LedgerErrc::BadState);
  }
  move_to(RequestState::ReKeyPosted);
  rekeys_ = std::move(entries);
}

void RequestContract::post_data_address(std::string share_id) {
  move_to(RequestState::DataReady);
  data_addr_ = std::move(share_id);
}

Settlement RequestContract::settle() {
  move_to(RequestState::Completed);
  Settlement s{price_, escrow_ - price_};
  escrow_ = 0;
  return s;
}

Settlement RequestContract::cancel() {
  move_to(RequestState::Cancelled);
  Settlement s{0, escrow_};
  escrow_ = 0;
  return s;
}

}  // namespace cbpre::ledger
