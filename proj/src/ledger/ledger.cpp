#include "cbpre/ledger/ledger.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

namespace cbpre::ledger {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::SensorRegistered: return "SensorRegistered";
    case EventKind::RequestCreated: return "RequestCreated";
    case EventKind::ReKeyPosted: return "ReKeyPosted";
    case EventKind::DataReady: return "DataReady";
    case EventKind::Settled: return "Settled";
    case EventKind::Cancelled: return "Cancelled";
    case EventKind::Transfer: return "Transfer";
    case EventKind::TxFailed: return "TxFailed";
  }
  return "Unknown";
}

Ledger::Ledger(LedgerConfig config)
    : config_(config),
      rng_(config.seed),
      interval_(1.0 / config.block_interval_s),
      miner_(Address::from_label("miner")) {
  if (!(config.block_interval_s > 0)) throw std::invalid_argument("block interval must be positive");
  balances_[miner_] = 0;
  next_block_time_ = interval_(rng_);
}

void Ledger::create_account(const Address& address, Amount balance) {
  if (!blocks_.empty()) throw std::logic_error("accounts can only be created at genesis");
  if (address != miner_ && balances_.count(address) != 0) throw std::logic_error("account already exists");
  balances_[address] += balance;
}

std::uint64_t Ledger::next_nonce(const Address& sender) const {
  auto it = nonces_.find(sender);
  std::uint64_t n = it == nonces_.end() ? 0 : it->second;
  for (const auto& p : pending_) {
    if (p.tx.sender == sender) n = std::max(n, p.tx.nonce + 1);
  }
  return n;
}

Amount Ledger::reserved(const Address& a) const {
  Amount total = 0;
  for (const auto& p : pending_) {
    if (p.tx.sender == a) total += value_of(p.tx.kind, p.tx.payload) + config_.tx_fee;
  }
  return total;
}

TxId Ledger::submit_tx(Tx tx) {
  if (!has_account(tx.sender)) throw LedgerError(LedgerErrc::UnknownAccount);
  if (tx.nonce != next_nonce(tx.sender)) throw LedgerError(LedgerErrc::BadNonce);
  Amount value = 0;
  try {
    validate_payload(tx.kind, tx.payload);
    value = value_of(tx.kind, tx.payload);
  } catch (const DecodeError&) {
    throw LedgerError(LedgerErrc::MalformedPayload);
  }
  Amount available = balance(tx.sender);
  Amount needed = reserved(tx.sender) + value + config_.tx_fee;
  if (needed > available) throw LedgerError(LedgerErrc::InsufficientFunds);
  TxId id = next_tx_id_++;
  pending_.push_back(Pending{id, std::move(tx)});
  return id;
}

const Block& Ledger::mine_next_block() {
  Block block;
  block.height = blocks_.size() + 1;
  block.timestamp = next_block_time_;
  now_ = block.timestamp;
  next_block_time_ = now_ + interval_(rng_);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    if (pending_[i].tx.submitted_at <= block.timestamp) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = pending_[a].tx;
    const auto& y = pending_[b].tx;
    return std::tie(x.submitted_at, x.sender, x.nonce) < std::tie(y.submitted_at, y.sender, y.nonce);
  });

  // A sender's transactions are only includable in nonce order; rescan until
  // the block is full or nothing else fits.
  std::vector<bool> taken(pending_.size(), false);
  bool progress = true;
  while (progress && block.txs.size() < config_.block_capacity) {
    progress = false;
    for (auto i : order) {
      if (block.txs.size() >= config_.block_capacity) break;
      if (taken[i]) continue;
      const auto& p = pending_[i];
      if (p.tx.nonce != nonces_[p.tx.sender]) continue;
      taken[i] = true;
      progress = true;
      auto index = static_cast<std::uint32_t>(block.txs.size());
      block.txs.push_back(p.tx);
      block.tx_ids.push_back(p.id);
      execute(p.tx, p.id, index);
      nonces_[p.tx.sender] = p.tx.nonce + 1;
    }
  }

  std::vector<Pending> still_pending;
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    if (!taken[i]) still_pending.push_back(std::move(pending_[i]));
  }
  pending_ = std::move(still_pending);

  expire_overdue(static_cast<std::uint32_t>(block.txs.size()));
  blocks_.push_back(std::move(block));
  return blocks_.back();
}

void Ledger::execute(const Tx& tx, TxId id, std::uint32_t index) {
  Receipt r{id, blocks_.size() + 1, index, std::nullopt};
  try {
    if (balance(tx.sender) < config_.tx_fee) throw LedgerError(LedgerErrc::InsufficientFunds);
    debit(tx.sender, config_.tx_fee);
    credit(miner_, config_.tx_fee);
    apply(tx, id, index);
  } catch (const LedgerError& e) {
    r.error = e.code();
  } catch (const DecodeError&) {
    r.error = LedgerErrc::MalformedPayload;
  }
  if (r.error) {
    Event ev;
    ev.block = r.block;
    ev.tx_index = index;
    ev.kind = EventKind::TxFailed;
    ev.tx = id;
    ev.account = tx.sender;
    ev.error = r.error;
    emit(std::move(ev));
  }
  receipts_[id] = r;
}

void Ledger::apply(const Tx& tx, TxId id, std::uint32_t index) {
  Event ev;
  ev.block = blocks_.size() + 1;
  ev.tx_index = index;
  ev.tx = id;
  ev.account = tx.sender;

  switch (tx.kind) {
    case TxKind::RegisterSensor: {
      auto p = RegisterSensorPayload::decode(tx.payload);
      ev.sensor = registry_.register_sensor(tx.sender, p.cert, p.price, p.description, p.mac);
      ev.kind = EventKind::SensorRegistered;
      ev.amount = p.price;
      break;
    }
    case TxKind::RequestData: {
      auto p = RequestDataPayload::decode(tx.payload);
      const auto* sensor = registry_.find(p.sensor_id);
      if (sensor == nullptr) throw LedgerError(LedgerErrc::UnknownSensor);
      if (p.deposit < sensor->price) throw LedgerError(LedgerErrc::InsufficientDeposit);
      if (balance(tx.sender) < p.deposit) throw LedgerError(LedgerErrc::InsufficientFunds);
      debit(tx.sender, p.deposit);
      ContractId cid = next_contract_++;
      requests_.emplace(cid, RequestContract(cid, tx.sender, p, sensor->owner, sensor->price, now_,
                                             now_ + config_.contract_ttl_s));
      ev.kind = EventKind::RequestCreated;
      ev.contract = cid;
      ev.sensor = p.sensor_id;
      ev.amount = p.deposit;
      break;
    }
    case TxKind::PostReKey: {
      auto p = PostReKeyPayload::decode(tx.payload);
      auto it = requests_.find(p.contract);
      if (it == requests_.end()) throw LedgerError(LedgerErrc::UnknownContract);
      it->second.post_rekey(tx.sender, std::move(p.entries));
      ev.kind = EventKind::ReKeyPosted;
      ev.contract = p.contract;
      ev.sensor = it->second.sensor_id();
      break;
    }
    case TxKind::PostDataAddr: {
      auto p = PostDataAddrPayload::decode(tx.payload);
      auto it = requests_.find(p.contract);
      if (it == requests_.end()) throw LedgerError(LedgerErrc::UnknownContract);
      it->second.post_data_address(p.share_id);
      ev.kind = EventKind::DataReady;
      ev.contract = p.contract;
      ev.sensor = it->second.sensor_id();
      ev.share_id = p.share_id;
      break;
    }
    case TxKind::Confirm: {
      auto p = ConfirmPayload::decode(tx.payload);
      auto it = requests_.find(p.contract);
      if (it == requests_.end()) throw LedgerError(LedgerErrc::UnknownContract);
      if (it->second.requester() != tx.sender) throw LedgerError(LedgerErrc::NotRequester);
      auto s = it->second.settle();
      credit(it->second.owner(), s.to_owner);
      credit(it->second.requester(), s.refund);
      ev.kind = EventKind::Settled;
      ev.contract = p.contract;
      ev.sensor = it->second.sensor_id();
      ev.amount = s.to_owner;
      ev.refund = s.refund;
      break;
    }
    case TxKind::Transfer: {
      auto p = TransferPayload::decode(tx.payload);
      if (!has_account(p.to)) throw LedgerError(LedgerErrc::UnknownAccount);
      if (balance(tx.sender) < p.amount) throw LedgerError(LedgerErrc::InsufficientFunds);
      debit(tx.sender, p.amount);
      credit(p.to, p.amount);
      ev.kind = EventKind::Transfer;
      ev.amount = p.amount;
      break;
    }
  }
  emit(std::move(ev));
}

void Ledger::expire_overdue(std::uint32_t index) {
  for (auto& [cid, req] : requests_) {
    if (is_terminal(req.state()) || req.deadline() > now_) continue;
    Event ev;
    ev.block = blocks_.size() + 1;
    ev.tx_index = index;
    ev.contract = cid;
    ev.sensor = req.sensor_id();
    ev.account = req.requester();
    Settlement s;
    if (req.state() == RequestState::DataReady) {
      s = req.settle();
      ev.kind = EventKind::Settled;
    } else {
      s = req.cancel();
      ev.kind = EventKind::Cancelled;
    }
    credit(req.owner(), s.to_owner);
    credit(req.requester(), s.refund);
    ev.amount = s.to_owner;
    ev.refund = s.refund;
    emit(std::move(ev));
  }
}

void Ledger::emit(Event e) { events_.push_back(std::move(e)); }

void Ledger::debit(const Address& a, Amount v) {
  auto& b = balances_.at(a);
  if (b < v) throw LedgerError(LedgerErrc::InsufficientFunds);
  b -= v;
}

void Ledger::credit(const Address& a, Amount v) { balances_[a] += v; }

std::vector<Event> Ledger::events_since(std::size_t cursor) const {
  if (cursor >= events_.size()) return {};
  return std::vector<Event>(events_.begin() + static_cast<std::ptrdiff_t>(cursor), events_.end());
}

std::optional<Receipt> Ledger::receipt(TxId id) const {
  auto it = receipts_.find(id);
  if (it == receipts_.end()) return std::nullopt;
  return it->second;
}

Amount Ledger::balance(const Address& address) const {
  auto it = balances_.find(address);
  return it == balances_.end() ? 0 : it->second;
}

Amount Ledger::total_escrow() const {
  Amount total = 0;
  for (const auto& [id, req] : requests_) total += req.escrow();
  return total;
}

Amount Ledger::total_supply() const {
  Amount total = total_escrow();
  for (const auto& [a, b] : balances_) total += b;
  return total;
}

const RequestContract* Ledger::request(ContractId id) const {
  auto it = requests_.find(id);
  return it == requests_.end() ? nullptr : &it->second;
}

namespace {

nlohmann::ordered_json event_json(const Event& e) {
  nlohmann::ordered_json j;
  j["block"] = e.block;
  j["tx_index"] = e.tx_index;
  j["kind"] = std::string(to_string(e.kind));
  switch (e.kind) {
    case EventKind::SensorRegistered:
      j["sensor_id"] = to_hex(e.sensor.bytes());
      j["owner"] = e.account.hex();
      j["price"] = e.amount;
      break;
    case EventKind::RequestCreated:
      j["contract"] = e.contract;
      j["sensor_id"] = to_hex(e.sensor.bytes());
      j["requester"] = e.account.hex();
      j["deposit"] = e.amount;
      break;
    case EventKind::ReKeyPosted:
      j["contract"] = e.contract;
      j["owner"] = e.account.hex();
      break;
    case EventKind::DataReady:
      j["contract"] = e.contract;
      j["share_id"] = e.share_id;
      break;
    case EventKind::Settled:
    case EventKind::Cancelled:
      j["contract"] = e.contract;
      j["paid"] = e.amount;
      j["refund"] = e.refund;
      break;
    case EventKind::Transfer:
      j["from"] = e.account.hex();
      j["amount"] = e.amount;
      break;
    case EventKind::TxFailed:
      j["tx"] = e.tx;
      j["sender"] = e.account.hex();
      j["error"] = std::string(to_string(*e.error));
      break;
  }
  return j;
}

void put_time(Bytes& out, SimTime t) { put_be64(out, std::bit_cast<std::uint64_t>(t)); }

}  // namespace

void Ledger::export_events_jsonl(std::ostream& out) const {
  for (const auto& e : events_) out << event_json(e).dump() << '\n';
}

Bytes Ledger::chain_bytes() const {
  Bytes out;
  for (const auto& b : blocks_) {
    put_be64(out, b.height);
    put_time(out, b.timestamp);
    put_be32(out, static_cast<std::uint32_t>(b.txs.size()));
    for (std::size_t i = 0; i < b.txs.size(); ++i) {
      const auto& tx = b.txs[i];
      append(out, tx.sender.bytes);
      put_be64(out, tx.nonce);
      out.push_back(static_cast<std::uint8_t>(tx.kind));
      put_be32(out, static_cast<std::uint32_t>(tx.payload.size()));
      append(out, tx.payload);
      put_time(out, tx.submitted_at);
      const auto& r = receipts_.at(b.tx_ids[i]);
      out.push_back(r.error ? static_cast<std::uint8_t>(1 + static_cast<int>(*r.error)) : 0);
    }
  }
  std::ostringstream events;
  export_events_jsonl(events);
  auto s = events.str();
  out.insert(out.end(), s.begin(), s.end());
  for (const auto& [a, bal] : balances_) {
    append(out, a.bytes);
    put_be64(out, bal);
  }
  return out;
}

}  // namespace cbpre::ledger
