#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cbpre/ledger/contracts.hpp"
#include "cbpre/ledger/payload.hpp"
#include "cbpre/ledger/types.hpp"

namespace cbpre::ledger {

struct LedgerConfig {
  double block_interval_s = 13.0;  // mean of the exponential inter-block time
  std::size_t block_capacity = 10;
  std::uint64_t seed = 1;
  Amount tx_fee = 0;
  double contract_ttl_s = 1300.0;  // open requests expire after this long
};

enum class EventKind {
  SensorRegistered,
  RequestCreated,
  ReKeyPosted,
  DataReady,
  Settled,
  Cancelled,
  Transfer,
  TxFailed,
};

std::string_view to_string(EventKind k);

/// Ledger event. Which fields are meaningful depends on `kind`.
struct Event {
  std::uint64_t block = 0;
  std::uint32_t tx_index = 0;  // == block size for block-level events (expiry)
  EventKind kind = EventKind::TxFailed;
  TxId tx = 0;
  Address account;  // actor that caused the event (owner, requester, proxy, sender)
  ContractId contract = 0;
  pre::Identity sensor;
  std::string share_id;
  Amount amount = 0;
  Amount refund = 0;
  std::optional<LedgerErrc> error;
};

/// Single-writer simulated chain.
///
/// Blocks arrive at exponentially distributed intervals on a simulated
/// clock. Each block includes up to `block_capacity` pending transactions
/// ordered by (submitted_at, sender, nonce), executes them against the
/// registry and request contracts, then expires overdue requests.
class Ledger {
 public:
  explicit Ledger(LedgerConfig config);

  const LedgerConfig& config() const { return config_; }

  /// Genesis allocation; only allowed before the first block.
  void create_account(const Address& address, Amount balance);
  bool has_account(const Address& address) const { return balances_.count(address) != 0; }

  /// Throws LedgerError: UnknownAccount, BadNonce, MalformedPayload, InsufficientFunds.
  TxId submit_tx(Tx tx);
  /// Next nonce to use for `sender`, counting pending transactions.
  std::uint64_t next_nonce(const Address& sender) const;

  SimTime now() const { return now_; }
  SimTime next_block_time() const { return next_block_time_; }
  const Block& mine_next_block();

  std::vector<Event> events_since(std::size_t cursor) const;
  std::size_t event_count() const { return events_.size(); }
  const std::vector<Event>& events() const { return events_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::optional<Receipt> receipt(TxId id) const;
  std::size_t pending_count() const { return pending_.size(); }

  Amount balance(const Address& address) const;
  Amount total_escrow() const;
  /// Balances plus escrow; constant for the lifetime of the ledger.
  Amount total_supply() const;
  const Address& miner() const { return miner_; }

  const RegistryContract& registry() const { return registry_; }
  const RequestContract* request(ContractId id) const;
  const std::map<ContractId, RequestContract>& requests() const { return requests_; }

  /// Canonical byte image of the chain (blocks, receipts, events), for
  /// determinism checks.
  Bytes chain_bytes() const;
  void export_events_jsonl(std::ostream& out) const;

 private:
  struct Pending {
    TxId id;
    Tx tx;
  };

  void execute(const Tx& tx, TxId id, std::uint32_t index);
  void apply(const Tx& tx, TxId id, std::uint32_t index);
  void expire_overdue(std::uint32_t index);
  void emit(Event e);
  void debit(const Address& a, Amount v);
  void credit(const Address& a, Amount v);
  Amount reserved(const Address& a) const;

  LedgerConfig config_;
  std::mt19937_64 rng_;
  std::exponential_distribution<double> interval_;
  Address miner_;

  std::map<Address, Amount> balances_;
  std::map<Address, std::uint64_t> nonces_;  // next nonce expected on chain
  std::vector<Pending> pending_;
  std::map<TxId, Receipt> receipts_;
  TxId next_tx_id_ = 1;

  RegistryContract registry_;
  std::map<ContractId, RequestContract> requests_;
  ContractId next_contract_ = 1;

  std::vector<Block> blocks_;
  std::vector<Event> events_;
  SimTime now_ = 0;
  SimTime next_block_time_ = 0;
};

}  // namespace cbpre::ledger
