#include "cbpre/ledger/payload.hpp"

#include "cbpre/sha256.hpp"

namespace cbpre::ledger {

namespace {

void put_var(Bytes& out, ByteView in) {
  put_be32(out, static_cast<std::uint32_t>(in.size()));
  append(out, in);
}

void put_string(Bytes& out, const std::string& s) {
  put_var(out, ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

Bytes get_var(ByteReader& r) {
  auto n = r.u32();
  auto v = r.take(n);
  return Bytes(v.begin(), v.end());
}

std::string get_string(ByteReader& r) {
  auto b = get_var(r);
  return std::string(b.begin(), b.end());
}

}  // namespace

Address Address::from_label(std::string_view label) {
  Sha256 h;
  const std::string prefix = "account:";
  h.update(ByteView(reinterpret_cast<const std::uint8_t*>(prefix.data()), prefix.size()));
  h.update(ByteView(reinterpret_cast<const std::uint8_t*>(label.data()), label.size()));
  auto d = h.finish();
  Address a;
  std::copy(d.begin(), d.begin() + 20, a.bytes.begin());
  return a;
}

std::string_view to_string(LedgerErrc e) {
  switch (e) {
    case LedgerErrc::BadNonce: return "BadNonce";
    case LedgerErrc::InsufficientFunds: return "InsufficientFunds";
    case LedgerErrc::UnknownAccount: return "UnknownAccount";
    case LedgerErrc::MalformedPayload: return "MalformedPayload";
    case LedgerErrc::DuplicateMac: return "DuplicateMac";
    case LedgerErrc::UnknownSensor: return "UnknownSensor";
    case LedgerErrc::InsufficientDeposit: return "InsufficientDeposit";
    case LedgerErrc::UnknownContract: return "UnknownContract";
    case LedgerErrc::NotOwner: return "NotOwner";
    case LedgerErrc::NotRequester: return "NotRequester";
    case LedgerErrc::BadState: return "BadState";
  }
  return "Unknown";
}

std::string_view to_string(TxKind k) {
  switch (k) {
    case TxKind::RegisterSensor: return "RegisterSensor";
    case TxKind::RequestData: return "RequestData";
    case TxKind::PostReKey: return "PostReKey";
    case TxKind::PostDataAddr: return "PostDataAddr";
    case TxKind::Confirm: return "Confirm";
    case TxKind::Transfer: return "Transfer";
  }
  return "Unknown";
}

Bytes RegisterSensorPayload::encode() const {
  Bytes out;
  put_var(out, cert);
  put_be64(out, price);
  put_string(out, description);
  append(out, mac);
  return out;
}

RegisterSensorPayload RegisterSensorPayload::decode(ByteView in) {
  ByteReader r(in);
  RegisterSensorPayload p;
  p.cert = get_var(r);
  p.price = r.u64();
  p.description = get_string(r);
  auto mac = r.take(6);
  std::copy(mac.begin(), mac.end(), p.mac.begin());
  r.expect_end();
  return p;
}

Bytes RequestDataPayload::encode() const {
  Bytes out;
  put_be32(out, requester_id.value);
  put_var(out, requester_cert);
  put_be32(out, sensor_id.value);
  put_be32(out, t_from);
  put_be32(out, t_to);
  put_be64(out, deposit);
  out.push_back(static_cast<std::uint8_t>(delegation));
  return out;
}

RequestDataPayload RequestDataPayload::decode(ByteView in) {
  ByteReader r(in);
  RequestDataPayload p;
  p.requester_id = pre::Identity{r.u32()};
  p.requester_cert = get_var(r);
  p.sensor_id = pre::Identity{r.u32()};
  p.t_from = r.u32();
  p.t_to = r.u32();
  p.deposit = r.u64();
  auto d = r.u8();
  if (d != static_cast<std::uint8_t>(Delegation::ProxyReEncryption) && d != static_cast<std::uint8_t>(Delegation::Direct)) {
    throw DecodeError("unknown delegation mode");
  }
  p.delegation = static_cast<Delegation>(d);
  r.expect_end();
  if (p.t_from > p.t_to) throw DecodeError("empty time range");
  return p;
}

Bytes PostReKeyPayload::encode() const {
  Bytes out;
  put_be64(out, contract);
  put_be32(out, static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) {
    append(out, e.meta.bytes());
    append(out, e.rk.bytes);
  }
  return out;
}

PostReKeyPayload PostReKeyPayload::decode(ByteView in) {
  ByteReader r(in);
  PostReKeyPayload p;
  p.contract = r.u64();
  auto n = r.u32();
  if (n > r.remaining() / 40) throw DecodeError("rekey count exceeds payload");
  p.entries.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    auto meta = pre::Metadata::from_bytes(r.take(8));
    p.entries.push_back(RekeyEntry{meta, pre::ReEncKey{r.block()}});
  }
  r.expect_end();
  return p;
}

Bytes PostDataAddrPayload::encode() const {
  Bytes out;
  put_be64(out, contract);
  put_string(out, share_id);
  return out;
}

PostDataAddrPayload PostDataAddrPayload::decode(ByteView in) {
  ByteReader r(in);
  PostDataAddrPayload p;
  p.contract = r.u64();
  p.share_id = get_string(r);
  r.expect_end();
  return p;
}

Bytes ConfirmPayload::encode() const {
  Bytes out;
  put_be64(out, contract);
  return out;
}

ConfirmPayload ConfirmPayload::decode(ByteView in) {
  ByteReader r(in);
  ConfirmPayload p{r.u64()};
  r.expect_end();
  return p;
}

Bytes TransferPayload::encode() const {
  Bytes out;
  append(out, to.bytes);
  put_be64(out, amount);
  return out;
}

TransferPayload TransferPayload::decode(ByteView in) {
  ByteReader r(in);
  TransferPayload p;
  auto to = r.take(20);
  std::copy(to.begin(), to.end(), p.to.bytes.begin());
  p.amount = r.u64();
  r.expect_end();
  return p;
}

void validate_payload(TxKind kind, ByteView payload) {
  switch (kind) {
    case TxKind::RegisterSensor: RegisterSensorPayload::decode(payload); return;
    case TxKind::RequestData: RequestDataPayload::decode(payload); return;
    case TxKind::PostReKey: PostReKeyPayload::decode(payload); return;
    case TxKind::PostDataAddr: PostDataAddrPayload::decode(payload); return;
    case TxKind::Confirm: ConfirmPayload::decode(payload); return;
    case TxKind::Transfer: TransferPayload::decode(payload); return;
  }
  throw DecodeError("unknown transaction kind");
}

Amount value_of(TxKind kind, ByteView payload) {
  switch (kind) {
    case TxKind::RequestData: return RequestDataPayload::decode(payload).deposit;
    case TxKind::Transfer: return TransferPayload::decode(payload).amount;
    default: return 0;
  }
}

}  // namespace cbpre::ledger
