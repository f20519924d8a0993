#pragma once

#include <algorithm>

#include "cbpre/pre/types.hpp"

// Bit-exact wire formats:
//   Ciphertext       0x01 || C_A(32) || meta(8) || h_A || s_A
//   ReEncCiphertext  0x02 || C_B(32) || C_A(32) || meta(8) || id_B(4) || h_A || s_A
//   Certificate      encoded point (compressed on P-256)
//   ReEncKey         32 raw bytes
//   PublicParams     group tag [|| mock q(4)] || hash suite(1) || P_alpha

namespace cbpre::pre {

inline constexpr std::uint8_t kCiphertextVersion = 0x01;
inline constexpr std::uint8_t kReEncCiphertextVersion = 0x02;

template <group::PrimeOrderGroup G>
Bytes serialize(const G& g, const Ciphertext<G>& c) {
  Bytes out{kCiphertextVersion};
  append(out, c.C_A);
  append(out, c.meta.bytes());
  append(out, g.encode(c.h_A));
  append(out, g.encode(c.s_A));
  return out;
}

template <group::PrimeOrderGroup G>
Ciphertext<G> deserialize_ciphertext(const G& g, ByteView in) {
  ByteReader r(in);
  if (r.u8() != kCiphertextVersion) throw DecodeError("not a ciphertext");
  Ciphertext<G> c{r.block(), Metadata::from_bytes(r.take(8)), g.decode_scalar(r.take(g.scalar_bytes())),
                  g.decode_scalar(r.take(g.scalar_bytes()))};
  r.expect_end();
  return c;
}

template <group::PrimeOrderGroup G>
Bytes serialize(const G& g, const ReEncCiphertext<G>& c) {
  Bytes out{kReEncCiphertextVersion};
  append(out, c.C_B);
  append(out, c.C_A);
  append(out, c.meta.bytes());
  append(out, c.id_B.bytes());
  append(out, g.encode(c.h_A));
  append(out, g.encode(c.s_A));
  return out;
}

template <group::PrimeOrderGroup G>
ReEncCiphertext<G> deserialize_reenc(const G& g, ByteView in) {
  ByteReader r(in);
  if (r.u8() != kReEncCiphertextVersion) throw DecodeError("not a re-encrypted ciphertext");
  auto c_b = r.block();
  auto c_a = r.block();
  auto meta = Metadata::from_bytes(r.take(8));
  Identity id_b{r.u32()};
  auto h_a = g.decode_scalar(r.take(g.scalar_bytes()));
  auto s_a = g.decode_scalar(r.take(g.scalar_bytes()));
  r.expect_end();
  return ReEncCiphertext<G>{c_b, c_a, meta, id_b, h_a, s_a};
}

template <group::PrimeOrderGroup G>
Bytes serialize(const G& g, const Certificate<G>& cert) {
  return g.encode(cert.point);
}

/// Rejects the identity: a certificate must be a non-identity point.
template <group::PrimeOrderGroup G>
Certificate<G> deserialize_certificate(const G& g, ByteView in) {
  auto p = g.decode_point(in);
  if (g.is_identity(p)) throw DecodeError("certificate is the identity element");
  return Certificate<G>{p};
}

/// Rejects the identity, as required for any externally supplied public key.
template <group::PrimeOrderGroup G>
typename G::Point deserialize_public_key(const G& g, ByteView in) {
  auto p = g.decode_point(in);
  if (g.is_identity(p)) throw DecodeError("public key is the identity element");
  return p;
}

inline ReEncKey deserialize_rekey(ByteView in) {
  if (in.size() != 32) throw DecodeError("re-encryption key must be 32 bytes");
  ReEncKey rk;
  std::copy(in.begin(), in.end(), rk.bytes.begin());
  return rk;
}

template <group::PrimeOrderGroup G>
Bytes serialize(const PublicParams<G>& pp) {
  Bytes out = group::serialize(pp.group.params());
  out.push_back(static_cast<std::uint8_t>(pp.hash_suite));
  append(out, pp.group.encode(pp.P_alpha));
  return out;
}

/// Parses parameters for the group `g`; the tag (and mock order) must match.
template <group::PrimeOrderGroup G>
PublicParams<G> deserialize_params(const G& g, ByteView in) {
  auto prefix = group::serialize(g.params());
  if (in.size() < prefix.size() || !std::equal(prefix.begin(), prefix.end(), in.begin())) {
    throw DecodeError("parameters belong to a different group");
  }
  ByteReader r(in.subspan(prefix.size()));
  if (r.u8() != static_cast<std::uint8_t>(HashSuiteId::Sha256Tagged)) throw DecodeError("unknown hash suite");
  auto p_alpha = deserialize_public_key(g, r.take(g.point_bytes()));
  r.expect_end();
  return PublicParams<G>{g, g.generator(), p_alpha};
}

}  // namespace cbpre::pre
