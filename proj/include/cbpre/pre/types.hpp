#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>

#include "cbpre/bytes.hpp"
#include "cbpre/group/group.hpp"

namespace cbpre::pre {

class InvalidRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The ECQV validation equation did not hold for an issued key.
class ValidationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ciphertext failed its integrity check during decryption.
class AuthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 32-bit participant identity.
struct Identity {
  std::uint32_t value = 0;

  std::array<std::uint8_t, 4> bytes() const {
    return {static_cast<std::uint8_t>(value >> 24), static_cast<std::uint8_t>(value >> 16),
            static_cast<std::uint8_t>(value >> 8), static_cast<std::uint8_t>(value)};
  }
  auto operator<=>(const Identity&) const = default;
};

/// Per-record tag: id_A || T0, 8 bytes big-endian.
struct Metadata {
  Identity id;
  std::uint32_t t0 = 0;  // unix seconds

  std::array<std::uint8_t, 8> bytes() const {
    auto idb = id.bytes();
    return {idb[0],
            idb[1],
            idb[2],
            idb[3],
            static_cast<std::uint8_t>(t0 >> 24),
            static_cast<std::uint8_t>(t0 >> 16),
            static_cast<std::uint8_t>(t0 >> 8),
            static_cast<std::uint8_t>(t0)};
  }
  static Metadata from_bytes(ByteView in) {
    if (in.size() != 8) throw DecodeError("metadata must be 8 bytes");
    return Metadata{Identity{get_be32(in)}, get_be32(in.subspan(4))};
  }
  auto operator<=>(const Metadata&) const = default;
};

struct MessageBlock {
  Block32 bytes{};
  auto operator<=>(const MessageBlock&) const = default;
};

struct ReEncKey {
  Block32 bytes{};
  auto operator<=>(const ReEncKey&) const = default;
};

enum class HashSuiteId : std::uint8_t { Sha256Tagged = 0x01 };

template <group::PrimeOrderGroup G>
struct PublicParams {
  G group;
  typename G::Point P;
  typename G::Point P_alpha;
  HashSuiteId hash_suite = HashSuiteId::Sha256Tagged;
};

template <group::PrimeOrderGroup G>
struct MasterSecret {
  typename G::Scalar alpha;
};

/// ECQV implicit certificate: a non-identity group point.
template <group::PrimeOrderGroup G>
struct Certificate {
  typename G::Point point;
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

template <group::PrimeOrderGroup G>
struct CertRequest {
  Identity id;
  typename G::Point R_U;
};

template <group::PrimeOrderGroup G>
struct CertResponse {
  typename G::Scalar r_a;
  Certificate<G> cert;
};

template <group::PrimeOrderGroup G>
struct KeyPair {
  typename G::Scalar d;
  typename G::Point P_pub;
  Certificate<G> cert;
  Identity id;
};

template <group::PrimeOrderGroup G>
struct Ciphertext {
  Block32 C_A{};
  Metadata meta;
  typename G::Scalar h_A;
  typename G::Scalar s_A;
  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

template <group::PrimeOrderGroup G>
struct ReEncCiphertext {
  Block32 C_B{};
  Block32 C_A{};
  Metadata meta;
  Identity id_B;
  typename G::Scalar h_A;
  typename G::Scalar s_A;
  friend bool operator==(const ReEncCiphertext&, const ReEncCiphertext&) = default;
};

}  // namespace cbpre::pre
