#pragma once

#include <array>
#include <compare>
#include <memory>

#include "cbpre/group/group.hpp"

struct ec_group_st;
struct ec_point_st;

namespace cbpre::group {

/// NIST P-256 (prime order, cofactor 1), backed by OpenSSL.
///
/// Scalars are 32-byte big-endian integers in [0, q). Points are encoded in
/// 33-byte SEC1 compressed form; the identity is 33 zero bytes.
class P256Group {
 public:
  class Scalar {
   public:
    Scalar() = default;
    const std::array<std::uint8_t, 32>& bytes() const { return be_; }
    auto operator<=>(const Scalar&) const = default;

   private:
    friend class P256Group;
    std::array<std::uint8_t, 32> be_{};
  };

  class Point {
   public:
    const std::array<std::uint8_t, 33>& bytes() const { return enc_; }
    friend bool operator==(const Point& a, const Point& b) { return a.enc_ == b.enc_; }

   private:
    friend class P256Group;
    Point() = default;
    std::shared_ptr<const ec_point_st> pt_;
    std::array<std::uint8_t, 33> enc_{};
  };

  P256Group();

  GroupParams params() const;
  std::size_t scalar_bytes() const { return 32; }
  std::size_t point_bytes() const { return 33; }

  /// Group order q as 32 big-endian bytes.
  const std::array<std::uint8_t, 32>& order_bytes() const;

  Scalar scalar(std::uint64_t v) const;
  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  bool is_zero(const Scalar& a) const;
  /// Uniform in [1, q) by rejection sampling over 256-bit draws.
  Scalar random_scalar(Rng& rng) const;
  /// Digest reduced mod q; zero maps to one.
  Scalar scalar_from_digest(const Digest& d) const;
  Bytes encode(const Scalar& s) const;
  Scalar decode_scalar(ByteView in) const;

  Point generator() const;
  Point identity() const;
  bool is_identity(const Point& p) const;
  Point add(const Point& a, const Point& b) const;
  Point neg(const Point& a) const;
  Point mul(const Scalar& k, const Point& p) const;
  Point mul_gen(const Scalar& k) const;
  Bytes encode(const Point& p) const;
  Point decode_point(ByteView in) const;

  /// Underlying OpenSSL group, for test oracles that need the curve constants.
  const ec_group_st* native() const;

  friend bool operator==(const P256Group&, const P256Group&) { return true; }

 private:
  struct Shared;
  Point wrap(ec_point_st* raw) const;  // takes ownership

  std::shared_ptr<const Shared> shared_;
};

static_assert(PrimeOrderGroup<P256Group>);

}  // namespace cbpre::group
