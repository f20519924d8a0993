#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>

#include "cbpre/group/group.hpp"

namespace cbpre::group {

/// Tag that must be passed explicitly to construct the insecure mock group.
struct InsecureTestGroup {
  explicit InsecureTestGroup() = default;
};
inline constexpr InsecureTestGroup insecure_test_group{};

/// Integers mod a small prime q under addition, generator 1.
///
/// Offers no security whatsoever; it exists so that every algebraic identity
/// of the scheme can be checked exhaustively against brute-force oracles.
/// Scalars and points are both 4-byte big-endian on the wire.
class MockGroup {
 public:
  struct Scalar {
    std::uint32_t value = 0;
    auto operator<=>(const Scalar&) const = default;
  };
  struct Point {
    std::uint32_t value = 0;
    auto operator<=>(const Point&) const = default;
  };

  MockGroup(std::uint32_t q, InsecureTestGroup) : q_(q) {
    if (!is_prime(q)) throw std::invalid_argument("mock group order must be prime");
  }

  std::uint32_t order() const { return q_; }

  GroupParams params() const {
    Bytes q;
    put_be32(q, q_);
    return GroupParams{GroupId::Mock, q, encode(generator()), scalar_bytes(), point_bytes()};
  }
  std::size_t scalar_bytes() const { return 4; }
  std::size_t point_bytes() const { return 4; }

  Scalar scalar(std::uint64_t v) const { return {static_cast<std::uint32_t>(v % q_)}; }
  Scalar add(Scalar a, Scalar b) const { return scalar(std::uint64_t{a.value} + b.value); }
  Scalar sub(Scalar a, Scalar b) const { return scalar(std::uint64_t{a.value} + q_ - b.value); }
  Scalar mul(Scalar a, Scalar b) const { return scalar(std::uint64_t{a.value} * b.value); }
  Scalar neg(Scalar a) const { return scalar(q_ - a.value); }
  bool is_zero(Scalar a) const { return a.value == 0; }

  Scalar random_scalar(Rng& rng) const {
    std::uniform_int_distribution<std::uint32_t> dist(1, q_ - 1);
    return {dist(rng)};
  }

  /// Digest read as a 256-bit big-endian integer, reduced mod q; zero maps to one.
  Scalar scalar_from_digest(const Digest& d) const {
    std::uint64_t acc = 0;
    for (auto byte : d) acc = ((acc << 8) | byte) % q_;
    return {acc == 0 ? 1u : static_cast<std::uint32_t>(acc)};
  }

  Bytes encode(Scalar s) const {
    Bytes out;
    put_be32(out, s.value);
    return out;
  }
  Scalar decode_scalar(ByteView in) const {
    if (in.size() != 4) throw DecodeError("mock scalar must be 4 bytes");
    auto v = get_be32(in);
    if (v >= q_) throw DecodeError("mock scalar out of range");
    return {v};
  }

  Point generator() const { return {1}; }
  Point identity() const { return {0}; }
  bool is_identity(Point p) const { return p.value == 0; }
  Point add(Point a, Point b) const { return {add(Scalar{a.value}, Scalar{b.value}).value}; }
  Point neg(Point a) const { return {neg(Scalar{a.value}).value}; }
  Point mul(Scalar k, Point p) const { return {mul(k, Scalar{p.value}).value}; }
  Point mul_gen(Scalar k) const { return {k.value}; }

  Bytes encode(Point p) const {
    Bytes out;
    put_be32(out, p.value);
    return out;
  }
  Point decode_point(ByteView in) const {
    if (in.size() != 4) throw DecodeError("mock point must be 4 bytes");
    auto v = get_be32(in);
    if (v >= q_) throw DecodeError("mock point out of range");
    return {v};
  }

  friend bool operator==(const MockGroup& a, const MockGroup& b) { return a.q_ == b.q_; }

 private:
  static bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  }

  std::uint32_t q_;
};

static_assert(PrimeOrderGroup<MockGroup>);

}  // namespace cbpre::group
