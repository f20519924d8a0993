#pragma once

#include <concepts>
#include <cstdint>
#include <random>

#include "cbpre/bytes.hpp"
#include "cbpre/sha256.hpp"

namespace cbpre::group {

/// Deterministic, seedable generator used for every random draw in the project.
using Rng = std::mt19937_64;

/// One-byte tag prefixing serialized group parameters.
enum class GroupId : std::uint8_t {
  Production256 = 0x01,
  Mock = 0x7f,
};

/// Public description of a group instance.
struct GroupParams {
  GroupId group_id;
  Bytes order;  // q, big-endian, minimal length
  Bytes generator;
  std::size_t scalar_bytes;
  std::size_t point_bytes;
};

/// Prime-order group written additively, with its scalar field F_q.
///
/// Scalars and points are immutable values. Group instances are cheap to
/// copy and safe to share across threads.
template <class G>
concept PrimeOrderGroup =
    std::copy_constructible<G> && std::regular<typename G::Scalar> &&
    std::equality_comparable<typename G::Point> && std::copy_constructible<typename G::Point> &&
    requires(const G& g, const typename G::Scalar& s, const typename G::Point& p, ByteView bytes,
             const Digest& digest, Rng& rng) {
      { g.params() } -> std::same_as<GroupParams>;
      { g.scalar_bytes() } -> std::same_as<std::size_t>;
      { g.point_bytes() } -> std::same_as<std::size_t>;

      { g.scalar(std::uint64_t{}) } -> std::same_as<typename G::Scalar>;
      { g.add(s, s) } -> std::same_as<typename G::Scalar>;
      { g.sub(s, s) } -> std::same_as<typename G::Scalar>;
      { g.mul(s, s) } -> std::same_as<typename G::Scalar>;
      { g.neg(s) } -> std::same_as<typename G::Scalar>;
      { g.is_zero(s) } -> std::same_as<bool>;
      { g.random_scalar(rng) } -> std::same_as<typename G::Scalar>;
      { g.scalar_from_digest(digest) } -> std::same_as<typename G::Scalar>;
      { g.encode(s) } -> std::same_as<Bytes>;
      { g.decode_scalar(bytes) } -> std::same_as<typename G::Scalar>;

      { g.generator() } -> std::same_as<typename G::Point>;
      { g.identity() } -> std::same_as<typename G::Point>;
      { g.is_identity(p) } -> std::same_as<bool>;
      { g.add(p, p) } -> std::same_as<typename G::Point>;
      { g.neg(p) } -> std::same_as<typename G::Point>;
      { g.mul(s, p) } -> std::same_as<typename G::Point>;
      { g.mul_gen(s) } -> std::same_as<typename G::Point>;
      { g.encode(p) } -> std::same_as<Bytes>;
      { g.decode_point(bytes) } -> std::same_as<typename G::Point>;
    };

Bytes serialize(const GroupParams& params);

}  // namespace cbpre::group
