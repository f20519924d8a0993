#pragma once

#include "cbpre/pre/types.hpp"
#include "cbpre/sha256.hpp"

namespace cbpre::pre {

/// Domain-separation prefixes for the four scheme hashes.
enum class HashTag : std::uint8_t { H1 = 0x01, H2 = 0x02, H3 = 0x03, H4 = 0x04 };

/// SHA-256 over `tag || parts...`.
template <class... Parts>
Digest tagged_digest(HashTag tag, const Parts&... parts) {
  Sha256 h;
  h.update(static_cast<std::uint8_t>(tag));
  (h.update(ByteView(parts.data(), parts.size())), ...);
  return h.finish();
}

/// H1(point || id4) -> F_q*
template <group::PrimeOrderGroup G>
typename G::Scalar h1(const G& g, const typename G::Point& point, Identity id) {
  return g.scalar_from_digest(tagged_digest(HashTag::H1, g.encode(point), id.bytes()));
}

/// H2(scalar || meta8) -> F_q*
template <group::PrimeOrderGroup G>
typename G::Scalar h2(const G& g, const typename G::Scalar& s, const Metadata& meta) {
  return g.scalar_from_digest(tagged_digest(HashTag::H2, g.encode(s), meta.bytes()));
}

/// H3(meta8 || point) -> 32-byte XOR pad (raw digest, no reduction).
template <group::PrimeOrderGroup G>
Block32 h3(const G& g, const Metadata& meta, const typename G::Point& point) {
  return tagged_digest(HashTag::H3, meta.bytes(), g.encode(point));
}

/// H4(block32 || meta8) -> F_q*
template <group::PrimeOrderGroup G>
typename G::Scalar h4(const G& g, const Block32& block, const Metadata& meta) {
  return g.scalar_from_digest(tagged_digest(HashTag::H4, block, meta.bytes()));
}

}  // namespace cbpre::pre
