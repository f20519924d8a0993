#pragma once

#include "cbpre/pre/types.hpp"

namespace cbpre::pre {

/// Payload layer for arbitrary-length sensor readings.
///
/// A fresh 32-byte content key travels through the PRE scheme as the message
/// block; the payload itself is XORed with a SHA-256 counter keystream under
/// that key and sealed with a 32-byte tag. Layout: ciphertext || tag.
Bytes dem_seal(const Block32& content_key, const Metadata& meta, ByteView payload);

/// Throws AuthError when the tag does not verify.
Bytes dem_open(const Block32& content_key, const Metadata& meta, ByteView sealed);

}  // namespace cbpre::pre
