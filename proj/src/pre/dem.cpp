#include "cbpre/pre/dem.hpp"

#include <algorithm>

#include "cbpre/sha256.hpp"

namespace cbpre::pre {

namespace {

constexpr std::uint8_t kStreamTag = 0x10;
constexpr std::uint8_t kMacTag = 0x11;
constexpr std::size_t kTagBytes = 32;

void apply_keystream(const Block32& key, const Metadata& meta, std::span<std::uint8_t> data) {
  auto meta_bytes = meta.bytes();
  for (std::size_t offset = 0, counter = 0; offset < data.size(); offset += 32, ++counter) {
    Bytes ctr;
    put_be32(ctr, static_cast<std::uint32_t>(counter));
    auto pad = Sha256().update(kStreamTag).update(key).update(meta_bytes).update(ctr).finish();
    for (std::size_t i = 0; i < 32 && offset + i < data.size(); ++i) data[offset + i] ^= pad[i];
  }
}

Digest mac(const Block32& key, const Metadata& meta, ByteView ct) {
  return Sha256().update(kMacTag).update(key).update(meta.bytes()).update(ct).finish();
}

}  // namespace

Bytes dem_seal(const Block32& content_key, const Metadata& meta, ByteView payload) {
  Bytes out(payload.begin(), payload.end());
  apply_keystream(content_key, meta, out);
  append(out, mac(content_key, meta, out));
  return out;
}

Bytes dem_open(const Block32& content_key, const Metadata& meta, ByteView sealed) {
  if (sealed.size() < kTagBytes) throw AuthError("sealed payload shorter than its tag");
  auto ct = sealed.first(sealed.size() - kTagBytes);
  auto expected = mac(content_key, meta, ct);
  if (!std::equal(expected.begin(), expected.end(), sealed.begin() + static_cast<std::ptrdiff_t>(ct.size()))) {
    throw AuthError("payload tag mismatch");
  }
  Bytes out(ct.begin(), ct.end());
  apply_keystream(content_key, meta, out);
  return out;
}

}  // namespace cbpre::pre
