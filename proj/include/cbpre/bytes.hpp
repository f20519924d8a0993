#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cbpre {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Fixed 32-byte block: message blocks, XOR pads, re-encryption keys.
using Block32 = std::array<std::uint8_t, 32>;

/// Raised whenever external bytes cannot be decoded into a valid value.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Block32 operator^(const Block32& a, const Block32& b) {
  Block32 out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

inline bool is_zero(const Block32& b) {
  std::uint8_t acc = 0;
  for (auto v : b) acc |= v;
  return acc == 0;
}

inline void put_be32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_be64(Bytes& out, std::uint64_t v) {
  put_be32(out, static_cast<std::uint32_t>(v >> 32));
  put_be32(out, static_cast<std::uint32_t>(v));
}

inline std::uint32_t get_be32(ByteView in) {
  if (in.size() < 4) throw DecodeError("truncated 32-bit field");
  return (std::uint32_t{in[0]} << 24) | (std::uint32_t{in[1]} << 16) |
         (std::uint32_t{in[2]} << 8) | std::uint32_t{in[3]};
}

inline std::uint64_t get_be64(ByteView in) {
  if (in.size() < 8) throw DecodeError("truncated 64-bit field");
  return (std::uint64_t{get_be32(in)} << 32) | get_be32(in.subspan(4));
}

inline void append(Bytes& out, ByteView in) {
  if (in.empty()) return;
  auto n = out.size();
  out.resize(n + in.size());
  std::memcpy(out.data() + n, in.data(), in.size());
}

std::string to_hex(ByteView in);
Bytes from_hex(std::string_view hex);

/// Sequential reader over a byte span; every read is bounds-checked.
class ByteReader {
 public:
  explicit ByteReader(ByteView in) : in_(in) {}

  ByteView take(std::size_t n) {
    if (n > in_.size() - pos_) throw DecodeError("truncated input");
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() { return get_be32(take(4)); }
  std::uint64_t u64() { return get_be64(take(8)); }
  Block32 block() {
    Block32 b{};
    auto v = take(32);
    std::copy(v.begin(), v.end(), b.begin());
    return b;
  }
  std::size_t remaining() const { return in_.size() - pos_; }
  void expect_end() const {
    if (remaining() != 0) throw DecodeError("trailing bytes");
  }

 private:
  ByteView in_;
  std::size_t pos_ = 0;
};

}  // namespace cbpre
