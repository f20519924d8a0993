#pragma once

// Straight-line reimplementation of the CB-PRE equations over Z_q with
// generator 1. Uses plain integer arithmetic and OpenSSL's one-shot digest,
// independent of the templated scheme, its group class and its hash helpers.

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cbpre::oracle {

class MockSchemeOracle {
 public:
  using Block = std::array<std::uint8_t, 32>;

  explicit MockSchemeOracle(std::uint64_t q) : q_(q) {}

  std::uint64_t q() const { return q_; }

  static std::vector<std::uint8_t> be4(std::uint64_t v) {
    return {static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
            static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
  }

  static std::vector<std::uint8_t> meta(std::uint32_t id, std::uint32_t t0) {
    auto out = be4(id);
    auto t = be4(t0);
    out.insert(out.end(), t.begin(), t.end());
    return out;
  }

  static Block digest(std::uint8_t tag, const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    std::vector<std::uint8_t> msg{tag};
    msg.insert(msg.end(), a.begin(), a.end());
    msg.insert(msg.end(), b.begin(), b.end());
    Block out{};
    unsigned int len = 0;
    if (EVP_Digest(msg.data(), msg.size(), out.data(), &len, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("EVP_Digest");
    }
    return out;
  }

  std::uint64_t to_field(const Block& d) const {
    std::uint64_t acc = 0;
    for (auto byte : d) acc = (acc * 256 + byte) % q_;
    return acc == 0 ? 1 : acc;
  }

  std::uint64_t H1(std::uint64_t point, std::uint32_t id) const { return to_field(digest(0x01, be4(point), be4(id))); }
  std::uint64_t H2(std::uint64_t scalar, const std::vector<std::uint8_t>& m) const {
    return to_field(digest(0x02, be4(scalar), m));
  }
  Block H3(const std::vector<std::uint8_t>& m, std::uint64_t point) const { return digest(0x03, m, be4(point)); }
  std::uint64_t H4(const Block& c, const std::vector<std::uint8_t>& m) const {
    return to_field(digest(0x04, std::vector<std::uint8_t>(c.begin(), c.end()), m));
  }

  static Block xor_blocks(const Block& a, const Block& b) {
    Block out{};
    for (std::size_t i = 0; i < 32; ++i) out[i] = a[i] ^ b[i];
    return out;
  }

  struct Key {
    std::uint64_t cert, r_a, d, P_pub;
    bool valid;
  };

  Key keygen(std::uint64_t alpha, std::uint64_t r_U, std::uint64_t r_t, std::uint32_t id) const {
    Key k{};
    std::uint64_t R_U = r_U % q_;
    std::uint64_t R_t = r_t % q_;
    k.cert = (R_U + R_t) % q_;
    std::uint64_t h = H1(k.cert, id);
    k.r_a = (h * r_t + alpha) % q_;
    k.d = (h * r_U + k.r_a) % q_;
    k.P_pub = k.d;
    k.valid = k.P_pub == (h * k.cert + alpha) % q_;
    return k;
  }

  std::uint64_t public_key(std::uint64_t cert, std::uint32_t id, std::uint64_t alpha) const {
    return (H1(cert, id) * cert + alpha) % q_;
  }

  struct Ct {
    Block C_A;
    std::uint64_t h_A, s_A;
  };

  Ct encrypt(const Block& M, std::uint64_t d, std::uint32_t id, std::uint32_t t0) const {
    auto m = meta(id, t0);
    std::uint64_t r = H2(d, m);
    std::uint64_t P_A = d;
    Ct c{};
    c.C_A = xor_blocks(M, H3(m, (r * P_A) % q_));
    c.h_A = H4(c.C_A, m);
    c.s_A = (r + q_ - (c.h_A * d) % q_) % q_;
    return c;
  }

  Block rekey(std::uint64_t d_A, std::uint32_t id_A, std::uint32_t t0, std::uint64_t P_B) const {
    auto m = meta(id_A, t0);
    std::uint64_t r = H2(d_A, m);
    return xor_blocks(H3(m, (r * d_A) % q_), H3(m, (r * P_B) % q_));
  }

  Block decrypt2(const Block& C_B, std::uint32_t id_A, std::uint32_t t0, std::uint64_t h_A, std::uint64_t s_A,
                 std::uint64_t P_A, std::uint64_t d_B) const {
    std::uint64_t R = (s_A + h_A * P_A) % q_;
    return xor_blocks(C_B, H3(meta(id_A, t0), (d_B * R) % q_));
  }

 private:
  std::uint64_t q_;
};

}  // namespace cbpre::oracle
