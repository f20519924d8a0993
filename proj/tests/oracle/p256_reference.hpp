#pragma once

// Textbook affine double-and-add on P-256 using only BIGNUM field
// arithmetic. Shares nothing with EC_POINT_mul, so it serves as an
// independent oracle for the production group.

#include <openssl/bn.h>
#include <openssl/ec.h>

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>

#include "cbpre/group/p256_group.hpp"

namespace cbpre::oracle {

class P256Reference {
 public:
  struct Affine {
    std::shared_ptr<BIGNUM> x, y;
  };
  using MaybePoint = std::optional<Affine>;  // nullopt = point at infinity

  explicit P256Reference(const group::P256Group& g) : ctx_(BN_CTX_new(), BN_CTX_free) {
    p_ = fresh();
    a_ = fresh();
    b_ = fresh();
    if (EC_GROUP_get_curve(g.native(), p_.get(), a_.get(), b_.get(), ctx_.get()) != 1) {
      throw std::runtime_error("EC_GROUP_get_curve");
    }
    Affine gen{fresh(), fresh()};
    if (EC_POINT_get_affine_coordinates(g.native(), EC_GROUP_get0_generator(g.native()), gen.x.get(), gen.y.get(),
                                        ctx_.get()) != 1) {
      throw std::runtime_error("EC_POINT_get_affine_coordinates");
    }
    generator_ = gen;
  }

  MaybePoint generator() const { return generator_; }

  MaybePoint add(const MaybePoint& P, const MaybePoint& Q) const {
    if (!P) return Q;
    if (!Q) return P;
    auto lambda = fresh();
    if (BN_cmp(P->x.get(), Q->x.get()) == 0) {
      auto sum = fresh();
      BN_mod_add(sum.get(), P->y.get(), Q->y.get(), p_.get(), ctx_.get());
      if (BN_is_zero(sum.get())) return std::nullopt;  // P = -Q
      // lambda = (3x^2 + a) / 2y
      auto num = fresh(), den = fresh(), three = fresh(), two = fresh();
      BN_set_word(three.get(), 3);
      BN_set_word(two.get(), 2);
      BN_mod_sqr(num.get(), P->x.get(), p_.get(), ctx_.get());
      BN_mod_mul(num.get(), num.get(), three.get(), p_.get(), ctx_.get());
      BN_mod_add(num.get(), num.get(), a_.get(), p_.get(), ctx_.get());
      BN_mod_mul(den.get(), P->y.get(), two.get(), p_.get(), ctx_.get());
      BN_mod_inverse(den.get(), den.get(), p_.get(), ctx_.get());
      BN_mod_mul(lambda.get(), num.get(), den.get(), p_.get(), ctx_.get());
    } else {
      auto num = fresh(), den = fresh();
      BN_mod_sub(num.get(), Q->y.get(), P->y.get(), p_.get(), ctx_.get());
      BN_mod_sub(den.get(), Q->x.get(), P->x.get(), p_.get(), ctx_.get());
      BN_mod_inverse(den.get(), den.get(), p_.get(), ctx_.get());
      BN_mod_mul(lambda.get(), num.get(), den.get(), p_.get(), ctx_.get());
    }
    Affine R{fresh(), fresh()};
    BN_mod_sqr(R.x.get(), lambda.get(), p_.get(), ctx_.get());
    BN_mod_sub(R.x.get(), R.x.get(), P->x.get(), p_.get(), ctx_.get());
    BN_mod_sub(R.x.get(), R.x.get(), Q->x.get(), p_.get(), ctx_.get());
    auto dx = fresh();
    BN_mod_sub(dx.get(), P->x.get(), R.x.get(), p_.get(), ctx_.get());
    BN_mod_mul(R.y.get(), lambda.get(), dx.get(), p_.get(), ctx_.get());
    BN_mod_sub(R.y.get(), R.y.get(), P->y.get(), p_.get(), ctx_.get());
    return R;
  }

  /// Left-to-right double-and-add over the big-endian scalar bytes.
  MaybePoint mul(std::span<const std::uint8_t> k_be, const MaybePoint& P) const {
    MaybePoint acc;
    for (auto byte : k_be) {
      for (int bit = 7; bit >= 0; --bit) {
        acc = add(acc, acc);
        if ((byte >> bit) & 1) acc = add(acc, P);
      }
    }
    return acc;
  }

  /// SEC1 compressed encoding; 33 zero bytes for infinity.
  std::array<std::uint8_t, 33> encode(const MaybePoint& P) const {
    std::array<std::uint8_t, 33> out{};
    if (!P) return out;
    out[0] = BN_is_odd(P->y.get()) ? 0x03 : 0x02;
    BN_bn2binpad(P->x.get(), out.data() + 1, 32);
    return out;
  }

 private:
  std::shared_ptr<BIGNUM> fresh() const { return std::shared_ptr<BIGNUM>(BN_new(), BN_free); }

  std::unique_ptr<BN_CTX, decltype(&BN_CTX_free)> ctx_;
  std::shared_ptr<BIGNUM> p_, a_, b_;
  MaybePoint generator_;
};

}  // namespace cbpre::oracle
