#include "cbpre/group/p256_group.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>

#include <algorithm>
#include <stdexcept>

namespace cbpre::group {

namespace {

struct BnCtxDeleter {
  void operator()(BN_CTX* c) const { BN_CTX_free(c); }
};
struct BnDeleter {
  void operator()(BIGNUM* b) const { BN_free(b); }
};
struct PointDeleter {
  void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};

using CtxPtr = std::unique_ptr<BN_CTX, BnCtxDeleter>;
using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using PointPtr = std::unique_ptr<EC_POINT, PointDeleter>;

[[noreturn]] void fail(const char* what) { throw std::runtime_error(std::string("openssl: ") + what); }

CtxPtr new_ctx() {
  CtxPtr ctx(BN_CTX_new());
  if (!ctx) fail("BN_CTX_new");
  return ctx;
}

BnPtr to_bn(std::span<const std::uint8_t> be) {
  BnPtr bn(BN_bin2bn(be.data(), static_cast<int>(be.size()), nullptr));
  if (!bn) fail("BN_bin2bn");
  return bn;
}

BnPtr new_bn() {
  BnPtr bn(BN_new());
  if (!bn) fail("BN_new");
  return bn;
}

}  // namespace

struct P256Group::Shared {
  EC_GROUP* group = nullptr;
  BIGNUM* order = nullptr;
  std::array<std::uint8_t, 32> order_be{};

  Shared() {
    group = EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1);
    if (group == nullptr) fail("EC_GROUP_new_by_curve_name");
    order = BN_dup(EC_GROUP_get0_order(group));
    if (order == nullptr) fail("BN_dup");
    if (BN_bn2binpad(order, order_be.data(), 32) != 32) fail("BN_bn2binpad");
  }
  ~Shared() {
    BN_free(order);
    EC_GROUP_free(group);
  }
  Shared(const Shared&) = delete;
  Shared& operator=(const Shared&) = delete;
};

namespace {

std::array<std::uint8_t, 32> bn_to_array(const BIGNUM* bn) {
  std::array<std::uint8_t, 32> out{};
  if (BN_bn2binpad(bn, out.data(), 32) != 32) fail("BN_bn2binpad");
  return out;
}

}  // namespace

P256Group::P256Group() {
  static const std::shared_ptr<const Shared> instance = std::make_shared<const Shared>();
  shared_ = instance;
}

const ec_group_st* P256Group::native() const { return shared_->group; }

const std::array<std::uint8_t, 32>& P256Group::order_bytes() const { return shared_->order_be; }

GroupParams P256Group::params() const {
  Bytes q(shared_->order_be.begin(), shared_->order_be.end());
  return GroupParams{GroupId::Production256, q, encode(generator()), scalar_bytes(), point_bytes()};
}

P256Group::Scalar P256Group::scalar(std::uint64_t v) const {
  auto bn = new_bn();
  if (BN_set_word(bn.get(), v) != 1) fail("BN_set_word");
  Scalar s;
  s.be_ = bn_to_array(bn.get());  // v < 2^64 < q
  return s;
}

P256Group::Scalar P256Group::add(const Scalar& a, const Scalar& b) const {
  auto ctx = new_ctx();
  auto x = to_bn(a.be_), y = to_bn(b.be_), r = new_bn();
  if (BN_mod_add(r.get(), x.get(), y.get(), shared_->order, ctx.get()) != 1) fail("BN_mod_add");
  Scalar s;
  s.be_ = bn_to_array(r.get());
  return s;
}

P256Group::Scalar P256Group::sub(const Scalar& a, const Scalar& b) const {
  auto ctx = new_ctx();
  auto x = to_bn(a.be_), y = to_bn(b.be_), r = new_bn();
  if (BN_mod_sub(r.get(), x.get(), y.get(), shared_->order, ctx.get()) != 1) fail("BN_mod_sub");
  Scalar s;
  s.be_ = bn_to_array(r.get());
  return s;
}

P256Group::Scalar P256Group::mul(const Scalar& a, const Scalar& b) const {
  auto ctx = new_ctx();
  auto x = to_bn(a.be_), y = to_bn(b.be_), r = new_bn();
  if (BN_mod_mul(r.get(), x.get(), y.get(), shared_->order, ctx.get()) != 1) fail("BN_mod_mul");
  Scalar s;
  s.be_ = bn_to_array(r.get());
  return s;
}

P256Group::Scalar P256Group::neg(const Scalar& a) const { return sub(Scalar{}, a); }

bool P256Group::is_zero(const Scalar& a) const {
  return std::all_of(a.be_.begin(), a.be_.end(), [](std::uint8_t b) { return b == 0; });
}

P256Group::Scalar P256Group::random_scalar(Rng& rng) const {
  for (;;) {
    Scalar s;
    for (std::size_t i = 0; i < 4; ++i) {
      auto word = rng();
      for (std::size_t j = 0; j < 8; ++j) s.be_[i * 8 + j] = static_cast<std::uint8_t>(word >> (56 - 8 * j));
    }
    if (s.be_ < shared_->order_be && !is_zero(s)) return s;
  }
}

P256Group::Scalar P256Group::scalar_from_digest(const Digest& d) const {
  auto ctx = new_ctx();
  auto x = to_bn(d), r = new_bn();
  if (BN_nnmod(r.get(), x.get(), shared_->order, ctx.get()) != 1) fail("BN_nnmod");
  if (BN_is_zero(r.get())) BN_one(r.get());
  Scalar s;
  s.be_ = bn_to_array(r.get());
  return s;
}

Bytes P256Group::encode(const Scalar& s) const { return Bytes(s.be_.begin(), s.be_.end()); }

P256Group::Scalar P256Group::decode_scalar(ByteView in) const {
  if (in.size() != 32) throw DecodeError("P-256 scalar must be 32 bytes");
  Scalar s;
  std::copy(in.begin(), in.end(), s.be_.begin());
  if (!(s.be_ < shared_->order_be)) throw DecodeError("P-256 scalar not below group order");
  return s;
}

P256Group::Point P256Group::wrap(ec_point_st* raw) const {
  PointPtr owned(raw);
  const EC_GROUP* group = shared_->group;
  Point p;
  if (EC_POINT_is_at_infinity(group, owned.get()) == 1) {
    p.enc_.fill(0);
  } else {
    auto ctx = new_ctx();
    auto n = EC_POINT_point2oct(group, owned.get(), POINT_CONVERSION_COMPRESSED, p.enc_.data(),
                                p.enc_.size(), ctx.get());
    if (n != p.enc_.size()) fail("EC_POINT_point2oct");
  }
  p.pt_ = std::shared_ptr<const EC_POINT>(owned.release(), [](const EC_POINT* q) {
    EC_POINT_free(const_cast<EC_POINT*>(q));
  });
  return p;
}

namespace {

PointPtr new_point(const EC_GROUP* group) {
  PointPtr p(EC_POINT_new(group));
  if (!p) fail("EC_POINT_new");
  return p;
}

}  // namespace

P256Group::Point P256Group::generator() const {
  PointPtr p(EC_POINT_dup(EC_GROUP_get0_generator(shared_->group), shared_->group));
  if (!p) fail("EC_POINT_dup");
  return wrap(p.release());
}

P256Group::Point P256Group::identity() const {
  auto p = new_point(shared_->group);
  if (EC_POINT_set_to_infinity(shared_->group, p.get()) != 1) fail("EC_POINT_set_to_infinity");
  return wrap(p.release());
}

bool P256Group::is_identity(const Point& p) const {
  return EC_POINT_is_at_infinity(shared_->group, p.pt_.get()) == 1;
}

P256Group::Point P256Group::add(const Point& a, const Point& b) const {
  auto ctx = new_ctx();
  auto r = new_point(shared_->group);
  if (EC_POINT_add(shared_->group, r.get(), a.pt_.get(), b.pt_.get(), ctx.get()) != 1) fail("EC_POINT_add");
  return wrap(r.release());
}

P256Group::Point P256Group::neg(const Point& a) const {
  auto ctx = new_ctx();
  PointPtr r(EC_POINT_dup(a.pt_.get(), shared_->group));
  if (!r) fail("EC_POINT_dup");
  if (EC_POINT_invert(shared_->group, r.get(), ctx.get()) != 1) fail("EC_POINT_invert");
  return wrap(r.release());
}

P256Group::Point P256Group::mul(const Scalar& k, const Point& p) const {
  auto ctx = new_ctx();
  auto kb = to_bn(k.be_);
  auto r = new_point(shared_->group);
  if (EC_POINT_mul(shared_->group, r.get(), nullptr, p.pt_.get(), kb.get(), ctx.get()) != 1) {
    fail("EC_POINT_mul");
  }
  return wrap(r.release());
}

P256Group::Point P256Group::mul_gen(const Scalar& k) const {
  auto ctx = new_ctx();
  auto kb = to_bn(k.be_);
  auto r = new_point(shared_->group);
  if (EC_POINT_mul(shared_->group, r.get(), kb.get(), nullptr, nullptr, ctx.get()) != 1) {
    fail("EC_POINT_mul");
  }
  return wrap(r.release());
}

Bytes P256Group::encode(const Point& p) const { return Bytes(p.enc_.begin(), p.enc_.end()); }

P256Group::Point P256Group::decode_point(ByteView in) const {
  if (in.size() != 33) throw DecodeError("P-256 point must be 33 bytes");
  if (std::all_of(in.begin(), in.end(), [](std::uint8_t b) { return b == 0; })) return identity();
  if (in[0] != 0x02 && in[0] != 0x03) throw DecodeError("P-256 point must use compressed form");
  auto ctx = new_ctx();
  auto r = new_point(shared_->group);
  if (EC_POINT_oct2point(shared_->group, r.get(), in.data(), in.size(), ctx.get()) != 1) {
    throw DecodeError("bytes do not encode a P-256 point");
  }
  auto p = wrap(r.release());
  if (!std::equal(in.begin(), in.end(), p.enc_.begin())) throw DecodeError("non-canonical P-256 point");
  return p;
}

Bytes serialize(const GroupParams& params) {
  Bytes out{static_cast<std::uint8_t>(params.group_id)};
  if (params.group_id == GroupId::Mock) {
    // Mock groups carry their order; the production curve is implied by the tag.
    Bytes q = params.order;
    while (q.size() < 4) q.insert(q.begin(), 0);
    append(out, q);
  }
  return out;
}

}  // namespace cbpre::group
