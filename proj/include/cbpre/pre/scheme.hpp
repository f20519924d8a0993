#pragma once

#include <utility>

#include "cbpre/pre/hash_suite.hpp"
#include "cbpre/pre/types.hpp"

// Certificate-based proxy re-encryption over any prime-order group.
//
// Every function is pure given its inputs; randomness is drawn only from the
// generator passed in, and each randomized step has a `_with` form taking the
// random scalar explicitly so tests can pin it.

namespace cbpre::pre {

template <group::PrimeOrderGroup G>
std::pair<PublicParams<G>, MasterSecret<G>> setup_with(const G& g, const typename G::Scalar& alpha) {
  if (g.is_zero(alpha)) throw InvalidRequest("master secret must be nonzero");
  PublicParams<G> pp{g, g.generator(), g.mul_gen(alpha)};
  return {std::move(pp), MasterSecret<G>{alpha}};
}

template <group::PrimeOrderGroup G>
std::pair<PublicParams<G>, MasterSecret<G>> setup(const G& g, group::Rng& rng) {
  return setup_with(g, g.random_scalar(rng));
}

/// User side of key generation, step one: R_U = r_U * P.
template <group::PrimeOrderGroup G>
std::pair<typename G::Scalar, CertRequest<G>> cert_request_with(const PublicParams<G>& pp, Identity id,
                                                                const typename G::Scalar& r_U) {
  if (pp.group.is_zero(r_U)) throw InvalidRequest("r_U must be nonzero");
  return {r_U, CertRequest<G>{id, pp.group.mul(r_U, pp.P)}};
}

template <group::PrimeOrderGroup G>
std::pair<typename G::Scalar, CertRequest<G>> cert_request(const PublicParams<G>& pp, Identity id,
                                                           group::Rng& rng) {
  return cert_request_with(pp, id, pp.group.random_scalar(rng));
}

/// CA side: Cert = R_U + r_t * P, r_a = H1(Cert || id) * r_t + alpha.
///
/// The CA is assumed to have authenticated `req.id` before calling this.
template <group::PrimeOrderGroup G>
CertResponse<G> ca_issue_with(const PublicParams<G>& pp, const MasterSecret<G>& msk, const CertRequest<G>& req,
                              const typename G::Scalar& r_t) {
  const auto& g = pp.group;
  if (g.is_identity(req.R_U)) throw InvalidRequest("R_U is the identity element");
  if (g.is_zero(r_t)) throw InvalidRequest("r_t must be nonzero");
  auto cert = g.add(req.R_U, g.mul(r_t, pp.P));
  if (g.is_identity(cert)) throw InvalidRequest("certificate point collapsed to identity");
  auto r_a = g.add(g.mul(h1(g, cert, req.id), r_t), msk.alpha);
  return CertResponse<G>{r_a, Certificate<G>{cert}};
}

template <group::PrimeOrderGroup G>
CertResponse<G> ca_issue(const PublicParams<G>& pp, const MasterSecret<G>& msk, const CertRequest<G>& req,
                         group::Rng& rng) {
  return ca_issue_with(pp, msk, req, pp.group.random_scalar(rng));
}

/// P_U = H1(Cert || id) * Cert + P_alpha.
template <group::PrimeOrderGroup G>
typename G::Point derive_public_key(const PublicParams<G>& pp, const Certificate<G>& cert, Identity id) {
  const auto& g = pp.group;
  return g.add(g.mul(h1(g, cert.point, id), cert.point), pp.P_alpha);
}

/// User side, step two: d = H1(Cert || id) * r_U + r_a, accepted only when
/// d * P matches the public key implied by the certificate.
template <group::PrimeOrderGroup G>
KeyPair<G> finalize_key(const PublicParams<G>& pp, const typename G::Scalar& r_U, const CertResponse<G>& resp,
                        Identity id) {
  const auto& g = pp.group;
  if (g.is_identity(resp.cert.point)) throw ValidationFailed("certificate is the identity element");
  auto d = g.add(g.mul(h1(g, resp.cert.point, id), r_U), resp.r_a);
  auto P_pub = g.mul(d, pp.P);
  if (!(P_pub == derive_public_key(pp, resp.cert, id))) {
    throw ValidationFailed("ECQV validation equation does not hold");
  }
  return KeyPair<G>{d, P_pub, resp.cert, id};
}

/// Re-checks a stored key pair against its certificate.
template <group::PrimeOrderGroup G>
bool validate_key(const PublicParams<G>& pp, const KeyPair<G>& kp) {
  const auto& g = pp.group;
  return !g.is_identity(kp.cert.point) && g.mul(kp.d, pp.P) == kp.P_pub &&
         kp.P_pub == derive_public_key(pp, kp.cert, kp.id);
}

/// Full key generation in one call (user and CA in the same process).
template <group::PrimeOrderGroup G>
KeyPair<G> certified_keygen(const PublicParams<G>& pp, const MasterSecret<G>& msk, Identity id, group::Rng& rng) {
  auto [r_U, req] = cert_request(pp, id, rng);
  return finalize_key(pp, r_U, ca_issue(pp, msk, req, rng), id);
}

namespace detail {

template <group::PrimeOrderGroup G>
typename G::Scalar nonce(const PublicParams<G>& pp, const KeyPair<G>& kp, const Metadata& meta) {
  return h2(pp.group, kp.d, meta);
}

}  // namespace detail

/// r = H2(d_A || meta); C_A = M xor H3(meta || r P_A); h_A = H4(C_A || meta);
/// s_A = r - h_A d_A. Deterministic in (key, M, T0), so callers must never
/// reuse a timestamp for the same key.
template <group::PrimeOrderGroup G>
Ciphertext<G> encrypt(const PublicParams<G>& pp, const MessageBlock& m, const KeyPair<G>& kp_A, std::uint32_t t0) {
  const auto& g = pp.group;
  Metadata meta{kp_A.id, t0};
  auto r = detail::nonce(pp, kp_A, meta);
  Block32 c_a = m.bytes ^ h3(g, meta, g.mul(r, kp_A.P_pub));
  auto h_a = h4(g, c_a, meta);
  auto s_a = g.sub(r, g.mul(h_a, kp_A.d));
  return Ciphertext<G>{c_a, meta, h_a, s_a};
}

template <group::PrimeOrderGroup G>
MessageBlock decrypt1(const PublicParams<G>& pp, const Ciphertext<G>& c, const KeyPair<G>& kp_A) {
  const auto& g = pp.group;
  if (c.meta.id != kp_A.id) throw AuthError("ciphertext was not produced for this key");
  auto r = detail::nonce(pp, kp_A, c.meta);
  MessageBlock m{c.C_A ^ h3(g, c.meta, g.mul(r, kp_A.P_pub))};
  if (!(h4(g, c.C_A, c.meta) == c.h_A)) throw AuthError("h_A check failed");
  if (!(g.sub(r, g.mul(c.h_A, kp_A.d)) == c.s_A)) throw AuthError("s_A check failed");
  return m;
}

/// rk = H3(meta || r P_A) xor H3(meta || r P_B), P_B derived from B's certificate.
template <group::PrimeOrderGroup G>
ReEncKey rekey(const PublicParams<G>& pp, const KeyPair<G>& kp_A, Identity id_B, const Certificate<G>& cert_B,
               const Metadata& meta) {
  const auto& g = pp.group;
  if (meta.id != kp_A.id) throw InvalidRequest("metadata belongs to a different delegator");
  auto r = detail::nonce(pp, kp_A, meta);
  auto P_B = derive_public_key(pp, cert_B, id_B);
  return ReEncKey{h3(g, meta, g.mul(r, kp_A.P_pub)) ^ h3(g, meta, g.mul(r, P_B))};
}

/// The delegator's own pad H3(meta || r P_A), so that C_A xor pad = M.
/// Only used by the no-re-encryption baseline, where A hands it over directly.
template <group::PrimeOrderGroup G>
Block32 delegator_pad(const PublicParams<G>& pp, const KeyPair<G>& kp_A, const Metadata& meta) {
  const auto& g = pp.group;
  if (meta.id != kp_A.id) throw InvalidRequest("metadata belongs to a different delegator");
  return h3(g, meta, g.mul(detail::nonce(pp, kp_A, meta), kp_A.P_pub));
}

template <group::PrimeOrderGroup G>
ReEncCiphertext<G> reencrypt(const Ciphertext<G>& c, const ReEncKey& rk, Identity id_B) {
  return ReEncCiphertext<G>{rk.bytes ^ c.C_A, c.C_A, c.meta, id_B, c.h_A, c.s_A};
}

/// R = s_A P + h_A P_A (= r P for honest ciphertexts); M = C_B xor H3(meta || d_B R).
///
/// Only h_A is checked: neither s_A nor C_B is bound by H4, so tampering
/// with those yields a wrong block rather than an error.
template <group::PrimeOrderGroup G>
MessageBlock decrypt2(const PublicParams<G>& pp, const ReEncCiphertext<G>& c2, const KeyPair<G>& kp_B,
                      const typename G::Point& P_A) {
  const auto& g = pp.group;
  if (c2.id_B != kp_B.id) throw AuthError("re-encrypted ciphertext addressed to another delegate");
  auto R = g.add(g.mul(c2.s_A, pp.P), g.mul(c2.h_A, P_A));
  MessageBlock m{c2.C_B ^ h3(g, c2.meta, g.mul(kp_B.d, R))};
  if (!(h4(g, c2.C_A, c2.meta) == c2.h_A)) throw AuthError("h_A check failed");
  return m;
}

}  // namespace cbpre::pre
