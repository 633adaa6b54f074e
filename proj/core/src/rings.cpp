#include "padicrmt/rings.hpp"

#include <algorithm>

namespace padicrmt {

std::uint64_t smallest_nonresidue(std::uint32_t p) {
  if (p == 2) throw UnsupportedPrime("no quadratic non-residue mod 2");
  for (std::uint64_t c = 2; c < p; ++c) {
    // Euler's criterion
    std::uint64_t r = 1, b = c, e = (p - 1) / 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    if (r == p - 1) return c;
  }
  throw InvalidParams("no non-residue found");
}

QuadDvr QuadDvr::unramified(const Modulus& m, std::uint64_t nonresidue) {
  if (m.p() == 2) throw UnsupportedPrime("quadratic rings are built for odd p only");
  return QuadDvr(m, false, nonresidue % m.pN(), 1);
}

QuadDvr QuadDvr::ramified(const Modulus& m, std::uint64_t unit) {
  if (m.p() == 2) throw UnsupportedPrime("quadratic rings are built for odd p only");
  return QuadDvr(m, true, m.mul(m.p() % m.pN(), unit % m.pN()), unit % m.pN());
}

int QuadDvr::val(Elem x) const {
  const int va = m_.val(x.a), vb = m_.val(x.b);
  if (!ramified_) return std::min(va, vb);
  // zero components count as saturated at 2N
  const int wa = 2 * va;
  const int wb = (x.b == 0) ? 2 * m_.N() : 2 * vb + 1;
  return std::min(wa, wb);
}

QuadElem QuadDvr::div_uniformizer(Elem x, int k) const {
  if (!ramified_) return {x.a / m_.ppow(k), x.b / m_.ppow(k)};
  for (int i = 0; i < k; ++i) {
    // (a + b w)/w = b + (a/p) u^{-1} w, exact when p | a
    Elem y{x.b, m_.mul(x.a / m_.p(), unit_inv_)};
    x = y;
  }
  return x;
}

QuadElem QuadDvr::mul_uniformizer(Elem x, int k) const {
  if (!ramified_) {
    const std::uint64_t s = m_.ppow(k) % m_.pN();
    return {m_.mul(x.a, s), m_.mul(x.b, s)};
  }
  for (int i = 0; i < k; ++i) x = mul(x, gen());
  return x;
}

QuadElem QuadDvr::inv_unit(Elem x) const {
  // (a - b w) / (a^2 - w^2 b^2)
  const std::uint64_t nrm = m_.sub(m_.mul(x.a, x.a), m_.mul(sq_, m_.mul(x.b, x.b)));
  const std::uint64_t ni = m_.inv(nrm);
  return {m_.mul(x.a, ni), m_.mul(m_.neg(x.b), ni)};
}

QuotientRing::QuotientRing(const Modulus& m, std::vector<std::uint64_t> z) : m_(m), z_(std::move(z)) {
  r_ = static_cast<int>(z_.size()) - 1;
  if (r_ < 1 || r_ > kMaxQuotientDegree) throw InvalidParams("quotient modulus degree out of range");
  if (z_.back() != 1 % m.pN()) throw InvalidParams("quotient modulus must be monic");
}

QuotientRing::Elem QuotientRing::mul(const Elem& x, const Elem& y) const {
  std::array<std::uint64_t, 2 * kMaxQuotientDegree> t{};
  for (int i = 0; i < r_; ++i) {
    if (!x[i]) continue;
    for (int j = 0; j < r_; ++j) t[i + j] = m_.add(t[i + j], m_.mul(x[i], y[j]));
  }
  for (int k = 2 * r_ - 2; k >= r_; --k) {
    const std::uint64_t c = t[k];
    if (!c) continue;
    for (int i = 0; i < r_; ++i) t[k - r_ + i] = m_.sub(t[k - r_ + i], m_.mul(c, z_[i]));
  }
  Elem e{};
  for (int i = 0; i < r_; ++i) e[i] = t[i];
  return e;
}

}  // namespace padicrmt
