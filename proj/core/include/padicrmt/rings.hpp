#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "padicrmt/modular.hpp"

namespace padicrmt {

// Z/p^N seen as a discrete valuation ring truncation, for Smith elimination.
struct ZpDvr {
  using Elem = std::uint64_t;
  const Modulus& m;

  Elem zero() const { return 0; }
  Elem one() const { return 1 % m.pN(); }
  Elem add(Elem a, Elem b) const { return m.add(a, b); }
  Elem sub(Elem a, Elem b) const { return m.sub(a, b); }
  Elem mul(Elem a, Elem b) const { return m.mul(a, b); }
  // valuation in uniformizer units; cap() for zero
  int val(Elem a) const { return m.val(a); }
  int cap() const { return m.N(); }
  Elem div_uniformizer(Elem a, int k) const { return a / m.ppow(k); }
  Elem inv_unit(Elem a) const { return m.inv(a); }
};

struct QuadElem {
  std::uint64_t a = 0;  // rational part
  std::uint64_t b = 0;  // coefficient of the generator
  friend bool operator==(const QuadElem& x, const QuadElem& y) { return x.a == y.a && x.b == y.b; }
};

// O_K / p^N for a quadratic extension K of Q_p, p odd:
//   unramified: Z/p^N[w]/(w^2 - c), c a quadratic non-residue unit, uniformizer p
//   ramified:   Z/p^N[w]/(w^2 - p*u), u a unit, uniformizer w
class QuadDvr {
 public:
  using Elem = QuadElem;

  static QuadDvr unramified(const Modulus& m, std::uint64_t nonresidue);
  static QuadDvr ramified(const Modulus& m, std::uint64_t unit);

  const Modulus& modulus() const { return m_; }
  bool is_ramified() const { return ramified_; }
  std::uint64_t square() const { return sq_; }  // w^2 as an element of Z/p^N
  int ramification_index() const { return ramified_ ? 2 : 1; }

  Elem zero() const { return {}; }
  Elem one() const { return {1 % m_.pN(), 0}; }
  Elem gen() const { return {0, 1 % m_.pN()}; }
  Elem from_int(std::uint64_t a) const { return {a % m_.pN(), 0}; }
  Elem add(Elem x, Elem y) const { return {m_.add(x.a, y.a), m_.add(x.b, y.b)}; }
  Elem sub(Elem x, Elem y) const { return {m_.sub(x.a, y.a), m_.sub(x.b, y.b)}; }
  Elem mul(Elem x, Elem y) const {
    return {m_.add(m_.mul(x.a, y.a), m_.mul(sq_, m_.mul(x.b, y.b))),
            m_.add(m_.mul(x.a, y.b), m_.mul(x.b, y.a))};
  }
  int val(Elem x) const;
  int cap() const { return ramified_ ? 2 * m_.N() : m_.N(); }
  Elem div_uniformizer(Elem x, int k) const;
  Elem mul_uniformizer(Elem x, int k) const;
  Elem inv_unit(Elem x) const;

 private:
  QuadDvr(const Modulus& m, bool ramified, std::uint64_t sq, std::uint64_t unit)
      : m_(m), ramified_(ramified), sq_(sq), unit_(unit), unit_inv_(m.inv(unit)) {}
  Modulus m_;
  bool ramified_;
  std::uint64_t sq_;
  std::uint64_t unit_;
  std::uint64_t unit_inv_;
};

std::uint64_t smallest_nonresidue(std::uint32_t p);

inline constexpr int kMaxQuotientDegree = 8;

// Z/p^N[x]/(Z) for monic Z of degree r <= kMaxQuotientDegree.
class QuotientRing {
 public:
  using Elem = std::array<std::uint64_t, kMaxQuotientDegree>;

  // z: coefficients of the monic modulus, lowest first, size r+1
  QuotientRing(const Modulus& m, std::vector<std::uint64_t> z);

  const Modulus& modulus() const { return m_; }
  int degree() const { return r_; }
  const std::vector<std::uint64_t>& modulus_poly() const { return z_; }

  Elem zero() const { return Elem{}; }
  Elem one() const {
    Elem e{};
    e[0] = 1 % m_.pN();
    return e;
  }
  Elem add(const Elem& x, const Elem& y) const {
    Elem e{};
    for (int i = 0; i < r_; ++i) e[i] = m_.add(x[i], y[i]);
    return e;
  }
  Elem sub(const Elem& x, const Elem& y) const {
    Elem e{};
    for (int i = 0; i < r_; ++i) e[i] = m_.sub(x[i], y[i]);
    return e;
  }
  Elem mul(const Elem& x, const Elem& y) const;

 private:
  Modulus m_;
  int r_;
  std::vector<std::uint64_t> z_;
};

}  // namespace padicrmt
