#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "padicrmt/modular.hpp"
#include "padicrmt/scalar.hpp"

namespace padicrmt {

// Ring adaptor for Z/p^N used by the generic elimination templates.
struct BaseRing {
  using Elem = std::uint64_t;
  const Modulus& m;
  Elem zero() const { return 0; }
  Elem one() const { return 1 % m.pN(); }
  Elem add(Elem a, Elem b) const { return m.add(a, b); }
  Elem sub(Elem a, Elem b) const { return m.sub(a, b); }
  Elem mul(Elem a, Elem b) const { return m.mul(a, b); }
};

// Dense polynomial over Z/p^N, coefficients stored lowest degree first and
// trimmed so the last stored coefficient is nonzero.
class PadicPoly {
 public:
  explicit PadicPoly(const Modulus& m) : mod_(m) {}
  PadicPoly(const Modulus& m, std::vector<std::uint64_t> residues);
  static PadicPoly from_ints(const Modulus& m, std::initializer_list<std::int64_t> low_first);
  static PadicPoly from_ints(const Modulus& m, const std::vector<std::int64_t>& low_first);
  static PadicPoly monomial(const Modulus& m, int degree, std::uint64_t c = 1);
  // prod (x - r_i)
  static PadicPoly from_roots(const Modulus& m, const std::vector<std::int64_t>& roots);

  const Modulus& modulus() const { return mod_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool monic() const { return !c_.empty() && c_.back() == 1; }
  std::uint64_t coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : 0;
  }
  PadicScalar scalar_coeff(int i) const { return PadicScalar::from_residue(mod_, coeff(i)); }
  std::uint64_t leading() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<std::uint64_t>& residues() const { return c_; }

  PadicPoly operator+(const PadicPoly& o) const;
  PadicPoly operator-(const PadicPoly& o) const;
  PadicPoly operator*(const PadicPoly& o) const;
  PadicPoly scaled(std::uint64_t s) const;
  PadicPoly derivative() const;
  // f(shift + x)
  PadicPoly taylor_shift(std::uint64_t shift) const;
  std::uint64_t eval(std::uint64_t a) const;
  // Division by a polynomial whose leading coefficient is a unit.
  void divrem(const PadicPoly& d, PadicPoly& q, PadicPoly& r) const;
  PadicPoly rem(const PadicPoly& d) const;

  friend bool operator==(const PadicPoly& a, const PadicPoly& b) {
    return a.mod_ == b.mod_ && a.c_ == b.c_;
  }

 private:
  void trim();
  Modulus mod_;
  std::vector<std::uint64_t> c_;
};

PadicScalar poly_eval(const PadicPoly& f, const PadicScalar& a);

// Sylvester determinant over Z/p^N with the given formal degrees
// (deg_f >= actual degree of f, likewise for g).
std::uint64_t sylvester_resultant(const Modulus& m, const std::vector<std::uint64_t>& f, int deg_f,
                                  const std::vector<std::uint64_t>& g, int deg_g);
PadicScalar resultant(const PadicPoly& f, const PadicPoly& g);
PadicScalar discriminant(const PadicPoly& f);

}  // namespace padicrmt
