#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace padicrmt {

class Rng;

// Polynomial over F_p, lowest degree first, trimmed.
class FpPoly {
 public:
  explicit FpPoly(std::uint32_t p) : p_(p) {}
  FpPoly(std::uint32_t p, std::vector<std::uint32_t> low_first);
  static FpPoly from_ints(std::uint32_t p, const std::vector<std::int64_t>& low_first);
  static FpPoly constant(std::uint32_t p, std::uint32_t c) { return FpPoly(p, {c}); }
  static FpPoly x(std::uint32_t p) { return FpPoly(p, {0, 1}); }

  std::uint32_t p() const { return p_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  std::uint32_t coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : 0;
  }
  std::uint32_t leading() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<std::uint32_t>& coeffs() const { return c_; }

  FpPoly operator+(const FpPoly& o) const;
  FpPoly operator-(const FpPoly& o) const;
  FpPoly operator*(const FpPoly& o) const;
  FpPoly scaled(std::uint32_t s) const;
  void divrem(const FpPoly& d, FpPoly& q, FpPoly& r) const;
  FpPoly operator/(const FpPoly& d) const;
  FpPoly operator%(const FpPoly& d) const;
  FpPoly monic() const;
  FpPoly derivative() const;
  std::uint32_t eval(std::uint32_t a) const;
  std::string str() const;

  friend bool operator==(const FpPoly& a, const FpPoly& b) { return a.p_ == b.p_ && a.c_ == b.c_; }
  friend bool operator!=(const FpPoly& a, const FpPoly& b) { return !(a == b); }
  // canonical order: degree, then coefficients from the top down
  friend bool operator<(const FpPoly& a, const FpPoly& b);

 private:
  void trim();
  std::uint32_t p_;
  std::vector<std::uint32_t> c_;
};

std::uint32_t fp_inv(std::uint32_t a, std::uint32_t p);
FpPoly gcd(const FpPoly& a, const FpPoly& b);
// s*a + t*b = gcd(a,b) (monic)
FpPoly ext_gcd(const FpPoly& a, const FpPoly& b, FpPoly& s, FpPoly& t);
FpPoly powmod(const FpPoly& base, std::uint64_t e, const FpPoly& mod);
bool is_irreducible(const FpPoly& f);

struct IrreducibleFactor {
  FpPoly poly;
  int degree;
  int multiplicity;
};

struct ResidueFactorization {
  std::vector<IrreducibleFactor> factors;  // canonical order
  int total_degree() const;
};

// Complete factorization of a nonzero polynomial over F_p into monic
// irreducibles.  Randomized splitting draws from rng when given, otherwise
// from a stream derived from f itself.
ResidueFactorization factor_mod_p(const FpPoly& f, Rng* rng = nullptr);

}  // namespace padicrmt
