#pragma once

#include <cstdint>

#include "padicrmt/modular.hpp"

namespace padicrmt {

class PadicScalar {
 public:
  PadicScalar(const Modulus& m, std::int64_t value) : mod_(m), value_(m.reduce(value)) {}
  static PadicScalar from_residue(const Modulus& m, std::uint64_t residue) {
    return PadicScalar(m, static_cast<std::int64_t>(residue % m.pN()));
  }

  const Modulus& modulus() const { return mod_; }
  std::uint32_t p() const { return mod_.p(); }
  int N() const { return mod_.N(); }
  std::uint64_t value() const { return value_; }
  Valuation valuation() const { return mod_.valuation(value_); }
  bool is_unit() const { return mod_.is_unit(value_); }
  // p^{-v}; throws PrecisionExhausted when saturated.
  double norm() const;

  PadicScalar operator+(const PadicScalar& o) const;
  PadicScalar operator-(const PadicScalar& o) const;
  PadicScalar operator*(const PadicScalar& o) const;
  PadicScalar operator-() const { return from_residue(mod_, mod_.neg(value_)); }
  PadicScalar inverse() const { return from_residue(mod_, mod_.inv(value_)); }

  friend bool operator==(const PadicScalar& a, const PadicScalar& b) {
    return a.mod_ == b.mod_ && a.value_ == b.value_;
  }

 private:
  Modulus mod_;
  std::uint64_t value_;
};

inline Valuation valuation(const PadicScalar& a) { return a.valuation(); }

}  // namespace padicrmt
