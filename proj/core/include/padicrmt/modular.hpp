#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "padicrmt/errors.hpp"

namespace padicrmt {

bool is_prime(std::uint64_t n);

// Valuation of an element of Z/p^N: a finite integer below N, or saturated
// (the residue is zero, so the true valuation is at least N).
class Valuation {
 public:
  static Valuation saturated() { return Valuation(); }
  explicit Valuation(int v) : v_(v), sat_(false) {}

  bool is_saturated() const { return sat_; }
  int value() const {
    if (sat_) throw PrecisionExhausted("valuation is saturated");
    return v_;
  }
  std::string str() const { return sat_ ? "SATURATED" : std::to_string(v_); }

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.sat_ == b.sat_ && (a.sat_ || a.v_ == b.v_);
  }

 private:
  Valuation() : v_(0), sat_(true) {}
  int v_;
  bool sat_;
};

// The ring Z/p^N.  Residues are kept in [0, p^N) with p^N < 2^31 so that
// products of two residues fit in 64 bits.
class Modulus {
 public:
  static constexpr std::uint64_t kMaxModulus = (1ULL << 31);

  Modulus(std::uint32_t p, int N);

  std::uint32_t p() const { return p_; }
  int N() const { return N_; }
  std::uint64_t pN() const { return pows_[N_]; }
  std::uint64_t ppow(int k) const { return pows_[k]; }

  std::uint64_t reduce(std::int64_t x) const {
    std::int64_t m = static_cast<std::int64_t>(pN());
    std::int64_t r = x % m;
    return static_cast<std::uint64_t>(r < 0 ? r + m : r);
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= pN() ? s - pN() : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + pN() - b;
  }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : pN() - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) % pN(); }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  // Inverse of a unit; throws InvalidParams on a non-unit.
  std::uint64_t inv(std::uint64_t a) const;

  // Raw valuation, N for zero.
  int val(std::uint64_t a) const {
    if (a == 0) return N_;
    int v = 0;
    while (a % p_ == 0) {
      a /= p_;
      ++v;
    }
    return v;
  }
  Valuation valuation(std::uint64_t a) const {
    return a == 0 ? Valuation::saturated() : Valuation(val(a));
  }
  bool is_unit(std::uint64_t a) const { return a % p_ != 0; }

  friend bool operator==(const Modulus& a, const Modulus& b) {
    return a.p_ == b.p_ && a.N_ == b.N_;
  }
  friend bool operator!=(const Modulus& a, const Modulus& b) { return !(a == b); }

 private:
  std::uint32_t p_;
  int N_;
  std::array<std::uint64_t, 33> pows_{};
};

void require_same(const Modulus& a, const Modulus& b);

}  // namespace padicrmt
