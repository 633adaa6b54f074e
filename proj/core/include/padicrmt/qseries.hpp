#pragma once

#include <cstdint>

namespace padicrmt {

// A double together with the truncation error actually certified.
struct RealValue {
  double value = 0.0;
  double abs_tol = 0.0;
};

constexpr long kInfinity = -1;

// (a;t)_k = prod_{i<k} (1 - a t^i); k = kInfinity for the infinite product.
RealValue qpoch(double a, double t, long k, double tol = 1e-16);

// sum_{k in Z} t^{k^2/2} z^k
RealValue theta3(double z, double t, double tol = 1e-16);
// prod_{i>=1} (1 - t^i)(1 + t^{i-1/2} z)(1 + t^{i-1/2}/z)
RealValue theta3_product(double z, double t, double tol = 1e-16);

// sum_{k>=0} term(k) for a series whose terms eventually decay faster than
// geometrically with ratio <= ratio_bound; stops once |term| < tol.
template <class Term>
RealValue sum_series(Term term, double ratio_bound, double tol = 1e-16, long max_terms = 100000) {
  RealValue out;
  double last = 0;
  for (long k = 0; k < max_terms; ++k) {
    const double x = term(k);
    out.value += x;
    last = x < 0 ? -x : x;
    if (k >= 2 && last < tol) break;
  }
  out.abs_tol = last * ratio_bound / (1.0 - ratio_bound);
  return out;
}

}  // namespace padicrmt
