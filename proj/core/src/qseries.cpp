#include "padicrmt/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "padicrmt/errors.hpp"

namespace padicrmt {

RealValue qpoch(double a, double t, long k, double tol) {
  if (k != kInfinity) {
    if (k < 0) throw InvalidParams("q-Pochhammer length must be nonnegative");
    double prod = 1.0, x = a;
    for (long i = 0; i < k; ++i) {
      prod *= 1.0 - x;
      x *= t;
    }
    return {prod, 0.0};
  }
  if (!(std::fabs(t) < 1.0)) throw DivergentParameters("infinite q-Pochhammer needs |t| < 1");
  double prod = 1.0, x = a;
  long factors = 0;
  for (; factors < 100000; ++factors) {
    if (std::fabs(x) < tol * std::fabs(prod) || x == 0.0) break;
    prod *= 1.0 - x;
    x *= t;
  }
  // remaining factors prod_{j>=0}(1 - x t^j): |log| <= |x| / ((1 - |t|)(1 - |x|))
  const double ax = std::fabs(x);
  const double log_bound = ax / ((1.0 - std::fabs(t)) * (1.0 - ax));
  const double rounding = 2.0 * factors * std::numeric_limits<double>::epsilon();
  return {prod, std::fabs(prod) * (std::expm1(log_bound) + rounding)};
}

RealValue theta3(double z, double t, double tol) {
  if (!(t > 0.0 && t < 1.0)) throw InvalidParams("theta3 needs 0 < t < 1");
  if (z == 0.0) throw InvalidParams("theta3 needs z != 0");
  const double big = std::max(std::fabs(z), 1.0 / std::fabs(z));
  RealValue out{1.0, 0.0};
  double zk = 1.0, zinv = 1.0;
  for (long k = 1; k < 100000; ++k) {
    zk *= z;
    zinv /= z;
    const double w = std::pow(t, 0.5 * static_cast<double>(k) * k);
    const double plus = w * zk, minus = w * zinv;
    out.value += plus + minus;
    const double ratio = std::pow(t, k + 0.5) * big;
    const double last = std::fabs(plus) + std::fabs(minus);
    if (ratio < 0.5 && last < tol) {
      out.abs_tol = last * ratio / (1.0 - ratio);
      break;
    }
  }
  return out;
}

RealValue theta3_product(double z, double t, double tol) {
  if (!(t > 0.0 && t < 1.0)) throw InvalidParams("theta3 needs 0 < t < 1");
  if (z == 0.0) throw InvalidParams("theta3 needs z != 0");
  const double big = std::max(std::fabs(z), 1.0 / std::fabs(z));
  double prod = 1.0;
  double ti = t, half = std::sqrt(t);  // t^i and t^{i - 1/2}
  for (long i = 1; i < 100000; ++i) {
    prod *= (1.0 - ti) * (1.0 + half * z) * (1.0 + half / z);
    const double next = half * t * big;
    if (next < tol * 1e-2 && ti * t < tol * 1e-2) {
      // three geometric tails with ratio t
      const double log_bound = 3.0 * next / ((1.0 - t) * (1.0 - next));
      return {prod, std::fabs(prod) * std::expm1(log_bound)};
    }
    ti *= t;
    half *= t;
  }
  return {prod, 0.0};
}

}  // namespace padicrmt
