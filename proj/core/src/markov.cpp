#include "padicrmt/markov.hpp"

#include <cmath>

#include "padicrmt/errors.hpp"
#include "padicrmt/rng.hpp"

namespace padicrmt {

namespace {

double poch(double a, double t, long k) { return qpoch(a, t, k).value; }

}  // namespace

void MarkovParams::validate() const {
  if (!(t > 0.0 && t < 1.0)) throw InvalidParams("Markov parameter t must lie in (0,1)");
  if (!(u > 0.0 && u * t < 1.0)) throw InvalidParams("Markov parameter u must lie in (0,1/t)");
  if (!(xi > 0.0 && u * xi * t < 1.0)) throw InvalidParams("twist must keep u*xi*t < 1");
}

RealValue markov_kernel_prob(const MarkovParams& params, int a, int b) {
  params.validate();
  const double t = params.t, u = params.u;
  if (b < 0) throw InvalidParams("target state must be nonnegative");
  const double head = std::pow(t, static_cast<double>(b) * b) * std::pow(u, b);
  if (a == kInfState) {
    const RealValue inf = qpoch(u * t, t, kInfinity);
    const double rest = head / (poch(t, t, b) * poch(u * t, t, b));
    return {inf.value * rest, inf.abs_tol * rest};
  }
  if (a < 0) throw InvalidParams("source state must be nonnegative or infinite");
  if (b > a) return {0.0, 0.0};
  const double num = poch(t, t, a) * poch(u * t, t, a);
  const double den = poch(t, t, a - b) * poch(t, t, b) * poch(u * t, t, b);
  return {head * num / den, 0.0};
}

SpectralMatrices markov_spectral(const MarkovParams& params, int size, ConventionPolicy policy) {
  params.validate();
  if (size < 1) throw InvalidParams("spectral truncation size must be positive");
  const double t = params.t, u = params.u_eff();
  SpectralMatrices s;
  s.size = size;
  const std::size_t cells = static_cast<std::size_t>(size) * size;
  s.U.assign(cells, 0.0);
  s.E.assign(cells, 0.0);
  s.Uinv.assign(cells, 0.0);
  s.M.assign(cells, 0.0);
  for (int i = 0; i < size; ++i) {
    s.E[static_cast<std::size_t>(i) * size + i] = std::pow(u, i) * std::pow(t, static_cast<double>(i) * i);
    for (int j = 0; j <= i; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * size + j;
      s.M[idx] = std::pow(t, static_cast<double>(j) * j) * std::pow(u, j) / poch(t, t, i - j);
      s.U[idx] = 1.0 / (poch(t, t, i - j) * poch(u * t, t, i + j));
      const int d = i - j;
      const double sign = (d % 2) ? -1.0 : 1.0;
      const double lead = sign * std::pow(t, 0.5 * d * (d - 1)) * (1.0 - u * std::pow(t, 2.0 * i)) / poch(t, t, d);
      if (i + j == 0) {
        if (policy == ConventionPolicy::LIMIT) {
          s.Uinv[idx] = 1.0;
        } else {
          if (u == 1.0) throw SingularConvention("(ut;t)_{-1} = 1/(1-u) is singular at u = 1");
          s.Uinv[idx] = lead / (1.0 - u);
        }
      } else {
        s.Uinv[idx] = lead * poch(u * t, t, i + j - 1);
      }
    }
  }
  return s;
}

std::vector<int> markov_sample_path(const MarkovParams& params, int start, int steps, Rng& rng) {
  params.validate();
  if (steps < 0) throw InvalidParams("step count must be nonnegative");
  if (start < 0 && start != kInfState) throw InvalidParams("start state must be nonnegative or infinite");
  std::vector<int> path;
  path.reserve(steps);
  int a = start;
  for (int step = 0; step < steps; ++step) {
    const double r = rng.uniform01();
    double cum = 0.0;
    int b = 0;
    if (a == kInfState) {
      // unbounded support: stop once the remaining mass is below double resolution
      for (;; ++b) {
        cum += markov_kernel_prob(params, kInfState, b).value;
        if (r < cum || b > 400) break;
      }
    } else {
      for (; b < a; ++b) {
        cum += markov_kernel_prob(params, a, b).value;
        if (r < cum) break;
      }
    }
    path.push_back(b);
    a = b;
  }
  return path;
}

RealValue markov_t_moment(const MarkovParams& params, int n, int k) {
  params.validate();
  if (k < 0) throw InvalidParams("moment order must be nonnegative");
  const double t = params.t, u = params.u;
  const double num = poch(u * t, t, k);
  if (n == kInfState) return {num, 0.0};
  if (n < 0) throw InvalidParams("start state must be nonnegative or infinite");
  return {num / poch(u * std::pow(t, n + 1), t, k), 0.0};
}

double two_point_weight(AgVariant variant, double t, int ell) {
  const double base = 1.0 / (poch(t, t, ell) * poch(t, t, ell));
  switch (variant) {
    case AgVariant::SQ_INV: {
      const double r = (1.0 - t) / (1.0 - std::pow(t, ell + 1));
      return base * r * r;
    }
    case AgVariant::INV: return base * (1.0 - t) / (1.0 - std::pow(t, ell + 1));
    case AgVariant::INV2: return base * (1.0 - t * t) / (1.0 - std::pow(t, 2.0 * ell + 2));
  }
  return 0.0;
}

double two_point_coefficient(AgVariant variant, double t, int j) {
  const double tri = std::pow(t, 0.5 * j * (j + 1));
  switch (variant) {
    case AgVariant::SQ_INV: return ((j % 2) ? -1.0 : 1.0) * tri * (1.0 + std::pow(t, j + 1)) / (1.0 + t);
    case AgVariant::INV:
      return std::pow(t, static_cast<double>(j) * j + j) * (1.0 - std::pow(t, 2.0 * j + 2)) / (1.0 - t * t);
    case AgVariant::INV2: return tri * (1.0 - std::pow(t, j + 1)) / (1.0 - t);
  }
  return 0.0;
}

RealValue andrews_gordon_expectation(double t, int m, AgVariant variant, double tol) {
  if (!(t > 0.0 && t < 1.0)) throw InvalidParams("t must lie in (0,1)");
  if (m < 0) throw InvalidParams("m must be nonnegative");
  const double a = 2.0 * m + 1, b = 4.0 * m + 1;
  switch (variant) {
    case AgVariant::SQ_INV: {
      RealValue s = sum_series(
          [&](long k) {
            const double kd = static_cast<double>(k);
            return ((k % 2) ? -1.0 : 1.0) * std::pow(t, (a * kd * kd + b * kd) / 2) * (1.0 + std::pow(t, kd + 1));
          },
          t, tol);
      const double pre = (1.0 - t) * (1.0 - t);
      return {pre * s.value, pre * s.abs_tol};
    }
    case AgVariant::INV: {
      RealValue s = sum_series(
          [&](long k) {
            const double kd = static_cast<double>(k);
            return std::pow(t, (m + 1.0) * kd * kd + (2.0 * m + 1) * kd) * (1.0 - std::pow(t, 2 * kd + 2));
          },
          t, tol);
      return {(1.0 - t) * s.value, (1.0 - t) * s.abs_tol};
    }
    case AgVariant::INV2: {
      RealValue s = sum_series(
          [&](long k) {
            const double kd = static_cast<double>(k);
            return std::pow(t, (a * kd * kd + b * kd) / 2) * (1.0 - std::pow(t, kd + 1));
          },
          t, tol);
      return {(1.0 - t * t) * s.value, (1.0 - t * t) * s.abs_tol};
    }
  }
  return {};
}

RealValue andrews_gordon_spectral(double t, int m, AgVariant variant, double tol) {
  if (!(t > 0.0 && t < 1.0)) throw InvalidParams("t must lie in (0,1)");
  // U_{t,t^2}(inf,d) = 1/((t;t)_inf (t^3;t)_inf), E_{t,t^2}(d,d) = t^{d^2+2d}
  const RealValue tt = qpoch(t, t, kInfinity);
  const RealValue t3 = qpoch(t * t * t, t, kInfinity);
  const double pre = tt.value / t3.value;
  RealValue s = sum_series(
      [&](long d) {
        const double dd = static_cast<double>(d);
        return std::pow(t, m * (dd * dd + 2 * dd)) * two_point_coefficient(variant, t, static_cast<int>(d));
      },
      t, tol);
  return {pre * s.value, pre * s.abs_tol + std::fabs(s.value) * (tt.abs_tol + t3.abs_tol)};
}

}  // namespace padicrmt
