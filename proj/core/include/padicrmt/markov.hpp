#pragma once

#include <vector>

#include "padicrmt/qseries.hpp"

namespace padicrmt {

class Rng;

// Chain on conjugate partition ranks; states are nonnegative integers or
// kInfState. The twist xi only enters spectral quantities, as u*xi.
struct MarkovParams {
  double t = 0.5;
  double u = 1.0;
  double xi = 1.0;
  void validate() const;
  double u_eff() const { return u * xi; }
};

constexpr int kInfState = -1;

RealValue markov_kernel_prob(const MarkovParams& params, int a, int b);

enum class ConventionPolicy {
  STRICT,  // (ut;t)_{-1} = 1/(1-u) literally; throws at u*xi == 1
  LIMIT,   // U^{-1}(0,0) = 1, the continuous extension at u*xi == 1
};

struct SpectralMatrices {
  int size = 0;
  std::vector<double> U, E, Uinv, M;  // row-major size x size
  double u(int i, int j) const { return U[static_cast<std::size_t>(i) * size + j]; }
  double e(int i) const { return E[static_cast<std::size_t>(i) * size + i]; }
  double uinv(int i, int j) const { return Uinv[static_cast<std::size_t>(i) * size + j]; }
  double m(int i, int j) const { return M[static_cast<std::size_t>(i) * size + j]; }
};

SpectralMatrices markov_spectral(const MarkovParams& params, int size,
                                 ConventionPolicy policy = ConventionPolicy::STRICT);

// Successive states after start (start itself excluded).
std::vector<int> markov_sample_path(const MarkovParams& params, int start, int steps, Rng& rng);

// E[t^{k(lambda_1 + lambda_2 + ...)}] from start n (kInfState allowed).
RealValue markov_t_moment(const MarkovParams& params, int n, int k);

// Limits of E[t^{2(lambda_1+...+lambda_m)} g(lambda_m)] for the chain K_{t,1}
// from infinity, with g one of the three two-point weights.
enum class AgVariant {
  SQ_INV,  // ((1-t)/(1-t^{l+1}))^2
  INV,     // (1-t)/(1-t^{l+1})
  INV2,    // (1-t^2)/(1-t^{2l+2})
};

double two_point_weight(AgVariant variant, double t, int ell);
// Coefficient of column j of U_{t,t^2} in the expansion of two_point_weight.
double two_point_coefficient(AgVariant variant, double t, int j);

RealValue andrews_gordon_expectation(double t, int m, AgVariant variant, double tol = 1e-16);
// Same limit through the diagonalization: (t;t)_inf^2 sum_d U(inf,d) E(d,d)^m c_d.
RealValue andrews_gordon_spectral(double t, int m, AgVariant variant, double tol = 1e-16);

}  // namespace padicrmt
