#pragma once

// Hand-rolled generators for property tests.

#include <cstdint>
#include <vector>

#include "padicrmt/matrix.hpp"
#include "padicrmt/poly.hpp"
#include "padicrmt/rng.hpp"

namespace gen {

inline padicrmt::PadicPoly monic_poly(const padicrmt::Modulus& m, int degree, padicrmt::Rng& rng) {
  std::vector<std::uint64_t> c(degree + 1);
  for (int i = 0; i < degree; ++i) c[i] = rng.uniform(m.pN());
  c[degree] = 1;
  return padicrmt::PadicPoly(m, std::move(c));
}

inline padicrmt::PadicMatrix matrix(const padicrmt::Modulus& m, int n, padicrmt::Rng& rng) {
  padicrmt::PadicMatrix a = padicrmt::PadicMatrix::zeros(m, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a.set(i, j, rng.uniform(m.pN()));
  return a;
}

inline std::uint32_t prime(padicrmt::Rng& rng) {
  static const std::uint32_t primes[] = {2, 3, 5};
  return primes[rng.uniform(3)];
}

}  // namespace gen
