#pragma once

#include <vector>

namespace padicrmt {

// Division-free characteristic polynomial det(xI - A) of an n x n matrix
// stored row-major.  Returns coefficients highest degree first (leading 1).
//
// Ring needs: Elem, zero(), one(), add, sub, mul.
template <class Ring>
std::vector<typename Ring::Elem> berkowitz(const Ring& R,
                                           const std::vector<typename Ring::Elem>& a, int n) {
  using E = typename Ring::Elem;
  auto at = [&](int i, int j) -> const E& { return a[static_cast<std::size_t>(i) * n + j]; };

  std::vector<E> coeffs{R.one()};
  if (n == 0) return coeffs;
  coeffs.push_back(R.sub(R.zero(), at(0, 0)));

  std::vector<E> col, next, toeplitz;
  for (int r = 1; r < n; ++r) {
    // Toeplitz column: 1, -a_rr, -R C, -R A C, ..., -R A^{r-1} C
    toeplitz.assign(r + 2, R.zero());
    toeplitz[0] = R.one();
    toeplitz[1] = R.sub(R.zero(), at(r, r));
    col.resize(r);
    for (int i = 0; i < r; ++i) col[i] = at(i, r);
    for (int k = 0; k < r; ++k) {
      E dot = R.zero();
      for (int j = 0; j < r; ++j) dot = R.add(dot, R.mul(at(r, j), col[j]));
      toeplitz[k + 2] = R.sub(R.zero(), dot);
      if (k + 1 < r) {
        next.assign(r, R.zero());
        for (int i = 0; i < r; ++i) {
          E s = R.zero();
          for (int j = 0; j < r; ++j) s = R.add(s, R.mul(at(i, j), col[j]));
          next[i] = s;
        }
        col.swap(next);
      }
    }
    std::vector<E> out(r + 2, R.zero());
    for (int i = 0; i < r + 2; ++i)
      for (int j = 0; j <= r && j <= i; ++j)
        out[i] = R.add(out[i], R.mul(toeplitz[i - j], coeffs[j]));
    coeffs.swap(out);
  }
  return coeffs;
}

template <class Ring>
typename Ring::Elem berkowitz_det(const Ring& R, const std::vector<typename Ring::Elem>& a,
                                  int n) {
  auto c = berkowitz(R, a, n);
  auto c0 = c.back();
  return (n % 2 == 0) ? c0 : R.sub(R.zero(), c0);
}

}  // namespace padicrmt
