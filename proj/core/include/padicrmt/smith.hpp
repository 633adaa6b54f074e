#pragma once

#include <algorithm>
#include <utility>
#include <vector>

namespace padicrmt {

// Diagonal valuations of the Smith form of a rows x cols matrix over a
// truncated DVR (row-major storage, consumed).  Entries equal to R.cap()
// are saturated pivots.  Pivot: minimal valuation, ties in row-major order.
//
// Ring needs: Elem, zero, sub, mul, val, cap, div_uniformizer, inv_unit.
template <class Ring>
std::vector<int> smith_valuations(const Ring& R, std::vector<typename Ring::Elem> a, int rows,
                                  int cols) {
  using E = typename Ring::Elem;
  const int len = std::min(rows, cols);
  std::vector<int> diag;
  diag.reserve(len);
  auto at = [&](int i, int j) -> E& { return a[static_cast<std::size_t>(i) * cols + j]; };

  for (int k = 0; k < len; ++k) {
    int best = R.cap(), bi = -1, bj = -1;
    for (int i = k; i < rows && best > 0; ++i)
      for (int j = k; j < cols; ++j) {
        const int v = R.val(at(i, j));
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    if (bi < 0) {
      diag.resize(len, R.cap());
      break;
    }
    if (bi != k)
      for (int j = 0; j < cols; ++j) std::swap(at(k, j), at(bi, j));
    if (bj != k)
      for (int i = 0; i < rows; ++i) std::swap(at(i, k), at(i, bj));

    // scale the pivot row so the pivot is exactly uniformizer^best
    const E unit_inv = R.inv_unit(R.div_uniformizer(at(k, k), best));
    for (int j = k; j < cols; ++j) at(k, j) = R.mul(at(k, j), unit_inv);

    for (int i = k + 1; i < rows; ++i) {
      if (R.val(at(i, k)) >= R.cap()) continue;
      const E q = R.div_uniformizer(at(i, k), best);
      for (int j = k; j < cols; ++j) at(i, j) = R.sub(at(i, j), R.mul(q, at(k, j)));
    }
    // the column operations clearing row k touch nothing else
    diag.push_back(best);
  }
  return diag;
}

}  // namespace padicrmt
