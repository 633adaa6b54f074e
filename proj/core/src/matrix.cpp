#include "padicrmt/matrix.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "padicrmt/berkowitz.hpp"
#include "padicrmt/rng.hpp"
#include "padicrmt/smith.hpp"

namespace padicrmt {

Partition::Partition(std::vector<int> p, bool sat) : parts(std::move(p)), saturated(sat) {
  std::sort(parts.begin(), parts.end(), std::greater<int>());
  while (!parts.empty() && parts.back() == 0) parts.pop_back();
}

int Partition::size() const { return std::accumulate(parts.begin(), parts.end(), 0); }

int Partition::conj(int i) const {
  int c = 0;
  for (int x : parts)
    if (x >= i) ++c;
  return c;
}

Partition partition_from_diagonal(const std::vector<int>& diag, int cap) {
  std::vector<int> parts;
  bool sat = false;
  for (int v : diag) {
    if (v >= cap) sat = true;
    parts.push_back(std::min(v, cap));
  }
  return Partition(std::move(parts), sat);
}

PadicMatrix PadicMatrix::zeros(const Modulus& m, int n) {
  if (n < 1) throw InvalidParams("matrix dimension must be positive");
  return PadicMatrix(m, n, 1);
}

PadicMatrix PadicMatrix::identity(const Modulus& m, int n) {
  PadicMatrix a = zeros(m, n);
  for (int i = 0; i < n; ++i) a.set(i, i, 1);
  return a;
}

PadicMatrix PadicMatrix::from_ints(const Modulus& m, int n, const std::vector<std::int64_t>& row_major) {
  if (static_cast<int>(row_major.size()) != n * n) throw InvalidParams("entry count must be n*n");
  PadicMatrix a = zeros(m, n);
  for (int i = 0; i < n * n; ++i) a.e_[i] = m.reduce(row_major[i]);
  return a;
}

PadicMatrix PadicMatrix::diag(const Modulus& m, const std::vector<std::int64_t>& d) {
  const int n = static_cast<int>(d.size());
  PadicMatrix a = zeros(m, n);
  for (int i = 0; i < n; ++i) a.e_[static_cast<std::size_t>(i) * n + i] = m.reduce(d[i]);
  return a;
}

PadicMatrix PadicMatrix::quotient(const PadicPoly& modulus_poly, int n, std::vector<std::uint64_t> entries) {
  if (!modulus_poly.monic() || modulus_poly.degree() < 1)
    throw InvalidParams("quotient modulus must be monic of positive degree");
  const int r = modulus_poly.degree();
  if (r > kMaxQuotientDegree) throw InvalidParams("quotient modulus degree too large");
  if (static_cast<long>(entries.size()) != static_cast<long>(n) * n * r)
    throw InvalidParams("quotient entries must be n*n*deg Z residues");
  PadicMatrix a(modulus_poly.modulus(), n, r);
  for (auto& x : entries) x %= a.mod_.pN();
  a.e_ = std::move(entries);
  a.quotient_ = modulus_poly;
  return a;
}

const PadicPoly& PadicMatrix::modulus_poly() const {
  if (!quotient_) throw InvalidParams("matrix is over the base ring");
  return *quotient_;
}

QuotientRing PadicMatrix::quotient_ring() const { return QuotientRing(mod_, modulus_poly().residues()); }

std::vector<QuotientRing::Elem> PadicMatrix::quotient_entries() const {
  std::vector<QuotientRing::Elem> out(static_cast<std::size_t>(n_) * n_);
  for (std::size_t idx = 0; idx < out.size(); ++idx)
    for (int k = 0; k < width_; ++k) out[idx][k] = e_[idx * width_ + k];
  return out;
}

PadicMatrix PadicMatrix::operator+(const PadicMatrix& o) const {
  require_same(mod_, o.mod_);
  if (n_ != o.n_ || width_ != o.width_) throw InvalidParams("shape mismatch");
  PadicMatrix r = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = mod_.add(e_[i], o.e_[i]);
  return r;
}

PadicMatrix PadicMatrix::operator-(const PadicMatrix& o) const {
  require_same(mod_, o.mod_);
  if (n_ != o.n_ || width_ != o.width_) throw InvalidParams("shape mismatch");
  PadicMatrix r = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = mod_.sub(e_[i], o.e_[i]);
  return r;
}

PadicMatrix PadicMatrix::operator*(const PadicMatrix& o) const {
  require_same(mod_, o.mod_);
  if (n_ != o.n_ || width_ != o.width_) throw InvalidParams("shape mismatch");
  if (is_quotient()) {
    QuotientRing R = quotient_ring();
    auto x = quotient_entries(), y = o.quotient_entries();
    std::vector<std::uint64_t> out(e_.size(), 0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        QuotientRing::Elem s = R.zero();
        for (int k = 0; k < n_; ++k) s = R.add(s, R.mul(x[i * n_ + k], y[k * n_ + j]));
        for (int c = 0; c < width_; ++c) out[(static_cast<std::size_t>(i) * n_ + j) * width_ + c] = s[c];
      }
    return quotient(*quotient_, n_, std::move(out));
  }
  PadicMatrix r = zeros(mod_, n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      const std::uint64_t aik = at(i, k);
      if (!aik) continue;
      for (int j = 0; j < n_; ++j)
        r.e_[static_cast<std::size_t>(i) * n_ + j] = mod_.add(r.e_[static_cast<std::size_t>(i) * n_ + j], mod_.mul(aik, o.at(k, j)));
    }
  return r;
}

PadicMatrix PadicMatrix::scaled(std::uint64_t s) const {
  PadicMatrix r = *this;
  for (auto& x : r.e_) x = mod_.mul(x, s % mod_.pN());
  return r;
}

int rank_mod_p(const Modulus& m, int rows, int cols, const std::vector<std::uint64_t>& row_major) {
  const std::uint64_t p = m.p();
  std::vector<std::uint64_t> a(row_major.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = row_major[i] % p;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (a[static_cast<std::size_t>(r) * cols + c]) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < cols; ++j) std::swap(a[static_cast<std::size_t>(piv) * cols + j], a[static_cast<std::size_t>(rank) * cols + j]);
    std::uint64_t inv = 1;
    {
      // Fermat inverse mod p
      std::uint64_t b = a[static_cast<std::size_t>(rank) * cols + c], e = p - 2;
      while (e) {
        if (e & 1) inv = inv * b % p;
        b = b * b % p;
        e >>= 1;
      }
    }
    for (int r = rank + 1; r < rows; ++r) {
      const std::uint64_t f = a[static_cast<std::size_t>(r) * cols + c] * inv % p;
      if (!f) continue;
      for (int j = c; j < cols; ++j)
        a[static_cast<std::size_t>(r) * cols + j] =
            (a[static_cast<std::size_t>(r) * cols + j] + (p - f) * a[static_cast<std::size_t>(rank) * cols + j]) % p;
    }
    ++rank;
  }
  return rank;
}

bool invertible_mod_p(const PadicMatrix& a) {
  if (a.is_quotient()) throw InvalidParams("invertible_mod_p expects a base-ring matrix");
  return rank_mod_p(a.modulus(), a.n(), a.n(), a.raw()) == a.n();
}

PadicMatrix sample_matrix(int n, std::uint32_t p, int N, MatrixMode mode, Rng& rng, long* attempts) {
  const Modulus m(p, N);
  PadicMatrix a = PadicMatrix::zeros(m, n);
  constexpr long kMaxAttempts = 1000000;
  for (long attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a.set(i, j, rng.uniform(m.pN()));
    if (mode == MatrixMode::MAT || invertible_mod_p(a)) {
      if (attempts) *attempts = attempt;
      return a;
    }
  }
  throw RejectionExhausted("GL rejection sampling exceeded 10^6 attempts");
}

PadicMatrix sample_quotient_matrix(int n, const PadicPoly& modulus_poly, Rng& rng) {
  const Modulus& m = modulus_poly.modulus();
  std::vector<std::uint64_t> e(static_cast<std::size_t>(n) * n * modulus_poly.degree());
  for (auto& x : e) x = rng.uniform(m.pN());
  return PadicMatrix::quotient(modulus_poly, n, std::move(e));
}

PadicPoly charpoly(const PadicMatrix& a) {
  if (a.is_quotient()) throw InvalidParams("use charpoly_quotient for quotient-ring matrices");
  auto hi = berkowitz(BaseRing{a.modulus()}, a.raw(), a.n());
  std::reverse(hi.begin(), hi.end());
  return PadicPoly(a.modulus(), std::move(hi));
}

std::vector<QuotientRing::Elem> charpoly_quotient(const PadicMatrix& a) {
  QuotientRing R = a.quotient_ring();
  return berkowitz(R, a.quotient_entries(), a.n());
}

QuotientRing::Elem det_quotient(const PadicMatrix& a) {
  QuotientRing R = a.quotient_ring();
  return berkowitz_det(R, a.quotient_entries(), a.n());
}

Partition smith_partition(const PadicMatrix& a) {
  if (a.is_quotient()) throw InvalidParams("smith_partition expects a base-ring matrix");
  ZpDvr R{a.modulus()};
  return partition_from_diagonal(smith_valuations(R, a.raw(), a.n(), a.n()), a.modulus().N());
}

int det_valuation(const PadicMatrix& a) {
  const Modulus& m = a.modulus();
  if (!a.is_quotient()) {
    Partition lam = smith_partition(a);
    if (lam.saturated) throw SaturatedDeterminant("determinant vanishes at precision N");
    return lam.size();
  }
  const auto d = det_quotient(a);
  const PadicPoly& z = a.modulus_poly();
  std::vector<std::uint64_t> dv(d.begin(), d.begin() + z.degree());
  while (!dv.empty() && dv.back() == 0) dv.pop_back();
  if (dv.empty()) throw SaturatedDeterminant("quotient determinant vanishes at precision N");
  const std::uint64_t res = sylvester_resultant(m, z.residues(), z.degree(), dv, static_cast<int>(dv.size()) - 1);
  if (res == 0) throw SaturatedDeterminant("norm of the determinant vanishes at precision N");
  return m.val(res);
}

}  // namespace padicrmt
