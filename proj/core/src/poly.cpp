#include "padicrmt/poly.hpp"

#include <cmath>

#include "padicrmt/berkowitz.hpp"

namespace padicrmt {

double PadicScalar::norm() const {
  return std::pow(static_cast<double>(p()), -static_cast<double>(valuation().value()));
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
  require_same(mod_, o.mod_);
  return from_residue(mod_, mod_.add(value_, o.value_));
}
PadicScalar PadicScalar::operator-(const PadicScalar& o) const {
  require_same(mod_, o.mod_);
  return from_residue(mod_, mod_.sub(value_, o.value_));
}
PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
  require_same(mod_, o.mod_);
  return from_residue(mod_, mod_.mul(value_, o.value_));
}

PadicPoly::PadicPoly(const Modulus& m, std::vector<std::uint64_t> residues)
    : mod_(m), c_(std::move(residues)) {
  for (auto& x : c_) x %= m.pN();
  trim();
}

PadicPoly PadicPoly::from_ints(const Modulus& m, std::initializer_list<std::int64_t> low_first) {
  return from_ints(m, std::vector<std::int64_t>(low_first));
}

PadicPoly PadicPoly::from_ints(const Modulus& m, const std::vector<std::int64_t>& low_first) {
  std::vector<std::uint64_t> c;
  c.reserve(low_first.size());
  for (auto x : low_first) c.push_back(m.reduce(x));
  return PadicPoly(m, std::move(c));
}

PadicPoly PadicPoly::monomial(const Modulus& m, int degree, std::uint64_t c) {
  std::vector<std::uint64_t> v(degree + 1, 0);
  v[degree] = c;
  return PadicPoly(m, std::move(v));
}

PadicPoly PadicPoly::from_roots(const Modulus& m, const std::vector<std::int64_t>& roots) {
  PadicPoly f = monomial(m, 0);
  for (auto r : roots) f = f * from_ints(m, {-r, 1});
  return f;
}

void PadicPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

PadicPoly PadicPoly::operator+(const PadicPoly& o) const {
  require_same(mod_, o.mod_);
  std::vector<std::uint64_t> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_.add(coeff(i), o.coeff(i));
  return PadicPoly(mod_, std::move(r));
}

PadicPoly PadicPoly::operator-(const PadicPoly& o) const {
  require_same(mod_, o.mod_);
  std::vector<std::uint64_t> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_.sub(coeff(i), o.coeff(i));
  return PadicPoly(mod_, std::move(r));
}

PadicPoly PadicPoly::operator*(const PadicPoly& o) const {
  require_same(mod_, o.mod_);
  if (is_zero() || o.is_zero()) return PadicPoly(mod_);
  std::vector<std::uint64_t> r(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j)
      r[i + j] = mod_.add(r[i + j], mod_.mul(c_[i], o.c_[j]));
  return PadicPoly(mod_, std::move(r));
}

PadicPoly PadicPoly::scaled(std::uint64_t s) const {
  std::vector<std::uint64_t> r(c_);
  for (auto& x : r) x = mod_.mul(x, s % mod_.pN());
  return PadicPoly(mod_, std::move(r));
}

PadicPoly PadicPoly::derivative() const {
  if (c_.size() <= 1) return PadicPoly(mod_);
  std::vector<std::uint64_t> r(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = mod_.mul(c_[i], i % mod_.pN());
  return PadicPoly(mod_, std::move(r));
}

PadicPoly PadicPoly::taylor_shift(std::uint64_t shift) const {
  std::vector<std::uint64_t> r(c_);
  shift %= mod_.pN();
  const int d = degree();
  // repeated synthetic division by (x - shift)
  for (int k = 0; k < d; ++k)
    for (int i = d - 1; i >= k; --i) r[i] = mod_.add(r[i], mod_.mul(shift, r[i + 1]));
  return PadicPoly(mod_, std::move(r));
}

std::uint64_t PadicPoly::eval(std::uint64_t a) const {
  a %= mod_.pN();
  std::uint64_t acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = mod_.add(mod_.mul(acc, a), *it);
  return acc;
}

void PadicPoly::divrem(const PadicPoly& d, PadicPoly& q, PadicPoly& r) const {
  require_same(mod_, d.mod_);
  if (d.is_zero() || !mod_.is_unit(d.leading()))
    throw NonUnitLeadingCoefficient("divisor leading coefficient is not a unit");
  std::vector<std::uint64_t> rem(c_);
  const int dd = d.degree();
  const int n = degree();
  std::vector<std::uint64_t> quo(n >= dd ? n - dd + 1 : 0, 0);
  const std::uint64_t linv = mod_.inv(d.leading());
  for (int i = n; i >= dd; --i) {
    std::uint64_t c = mod_.mul(rem[i], linv);
    quo[i - dd] = c;
    if (c == 0) continue;
    for (int j = 0; j <= dd; ++j) rem[i - dd + j] = mod_.sub(rem[i - dd + j], mod_.mul(c, d.c_[j]));
  }
  if (static_cast<int>(rem.size()) > dd) rem.resize(std::max(dd, 0));
  q = PadicPoly(mod_, std::move(quo));
  r = PadicPoly(mod_, std::move(rem));
}

PadicPoly PadicPoly::rem(const PadicPoly& d) const {
  PadicPoly q(mod_), r(mod_);
  divrem(d, q, r);
  return r;
}

PadicScalar poly_eval(const PadicPoly& f, const PadicScalar& a) {
  require_same(f.modulus(), a.modulus());
  return PadicScalar::from_residue(f.modulus(), f.eval(a.value()));
}

std::uint64_t sylvester_resultant(const Modulus& m, const std::vector<std::uint64_t>& f, int deg_f,
                                  const std::vector<std::uint64_t>& g, int deg_g) {
  const int size = deg_f + deg_g;
  if (size == 0) return 1 % m.pN();
  auto at = [](const std::vector<std::uint64_t>& v, int i) -> std::uint64_t {
    return (i >= 0 && i < static_cast<int>(v.size())) ? v[i] : 0;
  };
  std::vector<std::uint64_t> s(static_cast<std::size_t>(size) * size, 0);
  for (int row = 0; row < deg_g; ++row)
    for (int k = 0; k <= deg_f; ++k) s[row * size + row + k] = at(f, deg_f - k);
  for (int row = 0; row < deg_f; ++row)
    for (int k = 0; k <= deg_g; ++k) s[(deg_g + row) * size + row + k] = at(g, deg_g - k);
  return berkowitz_det(BaseRing{m}, s, size);
}

PadicScalar resultant(const PadicPoly& f, const PadicPoly& g) {
  require_same(f.modulus(), g.modulus());
  const Modulus& m = f.modulus();
  if (f.is_zero() || g.is_zero()) return PadicScalar(m, 0);
  return PadicScalar::from_residue(
      m, sylvester_resultant(m, f.residues(), f.degree(), g.residues(), g.degree()));
}

PadicScalar discriminant(const PadicPoly& f) {
  const Modulus& m = f.modulus();
  const int d = f.degree();
  if (d < 1) throw InvalidParams("discriminant needs degree >= 1");
  if (!m.is_unit(f.leading()))
    throw NonUnitLeadingCoefficient("discriminant needs a unit leading coefficient");
  // f' taken with formal degree d-1 so that p | d does not change the formula
  std::uint64_t res =
      sylvester_resultant(m, f.residues(), d, f.derivative().residues(), d - 1);
  res = m.mul(res, m.inv(f.leading()));
  if ((static_cast<long long>(d) * (d - 1) / 2) % 2 == 1) res = m.neg(res);
  return PadicScalar::from_residue(m, res);
}

}  // namespace padicrmt
