#include "padicrmt/fp_poly.hpp"

#include <algorithm>
#include <map>

#include "padicrmt/errors.hpp"
#include "padicrmt/rng.hpp"

namespace padicrmt {

namespace {

std::uint32_t addp(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  std::uint64_t s = static_cast<std::uint64_t>(a) + b;
  return static_cast<std::uint32_t>(s >= p ? s - p : s);
}
std::uint32_t subp(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return a >= b ? a - b : static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) + p - b);
}
std::uint32_t mulp(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
}

}  // namespace

std::uint32_t fp_inv(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) throw InvalidParams("inverse of zero in F_p");
  std::int64_t r0 = p, r1 = a % p, s0 = 0, s1 = 1;
  while (r1) {
    std::int64_t q = r0 / r1, t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  s0 %= static_cast<std::int64_t>(p);
  return static_cast<std::uint32_t>(s0 < 0 ? s0 + p : s0);
}

FpPoly::FpPoly(std::uint32_t p, std::vector<std::uint32_t> low_first) : p_(p), c_(std::move(low_first)) {
  for (auto& x : c_) x %= p_;
  trim();
}

FpPoly FpPoly::from_ints(std::uint32_t p, const std::vector<std::int64_t>& low_first) {
  std::vector<std::uint32_t> c;
  for (auto x : low_first) {
    std::int64_t r = x % static_cast<std::int64_t>(p);
    c.push_back(static_cast<std::uint32_t>(r < 0 ? r + p : r));
  }
  return FpPoly(p, std::move(c));
}

void FpPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

FpPoly FpPoly::operator+(const FpPoly& o) const {
  std::vector<std::uint32_t> r(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = addp(coeff(i), o.coeff(i), p_);
  return FpPoly(p_, std::move(r));
}

FpPoly FpPoly::operator-(const FpPoly& o) const {
  std::vector<std::uint32_t> r(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = subp(coeff(i), o.coeff(i), p_);
  return FpPoly(p_, std::move(r));
}

FpPoly FpPoly::operator*(const FpPoly& o) const {
  if (is_zero() || o.is_zero()) return FpPoly(p_);
  std::vector<std::uint64_t> acc(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) acc[i + j] = (acc[i + j] + static_cast<std::uint64_t>(c_[i]) * o.c_[j]) % p_;
  }
  std::vector<std::uint32_t> r(acc.begin(), acc.end());
  return FpPoly(p_, std::move(r));
}

FpPoly FpPoly::scaled(std::uint32_t s) const {
  std::vector<std::uint32_t> r(c_);
  for (auto& x : r) x = mulp(x, s % p_, p_);
  return FpPoly(p_, std::move(r));
}

void FpPoly::divrem(const FpPoly& d, FpPoly& q, FpPoly& r) const {
  if (d.is_zero()) throw InvalidParams("polynomial division by zero");
  std::vector<std::uint32_t> rem(c_);
  const int dd = d.degree(), n = degree();
  std::vector<std::uint32_t> quo(n >= dd ? n - dd + 1 : 0, 0);
  const std::uint32_t linv = fp_inv(d.leading(), p_);
  for (int i = n; i >= dd; --i) {
    std::uint32_t c = mulp(rem[i], linv, p_);
    quo[i - dd] = c;
    if (!c) continue;
    for (int j = 0; j <= dd; ++j) rem[i - dd + j] = subp(rem[i - dd + j], mulp(c, d.c_[j], p_), p_);
  }
  if (static_cast<int>(rem.size()) > dd) rem.resize(dd);
  q = FpPoly(p_, std::move(quo));
  r = FpPoly(p_, std::move(rem));
}

FpPoly FpPoly::operator/(const FpPoly& d) const {
  FpPoly q(p_), r(p_);
  divrem(d, q, r);
  return q;
}

FpPoly FpPoly::operator%(const FpPoly& d) const {
  FpPoly q(p_), r(p_);
  divrem(d, q, r);
  return r;
}

FpPoly FpPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(fp_inv(leading(), p_));
}

FpPoly FpPoly::derivative() const {
  if (c_.size() <= 1) return FpPoly(p_);
  std::vector<std::uint32_t> r(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = mulp(c_[i], static_cast<std::uint32_t>(i % p_), p_);
  return FpPoly(p_, std::move(r));
}

std::uint32_t FpPoly::eval(std::uint32_t a) const {
  std::uint32_t acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = addp(mulp(acc, a, p_), *it, p_);
  return acc;
}

std::string FpPoly::str() const {
  if (c_.empty()) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    if (!c_[i]) continue;
    if (!s.empty()) s += " + ";
    if (c_[i] != 1 || i == 0) s += std::to_string(c_[i]);
    if (i >= 1) s += (c_[i] != 1 ? "*x" : "x");
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

bool operator<(const FpPoly& a, const FpPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i)
    if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
  return false;
}

FpPoly gcd(const FpPoly& a, const FpPoly& b) {
  FpPoly x = a, y = b;
  while (!y.is_zero()) {
    FpPoly r = x % y;
    x = y;
    y = r;
  }
  return x.monic();
}

FpPoly ext_gcd(const FpPoly& a, const FpPoly& b, FpPoly& s, FpPoly& t) {
  const std::uint32_t p = a.p();
  FpPoly r0 = a, r1 = b;
  FpPoly s0 = FpPoly::constant(p, 1), s1(p), t0(p), t1 = FpPoly::constant(p, 1);
  while (!r1.is_zero()) {
    FpPoly q(p), r(p);
    r0.divrem(r1, q, r);
    r0 = r1;
    r1 = r;
    FpPoly ns = s0 - q * s1, nt = t0 - q * t1;
    s0 = s1;
    s1 = ns;
    t0 = t1;
    t1 = nt;
  }
  if (r0.is_zero()) {
    s = s0;
    t = t0;
    return r0;
  }
  const std::uint32_t li = fp_inv(r0.leading(), p);
  s = s0.scaled(li);
  t = t0.scaled(li);
  return r0.scaled(li);
}

FpPoly powmod(const FpPoly& base, std::uint64_t e, const FpPoly& mod) {
  FpPoly result = FpPoly::constant(base.p(), 1) % mod;
  FpPoly b = base % mod;
  while (e) {
    if (e & 1) result = (result * b) % mod;
    b = (b * b) % mod;
    e >>= 1;
  }
  return result;
}

namespace {

using FactorList = std::vector<std::pair<FpPoly, int>>;

// f monic, nonconstant
void squarefree(const FpPoly& f, int scale, FactorList& out) {
  const std::uint32_t p = f.p();
  FpPoly df = f.derivative();
  if (df.is_zero()) {
    // f = g(x^p)
    std::vector<std::uint32_t> root;
    for (int i = 0; i <= f.degree(); i += static_cast<int>(p)) root.push_back(f.coeff(i));
    squarefree(FpPoly(p, root), scale * static_cast<int>(p), out);
    return;
  }
  FpPoly c = gcd(f, df);
  FpPoly w = f / c;
  int i = 1;
  while (w.degree() > 0) {
    FpPoly y = gcd(w, c);
    FpPoly fac = w / y;
    if (fac.degree() > 0) out.emplace_back(fac.monic(), i * scale);
    w = y;
    c = c / y;
    ++i;
  }
  if (c.degree() > 0) {
    std::vector<std::uint32_t> root;
    for (int k = 0; k <= c.degree(); k += static_cast<int>(p)) root.push_back(c.coeff(k));
    squarefree(FpPoly(p, root).monic(), scale * static_cast<int>(p), out);
  }
}

// f squarefree monic -> (product of all irreducible factors of degree d, d)
std::vector<std::pair<FpPoly, int>> distinct_degree(FpPoly f) {
  const std::uint32_t p = f.p();
  std::vector<std::pair<FpPoly, int>> out;
  FpPoly x = FpPoly::x(p);
  FpPoly h = x % f;
  for (int d = 1; 2 * d <= f.degree(); ++d) {
    h = powmod(h, p, f);
    FpPoly g = gcd(f, h - x);
    if (g.degree() > 0) {
      out.emplace_back(g, d);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.emplace_back(f.monic(), f.degree());
  return out;
}

// a^{(p^d-1)/2} mod f, written as prod_i (a^{(p-1)/2})^{p^i} to avoid huge exponents
FpPoly half_power(const FpPoly& a, int d, const FpPoly& f) {
  const std::uint32_t p = f.p();
  FpPoly b = powmod(a, (p - 1) / 2, f);
  FpPoly acc = b;
  FpPoly frob = b;
  for (int i = 1; i < d; ++i) {
    frob = powmod(frob, p, f);
    acc = (acc * frob) % f;
  }
  return acc;
}

FpPoly trace_map(const FpPoly& a, int d, const FpPoly& f) {
  FpPoly acc = a % f, sq = a % f;
  for (int i = 1; i < d; ++i) {
    sq = (sq * sq) % f;
    acc = acc + sq;
  }
  return acc;
}

FpPoly candidate_from_index(std::uint64_t idx, int deg_bound, std::uint32_t p) {
  std::vector<std::uint32_t> c;
  for (int i = 0; i < deg_bound && idx; ++i) {
    c.push_back(static_cast<std::uint32_t>(idx % p));
    idx /= p;
  }
  return FpPoly(p, std::move(c));
}

FpPoly try_split(const FpPoly& f, int d, const FpPoly& a) {
  const std::uint32_t p = f.p();
  if (a.degree() < 1) return FpPoly(p);
  FpPoly b = (p == 2) ? trace_map(a, d, f) : half_power(a, d, f) - FpPoly::constant(p, 1);
  FpPoly g = gcd(f, b);
  if (g.degree() > 0 && g.degree() < f.degree()) return g;
  return FpPoly(p);
}

// f squarefree monic, all irreducible factors of degree d
void equal_degree(const FpPoly& f, int d, Rng& rng, std::vector<FpPoly>& out) {
  const std::uint32_t p = f.p();
  if (f.degree() == d) {
    out.push_back(f);
    return;
  }
  if (d == 1 && p <= 64) {
    for (std::uint32_t a = 0; a < p; ++a)
      if (f.eval(a) == 0) out.push_back(FpPoly(p, {p - a == p ? 0 : p - a, 1}));
    return;
  }
  FpPoly g(p);
  for (int attempt = 0; attempt < 64 && g.is_zero(); ++attempt) {
    std::vector<std::uint32_t> c(f.degree());
    for (auto& x : c) x = static_cast<std::uint32_t>(rng.uniform(p));
    g = try_split(f, d, FpPoly(p, std::move(c)));
  }
  // deterministic fallback: walk all candidates in order
  for (std::uint64_t idx = p; g.is_zero(); ++idx) g = try_split(f, d, candidate_from_index(idx, f.degree(), p));
  equal_degree(g, d, rng, out);
  equal_degree(f / g, d, rng, out);
}

std::uint64_t poly_hash(const FpPoly& f) {
  std::uint64_t h = mix64(f.p());
  for (auto c : f.coeffs()) h = mix64(h ^ c);
  return h;
}

}  // namespace

bool is_irreducible(const FpPoly& f) {
  if (f.degree() < 1) return false;
  auto fac = factor_mod_p(f);
  return fac.factors.size() == 1 && fac.factors[0].multiplicity == 1;
}

int ResidueFactorization::total_degree() const {
  int s = 0;
  for (const auto& f : factors) s += f.degree * f.multiplicity;
  return s;
}

ResidueFactorization factor_mod_p(const FpPoly& f, Rng* rng) {
  if (f.is_zero()) throw InvalidParams("factor_mod_p of the zero polynomial");
  ResidueFactorization res;
  if (f.degree() == 0) return res;
  Rng local(poly_hash(f), 0);
  Rng& r = rng ? *rng : local;

  FactorList sqf;
  squarefree(f.monic(), 1, sqf);
  std::map<FpPoly, int> mult;
  for (const auto& [part, m] : sqf) {
    for (const auto& [block, d] : distinct_degree(part)) {
      std::vector<FpPoly> irr;
      equal_degree(block, d, r, irr);
      for (auto& g : irr) mult[g] += m;
    }
  }
  for (const auto& [g, m] : mult) res.factors.push_back({g, g.degree(), m});
  return res;
}

}  // namespace padicrmt
