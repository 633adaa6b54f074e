#include "padicrmt/roots.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

#include "padicrmt/rings.hpp"
#include "padicrmt/rng.hpp"

namespace padicrmt {

FpPoly residue(const PadicPoly& f) {
  const std::uint32_t p = f.modulus().p();
  std::vector<std::uint32_t> c;
  c.reserve(f.residues().size());
  for (auto x : f.residues()) c.push_back(static_cast<std::uint32_t>(x % p));
  return FpPoly(p, std::move(c));
}

namespace {

PadicPoly lift(const Modulus& m, const FpPoly& f) {
  std::vector<std::uint64_t> c(f.coeffs().begin(), f.coeffs().end());
  return PadicPoly(m, std::move(c));
}

FpPoly fp_power(const FpPoly& f, int e) {
  FpPoly r = FpPoly::constant(f.p(), 1);
  for (int i = 0; i < e; ++i) r = r * f;
  return r;
}

// Lift f = g*h with residues (gbar, hbar) coprime, gbar monic.
std::pair<PadicPoly, PadicPoly> lift_pair(const PadicPoly& f, const FpPoly& gbar, const FpPoly& hbar) {
  const Modulus& m = f.modulus();
  const std::uint32_t p = m.p();
  FpPoly s(p), t(p);
  ext_gcd(gbar, hbar, s, t);
  PadicPoly g = lift(m, gbar), h = lift(m, hbar);
  for (int k = 1; k < m.N(); ++k) {
    PadicPoly e = f - g * h;
    std::vector<std::uint32_t> ebar;
    for (auto x : e.residues()) ebar.push_back(static_cast<std::uint32_t>((x / m.ppow(k)) % p));
    FpPoly ef(p, std::move(ebar));
    if (ef.is_zero()) continue;
    FpPoly b = (ef * t) % gbar;
    FpPoly a = (ef - b * hbar) / gbar;
    g = g + lift(m, b).scaled(m.ppow(k));
    h = h + lift(m, a).scaled(m.ppow(k));
  }
  return {g, h};
}

std::vector<PadicPoly> hensel_split_with(const PadicPoly& f, const ResidueFactorization& fac) {
  std::vector<PadicPoly> out;
  if (fac.factors.size() <= 1) {
    out.push_back(f);
    return out;
  }
  const std::uint32_t p = f.modulus().p();
  PadicPoly rest = f;
  for (std::size_t i = 0; i + 1 < fac.factors.size(); ++i) {
    FpPoly gbar = fp_power(fac.factors[i].poly, fac.factors[i].multiplicity);
    FpPoly hbar = FpPoly::constant(p, 1);
    for (std::size_t j = i + 1; j < fac.factors.size(); ++j)
      hbar = hbar * fp_power(fac.factors[j].poly, fac.factors[j].multiplicity);
    auto [g, h] = lift_pair(rest, gbar, hbar);
    out.push_back(g);
    rest = h;
  }
  out.push_back(rest);
  return out;
}

// ---- root trees -------------------------------------------------------

struct TreeContext {
  std::uint32_t p;
  bool quadratic;
  std::uint64_t nonresidue;
};

struct TreeResult {
  std::vector<CertifiedRoot> roots;
  std::map<int, int> unramified;  // m -> orbits
  std::map<int, int> ramified;
  bool zp_fail = false;
  bool quad_fail = false;
};

using Coeffs = std::vector<std::uint64_t>;
using PairCoeffs = std::vector<QuadElem>;

FpPoly residue_of(const Coeffs& h, std::uint32_t p) {
  std::vector<std::uint32_t> c;
  for (auto x : h) c.push_back(static_cast<std::uint32_t>(x % p));
  return FpPoly(p, std::move(c));
}

Coeffs taylor_shift(const Modulus& m, Coeffs r, std::uint64_t shift) {
  const int d = static_cast<int>(r.size()) - 1;
  for (int k = 0; k < d; ++k)
    for (int i = d - 1; i >= k; --i) r[i] = m.add(r[i], m.mul(shift, r[i + 1]));
  return r;
}

PairCoeffs taylor_shift(const QuadDvr& R, PairCoeffs r, QuadElem shift) {
  const int d = static_cast<int>(r.size()) - 1;
  for (int k = 0; k < d; ++k)
    for (int i = d - 1; i >= k; --i) r[i] = R.add(r[i], R.mul(shift, r[i + 1]));
  return r;
}

// Number of roots, with multiplicity, of the residue at b.
int residue_multiplicity(FpPoly f, std::uint32_t b) {
  const std::uint32_t p = f.p();
  FpPoly lin(p, {(p - b) % p, 1});
  int k = 0;
  while (!f.is_zero() && f.eval(b) == 0) {
    f = f / lin;
    ++k;
  }
  return k;
}

// Ramified quadratic orbits hanging off a multiple residue root: a slope -1/2
// Newton segment of g(z) = h(b + z) over indices 0..k.
void ramified_check(const Modulus& m, const Coeffs& g, int k, int depth, TreeResult& out) {
  int best = INT_MAX, lo = -1, hi = -1;
  for (int i = 0; i <= k && i < static_cast<int>(g.size()); ++i) {
    if (g[i] == 0) continue;
    const int phi = 2 * m.val(g[i]) + i;
    if (phi < best) {
      best = phi;
      lo = hi = i;
    } else if (phi == best) {
      hi = i;
    }
  }
  for (int i = 0; i <= k && i < static_cast<int>(g.size()); ++i)
    if (g[i] == 0 && 2 * m.N() + i <= best) {
      out.quad_fail = true;
      return;
    }
  const int len = hi - lo;
  if (len == 2)
    ++out.ramified[depth];
  else if (len >= 4)
    out.quad_fail = true;  // several valuation-1/2 roots: field not determined here
}

int pair_val(const Modulus& m, QuadElem x) { return std::min(m.val(x.a), m.val(x.b)); }

int unr_node(const PairCoeffs& h, int prec, const TreeContext& ctx, bool& fail);

// Roots of h (over O_K/p^prec, K unramified) with residue delta.
int unr_branch(const PairCoeffs& h, int prec, QuadElem delta, const TreeContext& ctx, bool& fail) {
  const Modulus m(ctx.p, prec);
  const QuadDvr R = QuadDvr::unramified(m, ctx.nonresidue);
  const Modulus m1(ctx.p, 1);
  const QuadDvr R1 = QuadDvr::unramified(m1, ctx.nonresidue);
  // derivative at delta, mod p
  QuadElem d{};
  for (int i = static_cast<int>(h.size()) - 1; i >= 1; --i) {
    QuadElem c{(h[i].a * i) % ctx.p, (h[i].b * i) % ctx.p};
    d = R1.add(R1.mul(d, delta), c);
  }
  if (!(d == QuadElem{})) return 1;
  PairCoeffs g = taylor_shift(R, h, delta);
  int c = INT_MAX;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == QuadElem{}) continue;
    c = std::min(c, pair_val(m, g[i]) + static_cast<int>(i));
  }
  if (c >= prec) {
    fail = true;
    return 0;
  }
  const Modulus mc(ctx.p, prec - c);
  PairCoeffs child(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == QuadElem{}) continue;
    const int v = pair_val(m, g[i]);
    const int shift = v + static_cast<int>(i) - c;
    if (shift >= prec - c) continue;
    child[i] = {mc.mul((g[i].a / m.ppow(v)) % mc.pN(), mc.ppow(shift)),
                mc.mul((g[i].b / m.ppow(v)) % mc.pN(), mc.ppow(shift))};
  }
  while (!child.empty() && child.back() == QuadElem{}) child.pop_back();
  return unr_node(child, prec - c, ctx, fail);
}

int unr_node(const PairCoeffs& h, int prec, const TreeContext& ctx, bool& fail) {
  const std::uint32_t p = ctx.p;
  const Modulus m1(p, 1);
  const QuadDvr R1 = QuadDvr::unramified(m1, ctx.nonresidue);
  PairCoeffs hbar(h.size());
  bool nonzero = false;
  for (std::size_t i = 0; i < h.size(); ++i) {
    hbar[i] = {h[i].a % p, h[i].b % p};
    if (!(hbar[i] == QuadElem{})) nonzero = true;
  }
  if (!nonzero) {
    fail = true;
    return 0;
  }
  int total = 0;
  for (std::uint32_t a = 0; a < p; ++a)
    for (std::uint32_t b = 0; b < p; ++b) {
      const QuadElem delta{a, b};
      QuadElem v{};
      for (auto it = hbar.rbegin(); it != hbar.rend(); ++it) v = R1.add(R1.mul(v, delta), *it);
      if (v == QuadElem{}) total += unr_branch(h, prec, delta, ctx, fail);
    }
  return total;
}

void zp_node(const Coeffs& h, int prec, std::vector<std::uint32_t>& digits, const TreeContext& ctx,
             TreeResult& out) {
  const std::uint32_t p = ctx.p;
  const Modulus m(p, prec);
  const FpPoly hbar = residue_of(h, p);
  const int depth = static_cast<int>(digits.size());
  if (hbar.is_zero()) {
    out.zp_fail = true;
    if (ctx.quadratic) out.quad_fail = true;
    return;
  }
  const FpPoly dbar = hbar.derivative();
  for (std::uint32_t b = 0; b < p; ++b) {
    if (hbar.eval(b) != 0) continue;
    if (dbar.eval(b) != 0) {
      CertifiedRoot r;
      r.digits = digits;
      r.digits.push_back(b);
      out.roots.push_back(std::move(r));
      continue;
    }
    const int k = residue_multiplicity(hbar, b);
    const Coeffs g = taylor_shift(m, h, b);
    if (ctx.quadratic) ramified_check(m, g, k, depth, out);
    int c = INT_MAX;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i] != 0) c = std::min(c, m.val(g[i]) + static_cast<int>(i));
    if (c >= prec) {
      out.zp_fail = true;
      if (ctx.quadratic) out.quad_fail = true;
      continue;
    }
    const Modulus mc(p, prec - c);
    Coeffs child(g.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] == 0) continue;
      const int v = m.val(g[i]);
      const int shift = v + static_cast<int>(i) - c;
      if (shift >= prec - c) continue;
      child[i] = mc.mul((g[i] / m.ppow(v)) % mc.pN(), mc.ppow(shift));
    }
    while (!child.empty() && child.back() == 0) child.pop_back();
    digits.push_back(b);
    zp_node(child, prec - c, digits, ctx, out);
    digits.pop_back();
  }

  if (!ctx.quadratic) return;
  // residue roots in F_{p^2} \ F_p, one per conjugate pair
  const Modulus m1(p, 1);
  const QuadDvr R1 = QuadDvr::unramified(m1, ctx.nonresidue);
  PairCoeffs lifted(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) lifted[i] = {h[i], 0};
  for (std::uint32_t bt = 1; bt <= (p - 1) / 2; ++bt)
    for (std::uint32_t a = 0; a < p; ++a) {
      const QuadElem delta{a, bt};
      QuadElem v{};
      for (int i = hbar.degree(); i >= 0; --i) v = R1.add(R1.mul(v, delta), QuadElem{hbar.coeff(i), 0});
      if (!(v == QuadElem{})) continue;
      bool fail = false;
      const int roots = unr_branch(lifted, prec, delta, ctx, fail);
      if (fail) out.quad_fail = true;
      if (roots) out.unramified[depth] += roots;
    }
}

TreeResult run_tree(const PadicPoly& f, bool quadratic) {
  const std::uint32_t p = f.modulus().p();
  TreeContext ctx{p, quadratic && p != 2, p != 2 ? smallest_nonresidue(p) : 0};
  TreeResult out;
  std::vector<std::uint32_t> digits;
  zp_node(f.residues(), f.modulus().N(), digits, ctx, out);
  return out;
}

}  // namespace

std::vector<PadicPoly> hensel_split(const PadicPoly& f, Rng* rng) {
  if (!f.monic()) throw NonUnitLeadingCoefficient("hensel_split expects a monic polynomial");
  return hensel_split_with(f, factor_mod_p(residue(f), rng));
}

std::uint64_t CertifiedRoot::approximation(std::uint32_t p) const {
  std::uint64_t v = 0, w = 1;
  for (auto d : digits) {
    v += d * w;
    w *= p;
  }
  return v;
}

int root_distance(const CertifiedRoot& a, const CertifiedRoot& b) {
  const std::size_t n = std::min(a.digits.size(), b.digits.size());
  std::size_t i = 0;
  while (i < n && a.digits[i] == b.digits[i]) ++i;
  return static_cast<int>(i);
}

std::vector<CertifiedRoot> certified_roots_in_zp(const PadicPoly& f) {
  if (!f.monic()) throw NonUnitLeadingCoefficient("root counting expects a monic polynomial");
  TreeResult t = run_tree(f, false);
  if (t.zp_fail) throw PrecisionExhausted("Z_p root not certifiable at precision N");
  return t.roots;
}

int count_roots_in_zp(const PadicPoly& f) { return static_cast<int>(certified_roots_in_zp(f).size()); }

std::map<FpPoly, int> island_multiplicities(const PadicPoly& f) {
  std::map<FpPoly, int> out;
  for (const auto& fac : factor_mod_p(residue(f)).factors) out[fac.poly] = fac.multiplicity;
  return out;
}

std::string to_string(ExtLabel label) {
  switch (label) {
    case ExtLabel::QP: return "Qp";
    case ExtLabel::QUAD_UNRAMIFIED: return "QUAD_UNRAMIFIED";
    case ExtLabel::QUAD_RAMIFIED: return "QUAD_RAMIFIED";
    case ExtLabel::UNRAMIFIED: return "UNRAMIFIED";
    case ExtLabel::OTHER: return "OTHER";
  }
  return "OTHER";
}

ExtLabel ext_label_from_string(const std::string& s) {
  if (s == "Qp") return ExtLabel::QP;
  if (s == "QUAD_UNRAMIFIED" || s == "UNRAMIFIED_QUAD" || s == "unramified") return ExtLabel::QUAD_UNRAMIFIED;
  if (s == "QUAD_RAMIFIED" || s == "ramified") return ExtLabel::QUAD_RAMIFIED;
  if (s == "UNRAMIFIED") return ExtLabel::UNRAMIFIED;
  if (s == "OTHER") return ExtLabel::OTHER;
  throw InvalidParams("unknown extension label '" + s + "'");
}

double ExtensionDescriptor::disc_norm(std::uint32_t p) const {
  return std::pow(static_cast<double>(p), -static_cast<double>(disc_exponent));
}

ExtensionDescriptor classify_quadratic(const PadicPoly& g) {
  const Modulus& m = g.modulus();
  if (m.p() == 2) throw UnsupportedPrime("quadratic classification is implemented for odd p only");
  if (g.degree() != 2 || !g.monic()) throw InvalidParams("classify_quadratic expects a monic quadratic");
  if (count_roots_in_zp(g) != 0) throw InvalidParams("quadratic has a root in Z_p");
  const PadicScalar disc = discriminant(g);
  const Valuation v = disc.valuation();
  if (v.is_saturated() || v.value() >= m.N() - 1)
    throw PrecisionExhausted("discriminant valuation not resolved at precision N");
  ExtensionDescriptor d;
  d.degree = 2;
  if (v.value() % 2 == 0) {
    d.label = ExtLabel::QUAD_UNRAMIFIED;
    d.ram_index = 1;
    d.residue_degree = 2;
    d.disc_exponent = 0;
    d.m = v.value() / 2;
  } else {
    d.label = ExtLabel::QUAD_RAMIFIED;
    d.ram_index = 2;
    d.residue_degree = 1;
    d.disc_exponent = 1;
    d.m = (v.value() - 1) / 2;
  }
  return d;
}

Census census_of_poly(const PadicPoly& f, const CensusOptions& opts) {
  if (!f.monic()) throw NonUnitLeadingCoefficient("census expects a monic polynomial");
  const bool quad = opts.quadratic && f.modulus().p() != 2;
  Census c;
  const ResidueFactorization fac = factor_mod_p(residue(f));
  for (const auto& irr : fac.factors) c.island_map[irr.poly] = irr.multiplicity;
  const std::vector<PadicPoly> parts = hensel_split_with(f, fac);

  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& irr = fac.factors[i];
    if (irr.degree == 3 && irr.multiplicity == 1) ++c.cubic_unramified_orbits;
    if (irr.degree > 2 || (irr.degree == 2 && !quad)) continue;
    if (irr.degree == 2 && irr.multiplicity == 1) {
      ++c.quad_counts[{ExtLabel::QUAD_UNRAMIFIED, 0}];
      continue;
    }
    TreeResult t = run_tree(parts[i], quad);
    if (irr.degree == 1) {
      c.zp_partial = c.zp_partial || t.zp_fail;
      for (auto& r : t.roots) c.zp_roots.push_back(std::move(r));
    }
    c.quad_partial = c.quad_partial || t.quad_fail;
    for (const auto& [m, k] : t.unramified) c.quad_counts[{ExtLabel::QUAD_UNRAMIFIED, m}] += k;
    for (const auto& [m, k] : t.ramified) c.quad_counts[{ExtLabel::QUAD_RAMIFIED, m}] += k;
  }
  c.zp_count = static_cast<int>(c.zp_roots.size());
  for (std::size_t i = 0; i < c.zp_roots.size(); ++i)
    for (std::size_t j = i + 1; j < c.zp_roots.size(); ++j)
      c.pairwise_valuations.push_back(root_distance(c.zp_roots[i], c.zp_roots[j]));
  std::sort(c.pairwise_valuations.begin(), c.pairwise_valuations.end());
  return c;
}

Census eigenvalue_census(const PadicMatrix& a, const CensusOptions& opts) {
  return census_of_poly(charpoly(a), opts);
}

namespace {

// F_2 matrices as rows of 64-bit words
struct BitMatrix {
  int n;
  int words;
  std::vector<std::uint64_t> bits;
  explicit BitMatrix(int n_) : n(n_), words((n_ + 63) / 64), bits(static_cast<std::size_t>(n_) * ((n_ + 63) / 64), 0) {}
  std::uint64_t* row(int i) { return &bits[static_cast<std::size_t>(i) * words]; }
  const std::uint64_t* row(int i) const { return &bits[static_cast<std::size_t>(i) * words]; }
  bool get(int i, int j) const { return (row(i)[j >> 6] >> (j & 63)) & 1; }
  void flip(int i, int j) { row(i)[j >> 6] ^= (1ULL << (j & 63)); }
};

BitMatrix bit_mul(const BitMatrix& a, const BitMatrix& b) {
  BitMatrix c(a.n);
  for (int i = 0; i < a.n; ++i) {
    std::uint64_t* ci = c.row(i);
    for (int k = 0; k < a.n; ++k)
      if (a.get(i, k)) {
        const std::uint64_t* bk = b.row(k);
        for (int w = 0; w < a.words; ++w) ci[w] ^= bk[w];
      }
  }
  return c;
}

int bit_rank(BitMatrix a) {
  int rank = 0;
  for (int col = 0; col < a.n && rank < a.n; ++col) {
    int piv = -1;
    for (int r = rank; r < a.n; ++r)
      if (a.get(r, col)) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int w = 0; w < a.words; ++w) std::swap(a.row(piv)[w], a.row(rank)[w]);
    for (int r = 0; r < a.n; ++r)
      if (r != rank && a.get(r, col))
        for (int w = 0; w < a.words; ++w) a.row(r)[w] ^= a.row(rank)[w];
    ++rank;
  }
  return rank;
}

using DenseFp = std::vector<std::uint32_t>;

DenseFp dense_mul(const DenseFp& a, const DenseFp& b, int n, std::uint32_t p) {
  DenseFp c(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const std::uint64_t aik = a[static_cast<std::size_t>(i) * n + k];
      if (!aik) continue;
      for (int j = 0; j < n; ++j)
        c[static_cast<std::size_t>(i) * n + j] =
            static_cast<std::uint32_t>((c[static_cast<std::size_t>(i) * n + j] + aik * b[static_cast<std::size_t>(k) * n + j]) % p);
    }
  return c;
}

}  // namespace

int island_multiplicity_fp(const std::vector<std::uint32_t>& a_mod_p, int n, const FpPoly& F) {
  const std::uint32_t p = F.p();
  if (static_cast<int>(a_mod_p.size()) != n * n) throw InvalidParams("matrix entry count must be n*n");
  if (F.degree() < 1) throw InvalidParams("island polynomial must be nonconstant");
  int rank;
  if (p == 2) {
    BitMatrix a(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (a_mod_p[static_cast<std::size_t>(i) * n + j] % 2) a.flip(i, j);
    // B = F(A) by Horner
    BitMatrix B(n);
    for (int d = F.degree(); d >= 0; --d) {
      B = bit_mul(B, a);
      if (F.coeff(d))
        for (int i = 0; i < n; ++i) B.flip(i, i);
    }
    // rank of F(A)^k is non-increasing and constant once it stalls
    BitMatrix power = B;
    int prev = n + 1;
    rank = bit_rank(power);
    while (rank < prev && rank > 0) {
      prev = rank;
      power = bit_mul(power, B);
      rank = bit_rank(power);
    }
  } else {
    DenseFp a(a_mod_p);
    for (auto& x : a) x %= p;
    DenseFp b(static_cast<std::size_t>(n) * n, 0);
    for (int d = F.degree(); d >= 0; --d) {
      b = dense_mul(b, a, n, p);
      for (int i = 0; i < n; ++i)
        b[static_cast<std::size_t>(i) * n + i] = (b[static_cast<std::size_t>(i) * n + i] + F.coeff(d)) % p;
    }
    const Modulus residue_field(p, 1);
    auto rank_of = [&](const DenseFp& m) {
      return rank_mod_p(residue_field, n, n, std::vector<std::uint64_t>(m.begin(), m.end()));
    };
    DenseFp power = b;
    int prev = n + 1;
    rank = rank_of(power);
    while (rank < prev && rank > 0) {
      prev = rank;
      power = dense_mul(power, b, n, p);
      rank = rank_of(power);
    }
  }
  return (n - rank) / F.degree();
}

}  // namespace padicrmt
