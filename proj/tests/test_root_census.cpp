#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "generators.hpp"
#include "padicrmt/fp_poly.hpp"
#include "padicrmt/matrix.hpp"
#include "padicrmt/roots.hpp"

using namespace padicrmt;

namespace {

FpPoly product_of(const ResidueFactorization& fac, std::uint32_t p) {
  FpPoly acc = FpPoly::constant(p, 1);
  for (const auto& f : fac.factors)
    for (int k = 0; k < f.multiplicity; ++k) acc = acc * f.poly;
  return acc;
}

PadicPoly companion_charpoly_of(const PadicPoly& f) {
  const int n = f.degree();
  const Modulus& m = f.modulus();
  PadicMatrix a = PadicMatrix::zeros(m, n);
  for (int i = 1; i < n; ++i) a.set(i, i - 1, 1);
  for (int i = 0; i < n; ++i) a.set(i, n - 1, m.neg(f.coeff(i)));
  return charpoly(a);
}

int v2(std::int64_t x, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (x % 2 == 0 && v < cap) {
    x /= 2;
    ++v;
  }
  return v;
}

// Classical Hensel certificate over residues mod 8: a certifies a unique root
// in a + 2^{e+1} Z_2 when v(f(a)) > 2 v(f'(a)) = 2e. Returns -1 if some class
// with f(a) = 0 mod 8 is left undecided.
int brute_force_root_count_mod8(std::int64_t c0, std::int64_t c1) {
  // f = x^2 + c1 x + c0
  std::set<std::pair<int, int>> discs;
  for (std::int64_t a = 0; a < 8; ++a) {
    const int vf = v2(a * a + c1 * a + c0, 3);
    if (vf < 3) continue;
    const int e = v2(2 * a + c1, 3);
    if (vf <= 2 * e) return -1;
    const int width = e + 1;
    discs.insert({static_cast<int>(a % (1 << width)), width});
  }
  return static_cast<int>(discs.size());
}

}  // namespace

TEST(FactorModP, Examples) {
  const auto f1 = factor_mod_p(FpPoly::from_ints(3, {-1, 0, 1}));
  ASSERT_EQ(f1.factors.size(), 2u);
  EXPECT_EQ(f1.factors[0].poly, FpPoly::from_ints(3, {1, 1}));
  EXPECT_EQ(f1.factors[1].poly, FpPoly::from_ints(3, {2, 1}));

  const auto f2 = factor_mod_p(FpPoly::from_ints(3, {1, 0, 1}));
  ASSERT_EQ(f2.factors.size(), 1u);
  EXPECT_EQ(f2.factors[0].degree, 2);
  EXPECT_EQ(f2.factors[0].multiplicity, 1);

  const auto f3 = factor_mod_p(FpPoly::from_ints(2, {0, 0, 0, 1}));
  ASSERT_EQ(f3.factors.size(), 1u);
  EXPECT_EQ(f3.factors[0].poly, FpPoly::x(2));
  EXPECT_EQ(f3.factors[0].multiplicity, 3);
}

TEST(FactorModP, ProductOfIrreduciblesReconstructsInput) {
  Rng rng(50, 0);
  const std::uint32_t primes[] = {2, 3, 5, 7, 13, 101};
  for (int trial = 0; trial < 400; ++trial) {
    const std::uint32_t p = primes[rng.uniform(6)];
    const int d = 1 + static_cast<int>(rng.uniform(10));
    std::vector<std::uint32_t> c(d + 1);
    for (auto& x : c) x = static_cast<std::uint32_t>(rng.uniform(p));
    c[d] = 1;
    // repeated factors often enough to exercise the squarefree step
    FpPoly f(p, c);
    if (trial % 4 == 0) f = f * f;
    const auto fac = factor_mod_p(f, &rng);
    EXPECT_EQ(product_of(fac, p), f);
    EXPECT_EQ(fac.total_degree(), f.degree());
    for (std::size_t i = 0; i < fac.factors.size(); ++i) {
      EXPECT_TRUE(is_irreducible(fac.factors[i].poly));
      EXPECT_EQ(fac.factors[i].poly.leading(), 1u);
      for (std::size_t j = i + 1; j < fac.factors.size(); ++j) EXPECT_NE(fac.factors[i].poly, fac.factors[j].poly);
    }
  }
}

TEST(FactorModP, DeterministicWithoutCallerStream) {
  Rng rng(51, 0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint32_t> c(7);
    for (auto& x : c) x = static_cast<std::uint32_t>(rng.uniform(7));
    c[6] = 1;
    const FpPoly f(7, c);
    const auto a = factor_mod_p(f), b = factor_mod_p(f);
    ASSERT_EQ(a.factors.size(), b.factors.size());
    for (std::size_t i = 0; i < a.factors.size(); ++i) EXPECT_EQ(a.factors[i].poly, b.factors[i].poly);
  }
}

TEST(Hensel, Examples) {
  const Modulus m81(3, 4);
  const auto parts = hensel_split(PadicPoly::from_ints(m81, {0, -1, 1}));
  ASSERT_EQ(parts.size(), 2u);
  std::set<std::vector<std::uint64_t>> got{parts[0].residues(), parts[1].residues()};
  EXPECT_TRUE(got.count(PadicPoly::from_ints(m81, {0, 1}).residues()));
  EXPECT_TRUE(got.count(PadicPoly::from_ints(m81, {-1, 1}).residues()));

  const Modulus m5(5, 3);
  const PadicPoly irr = PadicPoly::from_ints(m5, {2, 0, 1});
  const auto single = hensel_split(irr);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0], irr);

  const PadicPoly f = PadicPoly::from_ints(m5, {2, 3, 1});
  const auto lin = hensel_split(f);
  ASSERT_EQ(lin.size(), 2u);
  EXPECT_EQ(lin[0] * lin[1], f);
  std::set<std::vector<std::uint64_t>> got5{lin[0].residues(), lin[1].residues()};
  EXPECT_TRUE(got5.count(PadicPoly::from_ints(m5, {1, 1}).residues()));
  EXPECT_TRUE(got5.count(PadicPoly::from_ints(m5, {2, 1}).residues()));
}

TEST(Hensel, FactorsMultiplyBackExactly) {
  Rng rng(52, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const Modulus m(gen::prime(rng), 1 + static_cast<int>(rng.uniform(8)));
    const PadicPoly f = gen::monic_poly(m, 1 + static_cast<int>(rng.uniform(8)), rng);
    const auto parts = hensel_split(f, &rng);
    PadicPoly prod = PadicPoly::from_ints(m, {1});
    for (const auto& g : parts) {
      EXPECT_TRUE(g.monic());
      prod = prod * g;
    }
    EXPECT_EQ(prod, f);
    // each part is a power of one residue irreducible
    const auto fac = factor_mod_p(residue(f));
    ASSERT_EQ(parts.size(), fac.factors.size());
    for (const auto& g : parts) EXPECT_EQ(factor_mod_p(residue(g)).factors.size(), 1u);
  }
}

TEST(CountRoots, Examples) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const Modulus m(p, 6);
    EXPECT_EQ(count_roots_in_zp(PadicPoly::from_ints(m, {0, -1, 1})), 2);
    EXPECT_EQ(count_roots_in_zp(PadicPoly::from_ints(m, {-static_cast<std::int64_t>(p), 0, 1})), 0);
    EXPECT_EQ(count_roots_in_zp(PadicPoly::from_ints(m, {0, -static_cast<std::int64_t>(p), 1})), 2);
  }
  EXPECT_EQ(count_roots_in_zp(PadicPoly::from_ints(Modulus(5, 4), {-6, 0, 1})), 2);
  EXPECT_EQ(count_roots_in_zp(PadicPoly::from_ints(Modulus(5, 4), {-2, 0, 1})), 0);
  // 17 = 1 mod 8 is a 2-adic square
  EXPECT_EQ(count_roots_in_zp(PadicPoly::from_ints(Modulus(2, 8), {-17, 0, 1})), 2);
  EXPECT_EQ(count_roots_in_zp(PadicPoly::from_ints(Modulus(2, 8), {-5, 0, 1})), 0);
  EXPECT_THROW(count_roots_in_zp(PadicPoly::from_ints(Modulus(3, 3), {0, 0, 1})), PrecisionExhausted);
}

TEST(CountRoots, CertifiedApproximationsAreRootsToStatedPrecision) {
  Rng rng(53, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const Modulus m(gen::prime(rng), 8);
    const PadicPoly f = gen::monic_poly(m, 1 + static_cast<int>(rng.uniform(5)), rng);
    std::vector<CertifiedRoot> roots;
    try {
      roots = certified_roots_in_zp(f);
    } catch (const PrecisionExhausted&) {
      continue;
    }
    for (const auto& r : roots) {
      const int k = static_cast<int>(r.digits.size());
      // f(approx) has valuation at least the number of digits fixed
      EXPECT_GE(m.val(f.eval(r.approximation(m.p()))), std::min(k, m.N()));
    }
    for (std::size_t i = 0; i < roots.size(); ++i)
      for (std::size_t j = i + 1; j < roots.size(); ++j)
        EXPECT_LT(root_distance(roots[i], roots[j]), static_cast<int>(std::min(roots[i].digits.size(), roots[j].digits.size())));
  }
}

TEST(CountRoots, AdditiveOverCoprimeResidues) {
  Rng rng(54, 0);
  int checked = 0;
  for (int trial = 0; trial < 2000 && checked < 250; ++trial) {
    const Modulus m(gen::prime(rng), 7);
    const PadicPoly f = gen::monic_poly(m, 1 + static_cast<int>(rng.uniform(4)), rng);
    const PadicPoly g = gen::monic_poly(m, 1 + static_cast<int>(rng.uniform(4)), rng);
    if (gcd(residue(f), residue(g)).degree() > 0) continue;
    int cf, cg;
    try {
      cf = count_roots_in_zp(f);
      cg = count_roots_in_zp(g);
    } catch (const PrecisionExhausted&) {
      EXPECT_THROW(count_roots_in_zp(f * g), PrecisionExhausted);
      continue;
    }
    EXPECT_EQ(count_roots_in_zp(f * g), cf + cg);
    ++checked;
  }
  EXPECT_GE(checked, 200);
}

TEST(CountRoots, AgreesWithFromRootsConstruction) {
  Rng rng(55, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t p = gen::prime(rng);
    const Modulus m(p, 10);
    // distinct residues mod p give simple residue roots
    std::vector<std::int64_t> roots;
    std::set<std::int64_t> seen;
    const int k = 1 + static_cast<int>(rng.uniform(p));
    while (static_cast<int>(roots.size()) < k) {
      const std::int64_t r = static_cast<std::int64_t>(rng.uniform(m.pN()));
      if (seen.insert(r % p).second) roots.push_back(r);
    }
    EXPECT_EQ(count_roots_in_zp(PadicPoly::from_roots(m, roots)), k);
  }
}

TEST(Islands, Examples) {
  const Modulus m(3, 3);
  const auto isl = island_multiplicities(charpoly(PadicMatrix::diag(m, {0, 3, 4})));
  ASSERT_EQ(isl.size(), 2u);
  EXPECT_EQ(isl.at(FpPoly::x(3)), 2);
  EXPECT_EQ(isl.at(FpPoly::from_ints(3, {-1, 1})), 1);

  // x^3 - x - 1 is irreducible over F_3
  const auto cubic = island_multiplicities(PadicPoly::from_ints(m, {-1, -1, 0, 1}));
  ASSERT_EQ(cubic.size(), 1u);
  EXPECT_EQ(cubic.begin()->second, 1);
}

TEST(Islands, FastPathMatchesFactorization) {
  Rng rng(56, 0);
  for (int trial = 0; trial < 150; ++trial) {
    const std::uint32_t p = (trial % 3 == 0) ? 2 : gen::prime(rng);
    const int n = 1 + static_cast<int>(rng.uniform(7));
    const PadicMatrix a = sample_matrix(n, p, 1, MatrixMode::MAT, rng);
    std::vector<std::uint32_t> amod(a.raw().begin(), a.raw().end());
    const auto isl = island_multiplicities(charpoly(a));
    for (const auto& [F, mult] : isl) EXPECT_EQ(island_multiplicity_fp(amod, n, F), mult);
    EXPECT_EQ(island_multiplicity_fp(amod, n, FpPoly::x(p)), isl.count(FpPoly::x(p)) ? isl.at(FpPoly::x(p)) : 0);
  }
}

TEST(Islands, LargeBinaryMatrixUsesPackedPath) {
  // block diag(J, I) with J nilpotent of size 40: x-island has multiplicity 40
  const int n = 70;
  std::vector<std::uint32_t> a(n * n, 0);
  for (int i = 0; i + 1 < 40; ++i) a[i * n + i + 1] = 1;
  for (int i = 40; i < n; ++i) a[i * n + i] = 1;
  EXPECT_EQ(island_multiplicity_fp(a, n, FpPoly::x(2)), 40);
  EXPECT_EQ(island_multiplicity_fp(a, n, FpPoly::from_ints(2, {1, 1})), 30);
  EXPECT_EQ(island_multiplicity_fp(a, n, FpPoly::from_ints(2, {1, 1, 1})), 0);
}

TEST(Islands, GlMatricesNeverHaveMassAtZero) {
  Rng rng(57, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t p = gen::prime(rng);
    const PadicMatrix a = sample_matrix(1 + static_cast<int>(rng.uniform(6)), p, 3, MatrixMode::GL, rng);
    EXPECT_EQ(eigenvalue_census(a).island_map.count(FpPoly::x(p)), 0u);
  }
}

TEST(Classify, Examples) {
  const auto unr = classify_quadratic(PadicPoly::from_ints(Modulus(5, 6), {-2, 0, 1}));
  EXPECT_EQ(unr.label, ExtLabel::QUAD_UNRAMIFIED);
  EXPECT_EQ(unr.m, 0);
  EXPECT_EQ(unr.ram_index * unr.residue_degree, unr.degree);
  EXPECT_DOUBLE_EQ(unr.disc_norm(5), 1.0);

  const auto ram = classify_quadratic(PadicPoly::from_ints(Modulus(3, 6), {-3, 0, 1}));
  EXPECT_EQ(ram.label, ExtLabel::QUAD_RAMIFIED);
  EXPECT_EQ(ram.m, 0);
  EXPECT_EQ(ram.ram_index, 2);
  EXPECT_DOUBLE_EQ(ram.disc_norm(3), 1.0 / 3);

  const auto deep = classify_quadratic(PadicPoly::from_ints(Modulus(3, 8), {-18, 0, 1}));
  EXPECT_EQ(deep.label, ExtLabel::QUAD_UNRAMIFIED);
  EXPECT_EQ(deep.m, 1);

  EXPECT_THROW(classify_quadratic(PadicPoly::from_ints(Modulus(2, 6), {1, 1, 1})), UnsupportedPrime);
  EXPECT_THROW(classify_quadratic(PadicPoly::from_ints(Modulus(3, 3), {-27 * 2 / 3, 0, 1})), PrecisionExhausted);
}

TEST(Classify, LabelsRoundTripThroughStrings) {
  for (ExtLabel l : {ExtLabel::QP, ExtLabel::QUAD_UNRAMIFIED, ExtLabel::QUAD_RAMIFIED, ExtLabel::UNRAMIFIED, ExtLabel::OTHER})
    EXPECT_EQ(ext_label_from_string(to_string(l)), l);
  EXPECT_THROW(ext_label_from_string("bogus"), InvalidParams);
}

TEST(Census, Examples) {
  const Census c = eigenvalue_census(PadicMatrix::diag(Modulus(3, 5), {0, 1}));
  EXPECT_EQ(c.zp_count, 2);
  EXPECT_EQ(c.pairwise_valuations, (std::vector<int>{0}));
  EXPECT_FALSE(c.partial());

  const Modulus m5(5, 5);
  const Census q = census_of_poly(companion_charpoly_of(PadicPoly::from_ints(m5, {-2, 0, 1})));
  EXPECT_EQ(q.zp_count, 0);
  ASSERT_EQ(q.quad_counts.size(), 1u);
  EXPECT_EQ((q.quad_counts.at({ExtLabel::QUAD_UNRAMIFIED, 0})), 1);

  const Census r = census_of_poly(PadicPoly::from_ints(Modulus(3, 6), {-3, 0, 1}));
  EXPECT_EQ(r.zp_count, 0);
  EXPECT_EQ((r.quad_counts.at({ExtLabel::QUAD_RAMIFIED, 0})), 1);

  // roots 0, p, 1 + p^2: pairwise valuations {0, 0, 1}
  const Modulus m3(3, 8);
  const Census d = census_of_poly(PadicPoly::from_roots(m3, {0, 3, 10}));
  EXPECT_EQ(d.zp_count, 3);
  EXPECT_EQ(d.pairwise_valuations, (std::vector<int>{0, 0, 1}));
}

TEST(Census, DegreeConservation) {
  Rng rng(58, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t p = gen::prime(rng);
    const int n = 1 + static_cast<int>(rng.uniform(7));
    const Census c = eigenvalue_census(sample_matrix(n, p, 4, MatrixMode::MAT, rng));
    int total = 0;
    for (const auto& [F, mult] : c.island_map) total += F.degree() * mult;
    EXPECT_EQ(total, n);
    int quad_roots = 0;
    for (const auto& [key, k] : c.quad_counts) quad_roots += 2 * k;
    if (!c.partial()) EXPECT_LE(c.zp_count + quad_roots + 3 * c.cubic_unramified_orbits, n);
  }
}

TEST(Census, QuadraticOrbitsMatchDiscriminantClassification) {
  Rng rng(59, 0);
  int checked = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const std::uint32_t p = (trial % 2) ? 3 : 5;
    const Modulus m(p, 9);
    PadicPoly g = gen::monic_poly(m, 2, rng);
    // push roots deeper: g(x) -> p^{-2} g(p x) shape by scaling coefficients
    if (trial % 3 == 0) g = PadicPoly(m, {m.mul(g.coeff(0), p * p), m.mul(g.coeff(1), p), 1});
    const Census c = census_of_poly(g);
    if (c.partial() || c.zp_count != 0) continue;
    ExtensionDescriptor d;
    try {
      d = classify_quadratic(g);
    } catch (const PrecisionExhausted&) {
      continue;
    }
    ASSERT_EQ(c.quad_counts.size(), 1u) << "trial " << trial;
    EXPECT_EQ(c.quad_counts.begin()->first, std::make_pair(d.label, d.m)) << "trial " << trial;
    EXPECT_EQ(c.quad_counts.begin()->second, 1);
    ++checked;
  }
  EXPECT_GE(checked, 500);
}

TEST(Census, MatchesBruteForceOnAllTwoByTwoMatricesModEight) {
  const Modulus m(2, 3);
  int flagged = 0;
  for (int bits = 0; bits < 4096; ++bits) {
    const std::int64_t a = bits & 7, b = (bits >> 3) & 7, c = (bits >> 6) & 7, d = (bits >> 9) & 7;
    const PadicMatrix mat = PadicMatrix::from_ints(m, 2, {a, b, c, d});
    const Census census = eigenvalue_census(mat);
    const int oracle = brute_force_root_count_mod8(a * d - b * c, -(a + d));
    if (oracle < 0) {
      EXPECT_TRUE(census.zp_partial) << "matrix " << bits;
      ++flagged;
    } else {
      EXPECT_FALSE(census.zp_partial) << "matrix " << bits;
      EXPECT_EQ(census.zp_count, oracle) << "matrix " << bits;
    }
  }
  EXPECT_LT(flagged, 4096);
}

TEST(Census, HaarMeanZpCountIsOne) {
  Rng rng(60, 0);
  const int trials = 100000;
  long sum = 0, sum2 = 0, used = 0;
  for (int i = 0; i < trials; ++i) {
    const Census c = eigenvalue_census(sample_matrix(6, 3, 10, MatrixMode::MAT, rng), {false});
    if (c.zp_partial) continue;
    sum += c.zp_count;
    sum2 += static_cast<long>(c.zp_count) * c.zp_count;
    ++used;
  }
  EXPECT_GT(used, trials * 0.99);
  const double mean = static_cast<double>(sum) / used;
  const double var = static_cast<double>(sum2) / used - mean * mean;
  EXPECT_NEAR(mean, 1.0, 3 * std::sqrt(var / used));
}
