#include <gtest/gtest.h>

#include "generators.hpp"
#include "padicrmt/poly.hpp"
#include "padicrmt/scalar.hpp"

using namespace padicrmt;

namespace {

// prod_{i,j} (a_i - b_j) for split polynomials; the resultant of monic split
// polynomials by its root formula.
std::uint64_t root_product(const Modulus& m, const std::vector<std::int64_t>& a,
                           const std::vector<std::int64_t>& b) {
  std::uint64_t r = 1 % m.pN();
  for (auto x : a)
    for (auto y : b) r = m.mul(r, m.reduce(x - y));
  return r;
}

std::uint64_t vandermonde_square(const Modulus& m, const std::vector<std::int64_t>& r) {
  std::uint64_t acc = 1 % m.pN();
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) {
      const std::uint64_t d = m.reduce(r[i] - r[j]);
      acc = m.mul(acc, m.mul(d, d));
    }
  return acc;
}

}  // namespace

TEST(Valuation, Examples) {
  EXPECT_EQ(PadicScalar(Modulus(3, 4), 18).valuation(), Valuation(2));
  EXPECT_TRUE(PadicScalar(Modulus(2, 5), 0).valuation().is_saturated());
  EXPECT_EQ(PadicScalar(Modulus(5, 3), 7).valuation(), Valuation(0));
}

TEST(Valuation, NormUndefinedWhenSaturated) {
  EXPECT_DOUBLE_EQ(PadicScalar(Modulus(3, 4), 18).norm(), 1.0 / 9.0);
  EXPECT_THROW(PadicScalar(Modulus(3, 4), 81).norm(), PrecisionExhausted);
}

TEST(Valuation, InvariantHoldsForEveryResidue) {
  const Modulus m(3, 4);
  for (std::int64_t v = 0; v < 81; ++v) {
    const Valuation val = PadicScalar(m, v).valuation();
    if (v == 0) {
      EXPECT_TRUE(val.is_saturated());
      continue;
    }
    std::int64_t pk = 1;
    for (int k = 0; k < val.value(); ++k) pk *= 3;
    EXPECT_EQ(v % pk, 0);
    EXPECT_NE(v % (pk * 3), 0);
  }
}

TEST(Modulus, RejectsBadParameters) {
  EXPECT_THROW(Modulus(4, 2), InvalidParams);
  EXPECT_THROW(Modulus(3, 0), InvalidParams);
  EXPECT_THROW(Modulus(2, 40), InvalidParams);
}

TEST(Modulus, InverseOfUnits) {
  const Modulus m(5, 3);
  for (std::uint64_t a = 1; a < m.pN(); ++a) {
    if (!m.is_unit(a)) {
      EXPECT_THROW(m.inv(a), InvalidParams);
      continue;
    }
    EXPECT_EQ(m.mul(a, m.inv(a)), 1u);
  }
}

TEST(PolyEval, Examples) {
  const Modulus m(5, 2);
  EXPECT_EQ(poly_eval(PadicPoly::from_ints(m, {-1, 0, 1}), PadicScalar(m, 3)).value(), 8u);
  EXPECT_TRUE(poly_eval(PadicPoly::from_ints(m, {0, 1}), PadicScalar(m, 0)).valuation().is_saturated());
  EXPECT_EQ(poly_eval(PadicPoly::from_ints(m, {-1, 1}), PadicScalar(m, 1)).value(), 0u);
}

TEST(PolyEval, MixedModulusIsRejected) {
  const PadicPoly f = PadicPoly::from_ints(Modulus(5, 2), {1, 1});
  EXPECT_THROW(poly_eval(f, PadicScalar(Modulus(5, 3), 1)), MixedModulus);
  EXPECT_THROW(poly_eval(f, PadicScalar(Modulus(3, 2), 1)), MixedModulus);
  EXPECT_THROW(resultant(f, PadicPoly::from_ints(Modulus(3, 2), {1, 1})), MixedModulus);
}

TEST(Resultant, Examples) {
  const Modulus m(7, 3);
  const PadicPoly x = PadicPoly::from_ints(m, {0, 1});
  const PadicScalar r = resultant(x, PadicPoly::from_ints(m, {-1, 1}));
  EXPECT_EQ(r.value(), m.pN() - 1);
  EXPECT_EQ(r.valuation(), Valuation(0));
  EXPECT_TRUE(resultant(x, x).valuation().is_saturated());

  const Modulus m3(3, 4);
  const PadicScalar r3 = resultant(PadicPoly::from_ints(m3, {-3, 0, 1}), PadicPoly::from_ints(m3, {0, 1}));
  EXPECT_EQ(r3.value(), m3.reduce(-3));
  EXPECT_EQ(r3.valuation(), Valuation(1));
}

TEST(Resultant, ConstantsAndZero) {
  const Modulus m(5, 3);
  const PadicPoly f = PadicPoly::from_ints(m, {1, 2, 1});
  EXPECT_EQ(resultant(f, PadicPoly::from_ints(m, {3})).value(), 9u);
  EXPECT_EQ(resultant(PadicPoly::from_ints(m, {3}), f).value(), 9u);
  EXPECT_TRUE(resultant(f, PadicPoly(m)).valuation().is_saturated());
}

TEST(Resultant, MatchesRootFormulaForSplitPolynomials) {
  Rng rng(11, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const Modulus m(gen::prime(rng), 1 + static_cast<int>(rng.uniform(5)));
    std::vector<std::int64_t> a(1 + rng.uniform(4)), b(1 + rng.uniform(4));
    for (auto& x : a) x = static_cast<std::int64_t>(rng.uniform(m.pN()));
    for (auto& y : b) y = static_cast<std::int64_t>(rng.uniform(m.pN()));
    const PadicPoly f = PadicPoly::from_roots(m, a), g = PadicPoly::from_roots(m, b);
    EXPECT_EQ(resultant(f, g).value(), root_product(m, a, b));
  }
}

TEST(Resultant, Multiplicativity) {
  Rng rng(12, 0);
  for (int trial = 0; trial < 250; ++trial) {
    const Modulus m(gen::prime(rng), 1 + static_cast<int>(rng.uniform(6)));
    const PadicPoly f = gen::monic_poly(m, 1 + rng.uniform(4), rng);
    const PadicPoly g = gen::monic_poly(m, 1 + rng.uniform(4), rng);
    const PadicPoly h = gen::monic_poly(m, 1 + rng.uniform(4), rng);
    EXPECT_EQ(resultant(f * g, h), resultant(f, h) * resultant(g, h));
  }
}

TEST(Resultant, ShiftRule) {
  Rng rng(13, 0);
  for (int trial = 0; trial < 250; ++trial) {
    const Modulus m(gen::prime(rng), 1 + static_cast<int>(rng.uniform(6)));
    const PadicPoly f = gen::monic_poly(m, 1 + rng.uniform(5), rng);
    const PadicPoly g = gen::monic_poly(m, rng.uniform(3), rng);
    const PadicPoly h = gen::monic_poly(m, 1 + rng.uniform(3), rng);
    const PadicPoly shifted = f - g * h;
    if (shifted.is_zero()) continue;
    // Res(f, h) = (-1)^{deg f deg h} Res(h, f) = (-1)^{..} prod f(roots of h): depends on f mod h only
    const int sf = f.degree() * h.degree(), ss = shifted.degree() * h.degree();
    PadicScalar lhs = resultant(f, h), rhs = resultant(shifted, h);
    if (sf % 2) lhs = -lhs;
    if (ss % 2) rhs = -rhs;
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Resultant, ResiduePowerRule) {
  Rng rng(14, 0);
  // irreducible residues: x^2+1 over F_3, x^2+x+1 over F_2, x^3+x+1 over F_2
  struct Case {
    std::uint32_t p;
    std::vector<std::int64_t> F;
  };
  const std::vector<Case> cases = {{3, {1, 0, 1}}, {2, {1, 1, 1}}, {2, {1, 1, 0, 1}}, {5, {2, 0, 1}}};
  for (int trial = 0; trial < 240; ++trial) {
    const Case& cs = cases[trial % cases.size()];
    const Modulus m(cs.p, 4);
    const int d = static_cast<int>(cs.F.size()) - 1;
    const int k = 1 + static_cast<int>(rng.uniform(2));
    PadicPoly f = PadicPoly::monomial(m, 0);
    for (int i = 0; i < k; ++i) f = f * PadicPoly::from_ints(m, cs.F);
    std::vector<std::uint64_t> noise(k * d, 0);
    for (auto& x : noise) x = m.p() * rng.uniform(m.pN() / m.p());
    f = f + PadicPoly(m, noise);
    PadicPoly g = gen::monic_poly(m, 1 + rng.uniform(3), rng);
    const Valuation v = resultant(f, g).valuation();
    if (v.is_saturated()) continue;
    EXPECT_EQ(v.value() % d, 0) << "p=" << cs.p << " d=" << d;
  }
}

TEST(Scalar, ValuationAdditivity) {
  Rng rng(15, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const Modulus m(gen::prime(rng), 1 + static_cast<int>(rng.uniform(8)));
    const PadicScalar a = PadicScalar::from_residue(m, rng.uniform(m.pN()));
    const PadicScalar b = PadicScalar::from_residue(m, rng.uniform(m.pN()));
    const Valuation va = a.valuation(), vb = b.valuation(), vab = (a * b).valuation();
    if (va.is_saturated() || vb.is_saturated() || va.value() + vb.value() >= m.N()) continue;
    EXPECT_EQ(vab, Valuation(va.value() + vb.value()));
  }
}

TEST(Discriminant, Examples) {
  const Modulus m(7, 3);
  for (std::int64_t c : {2, 3, 5, 14}) {
    EXPECT_EQ(discriminant(PadicPoly::from_ints(m, {-c, 0, 1})).value(), m.reduce(4 * c));
  }
  EXPECT_EQ(discriminant(PadicPoly::from_ints(m, {0, -1, 1})).value(), 1u);
}

TEST(Discriminant, CubicWithRootsZeroOneMinusOne) {
  const Modulus m(5, 3);
  const std::vector<std::int64_t> roots = {0, 1, -1};
  const PadicScalar d = discriminant(PadicPoly::from_roots(m, roots));
  EXPECT_EQ(d.value(), vandermonde_square(m, roots));
  EXPECT_EQ(d.value(), 4u);
  EXPECT_EQ(d.valuation(), Valuation(0));
}

TEST(Discriminant, MatchesVandermondeSquare) {
  Rng rng(16, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const Modulus m(gen::prime(rng), 1 + static_cast<int>(rng.uniform(6)));
    std::vector<std::int64_t> roots(1 + rng.uniform(5));
    for (auto& r : roots) r = static_cast<std::int64_t>(rng.uniform(m.pN()));
    EXPECT_EQ(discriminant(PadicPoly::from_roots(m, roots)).value(), vandermonde_square(m, roots));
  }
}

TEST(Discriminant, NonUnitLeadingCoefficient) {
  const Modulus m(3, 3);
  EXPECT_THROW(discriminant(PadicPoly::from_ints(m, {1, 0, 3})), NonUnitLeadingCoefficient);
  // a unit but non-monic leading coefficient is fine: 2x^2 + 1 has disc -8
  EXPECT_EQ(discriminant(PadicPoly::from_ints(m, {1, 0, 2})).value(), m.reduce(-8));
}

TEST(Poly, DivremAndTaylorShift) {
  Rng rng(17, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const Modulus m(gen::prime(rng), 1 + static_cast<int>(rng.uniform(6)));
    const PadicPoly f = gen::monic_poly(m, rng.uniform(6), rng);
    const PadicPoly d = gen::monic_poly(m, 1 + rng.uniform(3), rng);
    PadicPoly q(m), r(m);
    f.divrem(d, q, r);
    EXPECT_EQ(q * d + r, f);
    EXPECT_LT(r.degree(), d.degree());
    const std::uint64_t s = rng.uniform(m.pN()), x = rng.uniform(m.pN());
    EXPECT_EQ(f.taylor_shift(s).eval(x), f.eval(m.add(s, x)));
  }
}
