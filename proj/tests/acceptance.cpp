// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "padicrmt/catalog.hpp"
#include "padicrmt/experiment.hpp"
#include "padicrmt/markov.hpp"
#include "padicrmt/qseries.hpp"

using namespace padicrmt;

namespace {

struct Result {
  bool pass = true;
  std::ostringstream notes;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

RunResult run(const std::string& name, const Overrides& ov = {}) { return run_experiment(build_experiment(name, ov)); }

bool passed(const RunResult& r) { return r.verdict.outcome == Outcome::PASS; }

std::string str(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

Rational rpow(long base, int e) {
  Rational out(1);
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

double poch_direct(double a, double t, int factors) {
  double prod = 1.0;
  for (int i = 0; i < factors; ++i) prod *= 1.0 - a * std::pow(t, i);
  return prod;
}

void points_split(Result& res) {
  const std::pair<long, int> grid[] = {{2, 1}, {2, 2}, {3, 1}};
  for (auto [p, s] : grid) {
    const RunResult r = run("points_on_variety", {{"p", std::to_string(p)}, {"s", std::to_string(s)}, {"r", "2"},
                                                  {"points", "0,1"}, {"label", "MAT"}});
    const Rational pinv = Rational(1) / p;
    const Rational target = (1 - pinv) * (1 - pinv * pinv) / ((1 - pinv) * (1 - pinv));
    const Rational scaled = r.exact->lo.at(0) * rpow(p, 2 * s);
    res.require(passed(r), "verdict at p=" + std::to_string(p));
    res.require(r.exact->lo[0] == r.exact->hi[0], "zero width");
    res.require(scaled == target, "p^{2s} P == target");
    res.notes << " (p=" << p << ",s=" << s << "): " << scaled << " vs " << target << ";";
  }
}

void points_poly(Result& res) {
  const std::pair<long, int> grid[] = {{2, 1}, {2, 2}, {3, 1}};
  for (auto [p, s] : grid) {
    const RunResult r = run("poly_variety", {{"p", std::to_string(p)}, {"s", std::to_string(s)}, {"points", "0,1"}});
    const Rational scaled = r.exact->lo.at(0) * rpow(p, 2 * s);
    res.require(passed(r), "verdict");
    res.require(r.exact->lo[0] == r.exact->hi[0], "zero width");
    res.require(scaled == Rational(1), "p^{2s} P == 1");
    res.notes << " (p=" << p << ",s=" << s << "): " << scaled << ";";
  }
}

void expected_zp(Result& res) {
  const RunResult r = run("E_Zp_count", {{"p", "3"}, {"n", "6"}, {"N", "10"}, {"trials", "100000"}});
  res.require(passed(r), "within 3 se");
  res.require(!r.spec.asymptotic, "no asymptotic slack");
  res.require(r.estimate->discard_rate < 0.01, "discard rate < 1%");
  res.notes << " estimate " << str(r.estimate->estimate[0]) << " +- " << str(r.estimate->se[0]) << ", discard "
            << str(r.estimate->discard_rate) << ";";
}

void det_moments(Result& res) {
  for (int p : {2, 3})
    for (int n : {1, 2, 3})
      for (int k : {1, 2}) {
        const RunResult r = run("det_moment", {{"p", std::to_string(p)}, {"n", std::to_string(n)}, {"k", std::to_string(k)},
                                               {"trials", "100000"}, {"run_mode", "MONTE_CARLO"}});
        res.require(passed(r), "p=" + std::to_string(p) + " n=" + std::to_string(n) + " k=" + std::to_string(k));
        res.notes << " " << p << "/" << n << "/" << k << ": z=" << str(r.verdict.z) << ";";
      }
  const RunResult e = run("det_moment", {{"p", "2"}, {"n", "1"}, {"N", "8"}, {"k", "1"}, {"run_mode", "EXHAUSTIVE"}});
  const Rational lo = e.exact->lo.at(0), hi = e.exact->hi.at(0);
  res.require(passed(e), "exhaustive verdict");
  res.require(lo <= Rational(2, 3) && Rational(2, 3) <= hi, "interval contains 2/3");
  res.require(hi - lo <= Rational(1, 128), "width <= 2^-7");
  res.notes << " exhaustive [" << lo << ", " << hi << "];";
}

// E[t^{2(l_1+...+l_m)} g(l_m)] from infinity by summing over chains with l_1 <= cap.
double chain_sum(double t, int m, AgVariant variant, int cap) {
  const MarkovParams mp{t, 1.0, 1.0};
  std::vector<double> w(cap + 1);
  for (int b = 0; b <= cap; ++b) w[b] = markov_kernel_prob(mp, kInfState, b).value * std::pow(t, 2.0 * b);
  for (int step = 1; step < m; ++step) {
    std::vector<double> next(cap + 1, 0.0);
    for (int a = 0; a <= cap; ++a)
      for (int b = 0; b <= a; ++b) next[b] += w[a] * markov_kernel_prob(mp, a, b).value * std::pow(t, 2.0 * b);
    w = next;
  }
  double acc = 0;
  for (int b = 0; b <= cap; ++b) {
    const double pb = poch_direct(t, t, b);
    acc += w[b] * two_point_weight(variant, t, b) * pb * pb;
  }
  return acc;
}

void markov_machinery(Result& res) {
  const std::pair<double, double> grid[] = {{0.5, 1.0}, {1.0 / 3, 1.0}, {0.5, 0.25}, {1.0 / 3, 1.5}};
  double row_err = 0, spectral_err = 0;
  for (auto [t, u] : grid) {
    const MarkovParams mp{t, u, 1.0};
    for (int a = 0; a <= 30; ++a) {
      double row = 0;
      for (int b = 0; b <= a; ++b) row += markov_kernel_prob(mp, a, b).value;
      row_err = std::max(row_err, std::fabs(row - 1.0));
    }
    const int size = 30;
    const SpectralMatrices s = markov_spectral(mp, size, ConventionPolicy::LIMIT);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) {
        double acc = 0;
        for (int k = 0; k < size; ++k) acc += s.u(i, k) * s.e(k) * s.uinv(k, j);
        const double direct = j <= i ? std::pow(t, j * j) * std::pow(u, j) / poch_direct(t, t, i - j) : 0.0;
        spectral_err = std::max(spectral_err, std::fabs(acc - direct));
      }
  }
  const AgVariant variants[] = {AgVariant::SQ_INV, AgVariant::INV, AgVariant::INV2};
  double expand_err = 0, series_err = 0;
  for (double t : {0.5, 1.0 / 3}) {
    const SpectralMatrices s = markov_spectral({t, 1.0, t * t}, 26);
    for (AgVariant v : variants) {
      for (int ell = 0; ell <= 25; ++ell) {
        double acc = 0;
        for (int j = 0; j <= ell; ++j) acc += two_point_coefficient(v, t, j) * s.u(ell, j);
        expand_err = std::max(expand_err, std::fabs(acc - two_point_weight(v, t, ell)));
      }
      for (int m = 1; m <= 3; ++m)
        series_err = std::max(series_err, std::fabs(andrews_gordon_expectation(t, m, v).value - chain_sum(t, m, v, 40)));
    }
  }
  res.require(row_err < 1e-12, "row sums");
  res.require(spectral_err < 1e-12, "spectral residual");
  res.require(expand_err < 1e-10, "eigenbasis expansions");
  res.require(series_err < 1e-8, "series vs chain sums");
  res.notes << " row " << str(row_err) << ", spectral " << str(spectral_err) << ", expansion " << str(expand_err)
            << ", series " << str(series_err) << ";";
}

void cokernel_chain(Result& res) {
  const RunResult r = run("cok_markov", {{"p", "2"}, {"n", "4"}, {"N", "8"}, {"trials", "100000"}});
  bool chi = false;
  for (const auto& c : r.spec.checks) chi |= c.kind == CheckKind::CHI_SQUARE && c.threshold == 1e-3;
  res.require(chi, "chi-square at 1e-3");
  res.require(passed(r), "verdict");
  res.notes << " " << r.verdict.details << ";";
}

void island(Result& res) {
  for (int d : {1, 2}) {
    const auto start = std::chrono::steady_clock::now();
    const RunResult r = run("island_law", {{"p", "2"}, {"d", std::to_string(d)}, {"n", "50"}, {"trials", "100000"}});
    const double secs = seconds_since(start);
    res.require(passed(r), "TV < 0.01 at d=" + std::to_string(d));
    res.require(r.spec.asymptotic, "asymptotic flag");
    res.require(secs < 60, "d=" + std::to_string(d) + " under 1 min");
    res.notes << " d=" << d << ": " << r.verdict.details << " (" << str(secs) << " s);";
  }
}

void theta_pairs(Result& res) {
  double worst = 0;
  for (std::uint32_t p : {2u, 3u, 5u})
    for (int m = 0; m <= 6; ++m) {
      FormulaArgs a;
      a.set("p", p).set("m", m);
      const double series = eval_density("pair_corr_zp", a).value.value;
      const double theta = 1.0 - theta3(-std::sqrt(static_cast<double>(p)), std::pow(1.0 / p, 2 * m + 1)).value;
      worst = std::max(worst, std::fabs(series - theta));
    }
  res.require(worst < 1e-12, "theta identity");
  const RunResult r = run("pair_valuation_hist", {{"p", "3"}, {"n", "8"}, {"trials", "100000"}, {"slack_abs", "0.05"},
                                                  {"slack_rel", "0"}});
  res.require(passed(r), "histogram within 3 se + 0.05");
  res.require(r.spec.asymptotic, "asymptotic flag");
  res.notes << " identity " << str(worst) << "; " << r.verdict.details << ";";
}

void quadratic(Result& res) {
  double worst = 0;
  for (const char* label : {"unramified", "ramified"}) {
    FormulaArgs base;
    base.set("p", 3).set("m", 0);
    base.label = label;
    double acc = 0;
    for (int m = 0; m < 80; ++m) {
      FormulaArgs a = base;
      a.set("m", m);
      acc += (1 - 1.0 / 3) * std::pow(1.0 / 3, m) * eval_density("quad_density", a).value.value;
    }
    worst = std::max(worst, std::fabs(eval_count("expected_quad", base).value.value - acc));
  }
  res.require(worst < 1e-10, "expected_quad consistency");
  const RunResult r = run("quad_density", {{"p", "3"}, {"n", "6"}, {"max_m", "1"}, {"trials", "100000"}});
  res.require(passed(r), "orbit counts within 3 se + slack");
  res.require(r.spec.asymptotic, "asymptotic flag");
  res.require(r.estimate->labels.size() == 4, "split by label and m in {0,1}");
  res.notes << " consistency " << str(worst) << "; " << r.verdict.details << ";";
}

void all_in_zp(Result& res) {
  const RunResult r = run("en_relation", {{"p", "3"}, {"n", "2"}, {"trials", "100000"}});
  res.require(passed(r), "ratio within 3 se of 1 + 1/p");
  const RunResult trend = run("en_asymptotic_trend", {{"p", "2"}, {"n_min", "2"}, {"n_max", "4"}});
  res.require(passed(trend), "log P decreasing over n = 2..4");
  res.notes << " " << r.verdict.details << "; trend " << trend.verdict.details << ";";
}

void gl_variant(Result& res) {
  const RunResult r = run("gl_support", {{"p", "3"}, {"n", "6"}, {"trials", "100000"}});
  res.require(passed(r), "zero residue-0 eigenvalues and expected count");
  res.require(r.spec.asymptotic, "asymptotic flag");
  // target is 1 - 1/p, the integral of the GL density over the units
  res.notes << " target " << str(1 - 1.0 / 3) << "; " << r.verdict.details << ";";
}

void linearization(Result& res) {
  const RunResult r = run("charpoly_det_identity", {{"p", "3"}, {"n", "8"}, {"trials", "100000"}});
  res.require(passed(r), "two samples agree within 3 se + slack");
  res.require(r.spec.asymptotic, "asymptotic flag");
  res.notes << " " << r.verdict.details << ";";
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<void(Result&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact small-ball law, split points", 10, points_split},
      {2, "polynomial analog", 1, points_poly},
      {3, "expected Z_p eigenvalue count", 120, expected_zp},
      {4, "determinant moments", 120, det_moments},
      {5, "Markov machinery", 30, markov_machinery},
      {6, "cokernel chain law", 120, cokernel_chain},
      {7, "island law", 120, island},
      {8, "theta pair correlation", 180, theta_pairs},
      {9, "quadratic extensions", 300, quadratic},
      {10, "all-in-Z_p relation and trend", 120, all_in_zp},
      {11, "GL variant", 120, gl_variant},
      {12, "linearization identity", 300, linearization},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Result res;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(res);
    } catch (const std::exception& e) {
      res.require(false, std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(start);
    res.require(secs < c.limit_s, "runtime limit " + str(c.limit_s) + " s");
    failures += !res.pass;
    std::printf("criterion %2d %s: %s (%.2f s)%s\n", c.id, res.pass ? "PASS" : "FAIL", c.title, secs,
                res.notes.str().c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%zu PASS\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
