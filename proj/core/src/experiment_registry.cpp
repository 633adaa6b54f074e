#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "experiment_internal.hpp"
#include "padicrmt/errors.hpp"
#include "padicrmt/fp_poly.hpp"
#include "padicrmt/markov.hpp"
#include "padicrmt/matrix.hpp"
#include "padicrmt/modular.hpp"
#include "padicrmt/poly.hpp"
#include "padicrmt/rings.hpp"
#include "padicrmt/rng.hpp"
#include "padicrmt/roots.hpp"
#include "padicrmt/smith.hpp"

namespace padicrmt {

namespace {

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational rational_pow(std::uint32_t p, long e) {
  Rational r = 1;
  for (long i = 0; i < std::labs(e); ++i) r *= p;
  return e < 0 ? 1 / r : r;
}

int iparam(const ExperimentSpec& s, const std::string& key) {
  const double v = s.param(key);
  if (v != std::floor(v)) throw InvalidParams("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

MatrixMode matrix_mode(const ExperimentSpec& s) {
  return s.mode == SampleMode::GL ? MatrixMode::GL : MatrixMode::MAT;
}

FormulaArgs base_args(const ExperimentSpec& s) {
  FormulaArgs a;
  a.set("p", s.p);
  return a;
}

Prediction from_formula(int component, const std::string& label, const FormulaValue& v,
                        double scale = 1.0) {
  Prediction pr;
  pr.component = component;
  pr.label = label;
  pr.value = v.value.value * scale;
  pr.tol = v.value.abs_tol * std::fabs(scale);
  if (v.interval) pr.interval = {{v.interval->first * scale, v.interval->second * scale}};
  pr.flags = v.flags;
  return pr;
}

Prediction exact_prediction(int component, const std::string& label, const Rational& r) {
  Prediction pr;
  pr.component = component;
  pr.label = label;
  pr.value = to_double(r);
  pr.exact = r;
  return pr;
}

void add_flag(std::vector<Prediction>& ps, const std::string& flag) {
  for (auto& p : ps)
    if (std::find(p.flags.begin(), p.flags.end(), flag) == p.flags.end()) p.flags.push_back(flag);
}

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

// ---- partition chains ---------------------------------------------------

// Non-increasing sequences of length len with entries bounded by start.
void chain_cells(int start, int len, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  const int hi = cur.empty() ? start : cur.back();
  for (int b = hi; b >= 0; --b) {
    cur.push_back(b);
    chain_cells(start, len, cur, out);
    cur.pop_back();
  }
}

struct CellTable {
  std::vector<std::vector<int>> cells;
  std::map<std::vector<int>, int> index;
  void build() {
    for (int i = 0; i < static_cast<int>(cells.size()); ++i) index[cells[i]] = i;
  }
  int at(const std::vector<int>& key) const {
    auto it = index.find(key);
    if (it == index.end()) throw InvalidParams("chain outside the cell table");
    return it->second;
  }
  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& c : cells) {
      std::string s = "cell(";
      for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
      out.push_back(s + ")");
    }
    return out;
  }
};

double kernel(double t, int a, int b) {
  return markov_kernel_prob(MarkovParams{t, 1.0, 1.0}, a, b).value;
}

// cells (l_1, ..., l_len), l_0 = n
CellTable single_chain_table(int n, int len) {
  CellTable t;
  std::vector<int> cur;
  chain_cells(n, len, cur, t.cells);
  t.build();
  return t;
}

// cells (l_1, ..., l_m, b, c) with b, c <= l_m
CellTable joint_chain_table(int n, int m) {
  CellTable t;
  std::vector<std::vector<int>> heads;
  std::vector<int> cur;
  chain_cells(n, m, cur, heads);
  for (const auto& h : heads) {
    const int top = h.empty() ? n : h.back();
    for (int b = top; b >= 0; --b)
      for (int c = top; c >= 0; --c) {
        auto cell = h;
        cell.push_back(b);
        cell.push_back(c);
        t.cells.push_back(cell);
      }
  }
  t.build();
  return t;
}

// ---- residue-level helpers ----------------------------------------------

FpPoly first_irreducible(std::uint32_t p, int d) {
  std::vector<std::uint32_t> c(d + 1, 0);
  c[d] = 1;
  while (true) {
    FpPoly f(p, c);
    if (is_irreducible(f)) return f;
    int i = 0;
    while (i < d && ++c[i] == p) c[i++] = 0;
    if (i == d) throw InvalidParams("no irreducible polynomial of the requested degree");
  }
}

PadicPoly random_monic(const Modulus& mod, int degree, Rng& rng) {
  std::vector<std::uint64_t> c(degree + 1);
  for (int i = 0; i < degree; ++i) c[i] = rng.uniform(mod.pN());
  c[degree] = 1 % mod.pN();
  return PadicPoly(mod, c);
}

// ---- registry -----------------------------------------------------------

struct Given {
  bool n = false, N = false, points = false, trials = false, run_mode = false;
};

struct Entry {
  std::string description;
  std::string estimand;  // entry whose estimand and predictions are used
  std::set<std::string> knobs;
  std::function<void(ExperimentSpec&)> defaults;
  std::function<void(ExperimentSpec&, const Given&)> finish;
  std::function<Estimand(const ExperimentSpec&)> make;
  std::function<std::vector<Prediction>(const ExperimentSpec&)> predict;
  std::function<int(const ExperimentSpec&)> min_precision;
};

void set_default_precision(ExperimentSpec& s, const Given& g, int n_value) {
  if (!g.N) s.N = n_value;
}

Check point_check(std::vector<int> comps = {}) { return Check{CheckKind::POINT, std::move(comps), 0.0}; }

// Exhaustive-capable estimands share one Monte Carlo sampler: draw the item's
// residues uniformly and look up the class.  Items outside the population are
// redrawn; undetermined classes are discarded.
void attach_class_sampler(Estimand& e, std::uint64_t pN) {
  const int digits = e.digits;
  auto classify = e.classify;
  auto values = e.class_values;
  const std::size_t comps = e.labels.size();
  e.sample = [=](Rng& rng, double* out) {
    std::vector<std::uint64_t> item(digits);
    for (int attempt = 0; attempt < 100000; ++attempt) {
      for (auto& d : item) d = rng.uniform(pN);
      const int c = classify(item.data());
      if (c < 0) continue;
      if (static_cast<std::size_t>(c) >= values.size()) throw InvalidParams("class index out of range");
      for (std::size_t i = 0; i < comps; ++i) {
        const auto& [lo, hi] = values[c][i];
        if (lo != hi) return false;
        out[i] = to_double(lo);
      }
      return true;
    }
    throw RejectionExhausted("population is too sparse for rejection sampling");
  };
}

// det_moment ---------------------------------------------------------------

Estimand det_moment_estimand(const ExperimentSpec& s) {
  const Modulus mod(s.p, s.N);
  const int n = s.n, k = iparam(s, "k"), N = s.N;
  const bool gl = s.mode == SampleMode::GL;
  const int saturated = n * (N - 1) + 1;
  Estimand e;
  e.labels = {"E||det A||^" + std::to_string(k)};
  e.digits = n * n;
  e.classify = [=](const std::uint64_t* d) {
    std::vector<std::int64_t> ent(d, d + n * n);
    const PadicMatrix a = PadicMatrix::from_ints(mod, n, ent);
    if (gl && !invertible_mod_p(a)) return -1;
    try {
      return det_valuation(a);
    } catch (const SaturatedDeterminant&) {
      return saturated;
    }
  };
  // unsaturated: each Smith valuation is below N, so the sum is at most n(N-1)
  for (int v = 0; v < saturated; ++v) {
    const Rational x = rational_pow(s.p, -static_cast<long>(k) * v);
    e.class_values.push_back({{x, x}});
  }
  e.class_values.push_back({{Rational(0), rational_pow(s.p, -static_cast<long>(k) * N)}});
  attach_class_sampler(e, mod.pN());
  return e;
}

std::vector<Prediction> det_moment_predict(const ExperimentSpec& s) {
  FormulaArgs a;
  a.set("q", s.p).set("n", s.n).set("k", iparam(s, "k"));
  const FormulaValue v = eval_count("det_moment", a);
  if (s.mode == SampleMode::GL) return {exact_prediction(0, "det_moment(GL)", Rational(1))};
  return {exact_prediction(0, "det_moment", *v.exact)};
}

// points_on_variety --------------------------------------------------------

Estimand points_estimand(const ExperimentSpec& s) {
  const Modulus mod(s.p, s.N);
  const int n = s.n;
  const std::uint64_t ps = mod.ppow(iparam(s, "s"));
  const bool gl = s.mode == SampleMode::GL;
  std::vector<std::uint64_t> pts;
  for (auto x : s.points) pts.push_back(mod.reduce(x));
  Estimand e;
  e.labels = {"P(all points have val >= s)"};
  e.digits = n * n;
  e.classify = [=](const std::uint64_t* d) {
    std::vector<std::int64_t> ent(d, d + n * n);
    const PadicMatrix a = PadicMatrix::from_ints(mod, n, ent);
    if (gl && !invertible_mod_p(a)) return -1;
    const PadicPoly f = charpoly(a);
    for (auto x : pts)
      if (f.eval(x) % ps != 0) return 0;
    return 1;
  };
  e.class_values = {{{Rational(0), Rational(0)}}, {{Rational(1), Rational(1)}}};
  attach_class_sampler(e, mod.pN());
  return e;
}

std::vector<Prediction> points_predict(const ExperimentSpec& s) {
  FormulaArgs a = base_args(s);
  a.set("r", s.n).set("s", iparam(s, "s"));
  a.points = s.points;
  a.label = s.mode == SampleMode::GL ? "GL" : "MAT";
  const FormulaValue v = eval_density("points_on_variety_split", a);
  const long rs = static_cast<long>(s.n) * iparam(s, "s");
  return {exact_prediction(0, "points_on_variety_split * p^-rs", *v.exact * rational_pow(s.p, -rs))};
}

// poly_variety -------------------------------------------------------------

Estimand poly_estimand(const ExperimentSpec& s) {
  const Modulus mod(s.p, s.N);
  const int n = s.n;
  const std::uint64_t ps = mod.ppow(iparam(s, "s"));
  std::vector<std::uint64_t> pts;
  for (auto x : s.points) pts.push_back(mod.reduce(x));
  Estimand e;
  e.labels = {"P(all points have val >= s)"};
  e.digits = n;
  e.classify = [=](const std::uint64_t* d) {
    std::vector<std::uint64_t> c(d, d + n);
    c.push_back(1 % mod.pN());
    const PadicPoly f(mod, c);
    for (auto x : pts)
      if (f.eval(x) % ps != 0) return 0;
    return 1;
  };
  e.class_values = {{{Rational(0), Rational(0)}}, {{Rational(1), Rational(1)}}};
  attach_class_sampler(e, mod.pN());
  return e;
}

std::vector<Prediction> poly_predict(const ExperimentSpec& s) {
  FormulaArgs a = base_args(s);
  a.set("s", iparam(s, "s"));
  a.points = s.points;
  const FormulaValue v = eval_density("poly_variety", a);
  const long ns = static_cast<long>(s.n) * iparam(s, "s");
  return {exact_prediction(0, "poly_variety * p^-ns", *v.exact * rational_pow(s.p, -ns))};
}

// invertible_fraction ------------------------------------------------------

Estimand invertible_estimand(const ExperimentSpec& s) {
  const Modulus mod(s.p, s.N);
  const int n = s.n;
  Estimand e;
  e.labels = {"P(A invertible)"};
  e.digits = n * n;
  e.classify = [=](const std::uint64_t* d) {
    std::vector<std::int64_t> ent(d, d + n * n);
    return invertible_mod_p(PadicMatrix::from_ints(mod, n, ent)) ? 1 : 0;
  };
  e.class_values = {{{Rational(0), Rational(0)}}, {{Rational(1), Rational(1)}}};
  attach_class_sampler(e, mod.pN());
  return e;
}

std::vector<Prediction> invertible_predict(const ExperimentSpec& s) {
  FormulaArgs a = base_args(s);
  a.set("n", s.n);
  return {exact_prediction(0, "invertible_fraction", *eval_count("invertible_fraction", a).exact)};
}

// eigenvalue counts --------------------------------------------------------

Estimand zp_count_estimand(const ExperimentSpec& s) {
  const ExperimentSpec spec = s;
  Estimand e;
  e.labels = {"E[Z_Zp]"};
  e.sample = [spec](Rng& rng, double* out) {
    const Census c = eigenvalue_census(sample_matrix(spec.n, spec.p, spec.N, matrix_mode(spec), rng),
                                       CensusOptions{false});
    if (c.zp_partial) return false;
    out[0] = c.zp_count;
    return true;
  };
  return e;
}

std::vector<Prediction> zp_count_predict(const ExperimentSpec& s) {
  const FormulaValue v = eval_count("expected_zp", base_args(s));
  return {exact_prediction(0, "expected_zp", *v.exact)};
}

Estimand pair_hist_estimand(const ExperimentSpec& s) {
  const ExperimentSpec spec = s;
  const int max_m = iparam(s, "max_m");
  Estimand e;
  for (int m = 0; m <= max_m; ++m) e.labels.push_back("ordered pairs at val " + std::to_string(m));
  e.sample = [spec, max_m](Rng& rng, double* out) {
    const Census c = eigenvalue_census(sample_matrix(spec.n, spec.p, spec.N, matrix_mode(spec), rng),
                                       CensusOptions{false});
    if (c.zp_partial) return false;
    for (int v : c.pairwise_valuations)
      if (v <= max_m) out[v] += 2.0;
    return true;
  };
  return e;
}

std::vector<Prediction> pair_hist_predict(const ExperimentSpec& s) {
  std::vector<Prediction> out;
  const double pinv = 1.0 / s.p;
  for (int m = 0; m <= iparam(s, "max_m"); ++m) {
    FormulaArgs a = base_args(s);
    a.set("m", m);
    out.push_back(from_formula(m, "pair_corr_zp * (1-1/p) p^-m", eval_density("pair_corr_zp", a),
                               (1.0 - pinv) * std::pow(pinv, m)));
  }
  add_flag(out, "ASYMPTOTIC");
  return out;
}

Estimand var_zp_estimand(const ExperimentSpec& s) {
  const ExperimentSpec spec = s;
  Estimand e;
  e.labels = {"E[Z(Z-1)]"};
  e.sample = [spec](Rng& rng, double* out) {
    const Census c = eigenvalue_census(sample_matrix(spec.n, spec.p, spec.N, matrix_mode(spec), rng),
                                       CensusOptions{false});
    if (c.zp_partial) return false;
    out[0] = static_cast<double>(c.zp_count) * (c.zp_count - 1);
    return true;
  };
  return e;
}

std::vector<Prediction> var_zp_predict(const ExperimentSpec& s) {
  std::vector<Prediction> out{from_formula(0, "var_zp", eval_count("var_zp", base_args(s)))};
  add_flag(out, "ASYMPTOTIC");
  return out;
}

// island law ---------------------------------------------------------------

constexpr int kIslandMax = 6;

Estimand island_estimand(const ExperimentSpec& s) {
  const std::uint32_t p = s.p;
  const int n = s.n;
  const FpPoly F = first_irreducible(p, iparam(s, "d"));
  Estimand e;
  for (int j = 0; j <= kIslandMax; ++j) e.labels.push_back("P(island count = " + std::to_string(j) + ")");
  e.sample = [p, n, F](Rng& rng, double* out) {
    std::vector<std::uint32_t> a(static_cast<std::size_t>(n) * n);
    for (auto& x : a) x = static_cast<std::uint32_t>(rng.uniform(p));
    const int j = island_multiplicity_fp(a, n, F);
    if (j <= kIslandMax) out[j] = 1.0;
    return true;
  };
  return e;
}

std::vector<Prediction> island_predict(const ExperimentSpec& s) {
  std::vector<Prediction> out;
  for (int j = 0; j <= kIslandMax; ++j) {
    FormulaArgs a = base_args(s);
    a.set("d", iparam(s, "d")).set("j", j);
    out.push_back(from_formula(j, "island_law", eval_count("island_law", a)));
  }
  add_flag(out, "ASYMPTOTIC");
  return out;
}

// cokernel chains ----------------------------------------------------------

Estimand cok_markov_estimand(const ExperimentSpec& s) {
  const ExperimentSpec spec = s;
  const CellTable table = single_chain_table(s.n, 2);
  Estimand e;
  e.labels = table.labels();
  e.sample = [spec, table](Rng& rng, double* out) {
    const Partition part = smith_partition(sample_matrix(spec.n, spec.p, spec.N, matrix_mode(spec), rng));
    out[table.at({part.conj(1), part.conj(2)})] = 1.0;
    return true;
  };
  return e;
}

std::vector<Prediction> cok_markov_predict(const ExperimentSpec& s) {
  const CellTable table = single_chain_table(s.n, 2);
  const double t = 1.0 / s.p;
  std::vector<Prediction> out;
  for (int i = 0; i < static_cast<int>(table.cells.size()); ++i) {
    const auto& c = table.cells[i];
    Prediction pr;
    pr.component = i;
    pr.label = "markov_kernel chain";
    pr.value = kernel(t, s.n, c[0]) * kernel(t, c[0], c[1]);
    out.push_back(pr);
  }
  return out;
}

Estimand joint_chain_estimand(const ExperimentSpec& s) {
  const ExperimentSpec spec = s;
  const int m = iparam(s, "m");
  const CellTable table = joint_chain_table(s.n, m);
  const Modulus mod(s.p, s.N);
  Estimand e;
  e.labels = table.labels();
  e.labels.push_back("shared ranks differ");
  const int mismatch = static_cast<int>(table.cells.size());
  e.sample = [spec, table, m, mod, mismatch](Rng& rng, double* out) {
    const PadicMatrix a = sample_matrix(spec.n, spec.p, spec.N, MatrixMode::MAT, rng);
    const PadicMatrix b = sample_matrix(spec.n, spec.p, spec.N, MatrixMode::MAT, rng);
    const Partition first = smith_partition(a);
    const Partition second = smith_partition(a - b.scaled(mod.ppow(m)));
    std::vector<int> key;
    for (int i = 1; i <= m; ++i) {
      key.push_back(first.conj(i));
      if (first.conj(i) != second.conj(i)) {
        out[mismatch] = 1.0;
        return true;
      }
    }
    key.push_back(first.conj(m + 1));
    key.push_back(second.conj(m + 1));
    out[table.at(key)] = 1.0;
    return true;
  };
  return e;
}

std::vector<Prediction> joint_chain_predict(const ExperimentSpec& s) {
  const int m = iparam(s, "m");
  const CellTable table = joint_chain_table(s.n, m);
  const double t = 1.0 / s.p;
  std::vector<Prediction> out;
  for (int i = 0; i < static_cast<int>(table.cells.size()); ++i) {
    const auto& c = table.cells[i];
    double prob = 1.0;
    int prev = s.n;
    for (int j = 0; j < m; ++j) {
      prob *= kernel(t, prev, c[j]);
      prev = c[j];
    }
    prob *= kernel(t, prev, c[m]) * kernel(t, prev, c[m + 1]);
    Prediction pr;
    pr.component = i;
    pr.label = "markov_kernel joint chain";
    pr.value = prob;
    out.push_back(pr);
  }
  Prediction zero;
  zero.component = static_cast<int>(table.cells.size());
  zero.label = "shared ranks agree";
  zero.exact = Rational(0);
  out.push_back(zero);
  return out;
}

bool ramified_label(const ExperimentSpec& s) {
  if (s.label == "ramified") return true;
  if (s.label == "unramified") return false;
  throw InvalidParams("label must be 'unramified' or 'ramified'");
}

Estimand quad_chain_estimand(const ExperimentSpec& s) {
  const ExperimentSpec spec = s;
  const int m = iparam(s, "m");
  const bool ram = ramified_label(s);
  const CellTable table = single_chain_table(s.n, m + 1);
  const Modulus mod(s.p, s.N);
  const QuadDvr ring = ram ? QuadDvr::ramified(mod, 1) : QuadDvr::unramified(mod, smallest_nonresidue(s.p));
  Estimand e;
  e.labels = table.labels();
  e.labels.push_back("paired ranks differ");
  const int mismatch = static_cast<int>(table.cells.size());
  e.sample = [spec, table, m, ram, mod, ring, mismatch](Rng& rng, double* out) {
    const int n = spec.n;
    const PadicMatrix a = sample_matrix(n, spec.p, spec.N, MatrixMode::MAT, rng);
    const PadicMatrix b = sample_matrix(n, spec.p, spec.N, MatrixMode::MAT, rng);
    const std::uint64_t scale = mod.ppow(m);
    std::vector<QuadElem> ent(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ent[static_cast<std::size_t>(i) * n + j] = {a.at(i, j), mod.neg(mod.mul(scale, b.at(i, j)))};
    const std::vector<int> diag = smith_valuations(ring, std::move(ent), n, n);
    auto conj = [&](int i) { return static_cast<int>(std::count_if(diag.begin(), diag.end(), [i](int d) { return d >= i; })); };
    std::vector<int> key;
    if (ram) {
      for (int j = 1; j <= m; ++j) {
        if (conj(2 * j - 1) != conj(2 * j)) {
          out[mismatch] = 1.0;
          return true;
        }
        key.push_back(conj(2 * j));
      }
      key.push_back(conj(2 * m + 1));
    } else {
      for (int i = 1; i <= m + 1; ++i) key.push_back(conj(i));
    }
    out[table.at(key)] = 1.0;
    return true;
  };
  return e;
}

std::vector<Prediction> quad_chain_predict(const ExperimentSpec& s) {
  const int m = iparam(s, "m");
  const bool ram = ramified_label(s);
  const CellTable table = single_chain_table(s.n, m + 1);
  const double t = 1.0 / s.p;
  std::vector<Prediction> out;
  for (int i = 0; i < static_cast<int>(table.cells.size()); ++i) {
    const auto& c = table.cells[i];
    double prob = 1.0;
    int prev = s.n;
    for (int j = 0; j <= m; ++j) {
      prob *= kernel((j == m && !ram) ? t * t : t, prev, c[j]);
      prev = c[j];
    }
    Prediction pr;
    pr.component = i;
    pr.label = "markov_kernel chain";
    pr.value = prob;
    out.push_back(pr);
  }
  Prediction zero;
  zero.component = static_cast<int>(table.cells.size());
  zero.label = "paired ranks agree";
  zero.exact = Rational(0);
  out.push_back(zero);
  return out;
}

// quadratic orbits ---------------------------------------------------------

Estimand quad_density_estimand(const ExperimentSpec& s) {
  const ExperimentSpec spec = s;
  const int max_m = iparam(s, "max_m");
  Estimand e;
  for (const char* lab : {"unramified", "ramified"})
    for (int m = 0; m <= max_m; ++m) e.labels.push_back(std::string(lab) + " orbits at m=" + std::to_string(m));
  e.sample = [spec, max_m](Rng& rng, double* out) {
    const Census c = eigenvalue_census(sample_matrix(spec.n, spec.p, spec.N, matrix_mode(spec), rng),
                                       CensusOptions{true});
    if (c.quad_partial) return false;
    for (const auto& [key, count] : c.quad_counts) {
      const auto& [label, m] = key;
      if (m > max_m) continue;
      if (label == ExtLabel::QUAD_UNRAMIFIED) out[m] += count;
      if (label == ExtLabel::QUAD_RAMIFIED) out[max_m + 1 + m] += count;
    }
    return true;
  };
  return e;
}

std::vector<Prediction> quad_density_predict(const ExperimentSpec& s) {
  const int max_m = iparam(s, "max_m");
  const double pinv = 1.0 / s.p;
  std::vector<Prediction> out;
  int comp = 0;
  for (const char* lab : {"unramified", "ramified"})
    for (int m = 0; m <= max_m; ++m) {
      FormulaArgs a = base_args(s);
      a.set("m", m);
      a.label = lab;
      // orbits are point counts over 2; the two ramified fields are merged
      const double fields = std::string(lab) == "ramified" ? 2.0 : 1.0;
      out.push_back(from_formula(comp++, std::string("quad_density ") + lab, eval_density("quad_density", a),
                                 (1.0 - pinv) * std::pow(pinv, m) * fields / 2.0));
    }
  add_flag(out, "ASYMPTOTIC");
  return out;
}

Estimand expected_quad_estimand(const ExperimentSpec& s) {
  const ExperimentSpec spec = s;
  Estimand e;
  e.labels = {"unramified orbits", "ramified orbits"};
  e.sample = [spec](Rng& rng, double* out) {
    const Census c = eigenvalue_census(sample_matrix(spec.n, spec.p, spec.N, matrix_mode(spec), rng),
                                       CensusOptions{true});
    if (c.quad_partial) return false;
    for (const auto& [key, count] : c.quad_counts) {
      if (key.first == ExtLabel::QUAD_UNRAMIFIED) out[0] += count;
      if (key.first == ExtLabel::QUAD_RAMIFIED) out[1] += count;
    }
    return true;
  };
  return e;
}

std::vector<Prediction> expected_quad_predict(const ExperimentSpec& s) {
  std::vector<Prediction> out;
  int comp = 0;
  for (const char* lab : {"unramified", "ramified"}) {
    FormulaArgs a = base_args(s);
    a.label = lab;
    const double fields = std::string(lab) == "ramified" ? 2.0 : 1.0;
    out.push_back(from_formula(comp++, std::string("expected_quad ") + lab, eval_count("expected_quad", a), fields / 2.0));
  }
  add_flag(out, "ASYMPTOTIC");
  return out;
}

// all eigenvalues in Z_p ---------------------------------------------------

Estimand en_relation_estimand(const ExperimentSpec& s) {
  const ExperimentSpec spec = s;
  const Modulus mod(s.p, s.N);
  Estimand e;
  e.labels = {"P(E_n)", "P(E_n poly)"};
  e.sample = [spec, mod](Rng& rng, double* out) {
    const Census c = eigenvalue_census(sample_matrix(spec.n, spec.p, spec.N, MatrixMode::MAT, rng),
                                       CensusOptions{false});
    const PadicPoly f = random_monic(mod, spec.n, rng);
    if (c.zp_partial) return false;
    int roots;
    try {
      roots = count_roots_in_zp(f);
    } catch (const PrecisionExhausted&) {
      return false;
    }
    out[0] = c.zp_count == spec.n ? 1.0 : 0.0;
    out[1] = roots == spec.n ? 1.0 : 0.0;
    return true;
  };
  return e;
}

std::vector<Prediction> en_relation_predict(const ExperimentSpec& s) {
  FormulaArgs a = base_args(s);
  a.set("n", s.n);
  return {exact_prediction(0, "en_relation_constant", *eval_count("en_relation_constant", a).exact)};
}

Estimand en_trend_estimand(const ExperimentSpec& s) {
  const ExperimentSpec spec = s;
  const int lo = iparam(s, "n_min"), hi = iparam(s, "n_max");
  Estimand e;
  for (int n = lo; n <= hi; ++n) e.labels.push_back("P(E_" + std::to_string(n) + ")");
  e.sample = [spec, lo, hi](Rng& rng, double* out) {
    for (int n = lo; n <= hi; ++n) {
      const Census c = eigenvalue_census(sample_matrix(n, spec.p, spec.N, MatrixMode::MAT, rng), CensusOptions{false});
      if (c.zp_partial) return false;
      out[n - lo] = c.zp_count == n ? 1.0 : 0.0;
    }
    return true;
  };
  return e;
}

std::vector<Prediction> en_trend_predict(const ExperimentSpec& s) {
  std::vector<Prediction> out;
  const int lo = iparam(s, "n_min"), hi = iparam(s, "n_max");
  for (int n = lo; n <= hi; ++n) {
    FormulaArgs a = base_args(s);
    a.set("n", n);
    const FormulaValue v = eval_count("en_asymptotic_exponent", a);
    Prediction pr = from_formula(n - lo, "p^en_asymptotic_exponent", v);
    pr.value = std::pow(static_cast<double>(s.p), v.value.value);
    pr.flags.push_back("INFORMATIONAL");
    out.push_back(pr);
  }
  return out;
}

// GL support ---------------------------------------------------------------

Estimand gl_support_estimand(const ExperimentSpec& s) {
  const ExperimentSpec spec = s;
  Estimand e;
  e.labels = {"residue-0 eigenvalues", "E[Z_Zp] (GL)"};
  e.sample = [spec](Rng& rng, double* out) {
    const PadicMatrix a = sample_matrix(spec.n, spec.p, spec.N, MatrixMode::GL, rng);
    const PadicPoly f = charpoly(a);
    const Census c = census_of_poly(f, CensusOptions{false});
    bool violation = residue(f).coeff(0) == 0;
    for (const auto& r : c.zp_roots)
      if (!r.digits.empty() && r.digits[0] == 0) violation = true;
    out[0] = violation ? 1.0 : 0.0;
    if (c.zp_partial) return false;
    out[1] = c.zp_count;
    return true;
  };
  return e;
}

std::vector<Prediction> gl_support_predict(const ExperimentSpec& s) {
  Prediction zero;
  zero.component = 0;
  zero.label = "no residue-0 eigenvalue";
  zero.exact = Rational(0);
  Prediction gl = from_formula(1, "expected_zp_gl", eval_count("expected_zp_gl", base_args(s)));
  return {zero, gl};
}

// linearization ------------------------------------------------------------

Estimand charpoly_det_estimand(const ExperimentSpec& s) {
  const ExperimentSpec spec = s;
  const Modulus mod(s.p, s.N);
  const std::uint64_t c = static_cast<std::uint64_t>(iparam(s, "c"));
  const PadicPoly z = PadicPoly::from_ints(mod, {-static_cast<std::int64_t>(c), 0, 1});
  Estimand e;
  e.labels = {"E||det Z(A)||", "E||Nm det(A_0 + x A_1)||"};
  e.sample = [spec, mod, c, z](Rng& rng, double* out) {
    const PadicMatrix a = sample_matrix(spec.n, spec.p, spec.N, MatrixMode::MAT, rng);
    const PadicMatrix q = sample_quotient_matrix(spec.n, z, rng);
    try {
      const int direct = det_valuation(a * a - PadicMatrix::identity(mod, spec.n).scaled(c));
      const int linear = det_valuation(q);
      out[0] = std::pow(static_cast<double>(spec.p), -direct);
      out[1] = std::pow(static_cast<double>(spec.p), -linear);
    } catch (const SaturatedDeterminant&) {
      return false;
    }
    return true;
  };
  return e;
}

std::vector<Prediction> charpoly_det_predict(const ExperimentSpec& s) {
  FormulaArgs a = base_args(s);
  a.set("m", 0);
  a.label = "unramified";
  const FormulaValue v = eval_count("quad_det_expectation", a);
  std::vector<Prediction> out{from_formula(0, "quad_det_expectation", v), from_formula(1, "quad_det_expectation", v)};
  add_flag(out, "ASYMPTOTIC");
  return out;
}

// higher degree ------------------------------------------------------------

Estimand cubic_estimand(const ExperimentSpec& s) {
  const ExperimentSpec spec = s;
  Estimand e;
  e.labels = {"unramified cubic orbits (residue-simple)"};
  e.sample = [spec](Rng& rng, double* out) {
    const PadicMatrix a = sample_matrix(spec.n, spec.p, spec.N, MatrixMode::MAT, rng);
    const ResidueFactorization fac = factor_mod_p(residue(charpoly(a)));
    for (const auto& f : fac.factors)
      if (f.degree == 3 && f.multiplicity == 1) out[0] += 1.0;
    return true;
  };
  return e;
}

std::vector<Prediction> cubic_predict(const ExperimentSpec& s) {
  FormulaArgs a = base_args(s);
  a.set("f", 3).set("disc_norm", 1.0);
  // orbits of three conjugate points
  std::vector<Prediction> out{from_formula(0, "higher_degree_bounds / 3", eval_count("higher_degree_bounds", a), 1.0 / 3.0)};
  add_flag(out, "ASYMPTOTIC");
  return out;
}

// ---- table --------------------------------------------------------------

const std::string kEmpirical = "default n chosen empirically for desk-scale runtime; the limit has no known rate";

std::map<std::string, Entry> make_registry() {
  std::map<std::string, Entry> r;

  r["E_Zp_count"] = {
      "mean number of eigenvalues in Z_p (exact at every n)", "E_Zp_count", {},
      [](ExperimentSpec& s) {
        s.p = 3; s.n = 6; s.N = 10; s.trials = 100000; s.seed = 7;
      },
      [](ExperimentSpec& s, const Given&) {
        s.formula = "expected_zp";
        s.checks = {point_check()};
      },
      zp_count_estimand, zp_count_predict, [](const ExperimentSpec&) { return 2; }};

  Entry det{"E||det A||^k against the determinant moment formula", "det_moment", {"k"},
            [](ExperimentSpec& s) {
              s.p = 2; s.n = 1; s.N = 12; s.trials = 100000; s.seed = 11;
              s.params["k"] = 1;
            },
            [](ExperimentSpec& s, const Given&) {
              s.formula = "det_moment";
              s.formula_args = FormulaArgs{};
              s.formula_args.set("q", s.p).set("n", s.n).set("k", s.param("k"));
              if (s.run_mode == RunMode::EXHAUSTIVE)
                s.checks = {Check{CheckKind::EXACT, {0}, std::pow(static_cast<double>(s.p), -(s.N - 1))}};
              else
                s.checks = {point_check()};
            },
            det_moment_estimand, det_moment_predict, [](const ExperimentSpec&) { return 1; }};
  r["det_moment"] = det;
  det.description = "E||det A|| (k = 1) against the determinant moment formula";
  r["det_norm_mean"] = det;

  r["pair_valuation_hist"] = {
      "ordered pairs of Z_p eigenvalues at each valuation against the pair correlation", "pair_valuation_hist",
      {"max_m"},
      [](ExperimentSpec& s) {
        s.p = 3; s.n = 8; s.trials = 100000; s.seed = 13;
        s.params["max_m"] = 3;
        s.asymptotic = true;
        s.note = kEmpirical;
      },
      [](ExperimentSpec& s, const Given& g) {
        set_default_precision(s, g, std::max(10, 2 * iparam(s, "max_m") + 2));
        s.formula = "pair_corr_zp";
        s.checks = {point_check()};
      },
      pair_hist_estimand, pair_hist_predict,
      [](const ExperimentSpec& s) { return 2 * iparam(s, "max_m") + 2; }};

  r["var_zp"] = {
      "variance of the number of Z_p eigenvalues", "var_zp", {},
      [](ExperimentSpec& s) {
        s.p = 3; s.n = 8; s.N = 10; s.trials = 100000; s.seed = 17;
        s.asymptotic = true;
        s.note = kEmpirical;
      },
      [](ExperimentSpec& s, const Given&) {
        s.formula = "var_zp";
        s.checks = {point_check()};
      },
      var_zp_estimand, var_zp_predict, [](const ExperimentSpec&) { return 2; }};

  r["island_law"] = {
      "eigenvalue count on the island of a degree-d residue polynomial (residue level)", "island_law", {"d"},
      [](ExperimentSpec& s) {
        s.p = 2; s.n = 50; s.N = 1; s.trials = 100000; s.seed = 19;
        s.params["d"] = 1;
        s.asymptotic = true;
        s.note = kEmpirical;
      },
      [](ExperimentSpec& s, const Given&) {
        s.formula = "island_law";
        s.formula_args = base_args(s);
        s.formula_args.set("d", s.param("d"));
        s.checks = {Check{CheckKind::TOTAL_VARIATION, iota_vec(kIslandMax + 1), 0.01}};
      },
      island_estimand, island_predict, [](const ExperimentSpec&) { return 1; }};

  r["cok_markov"] = {
      "first two conjugate cokernel ranks against the partition chain", "cok_markov", {},
      [](ExperimentSpec& s) {
        s.p = 2; s.n = 4; s.N = 8; s.trials = 100000; s.seed = 23;
      },
      [](ExperimentSpec& s, const Given&) {
        s.formula = "markov_kernel";
        s.formula_args = FormulaArgs{};
        s.formula_args.set("t", 1.0 / s.p).set("u", 1.0);
        s.checks = {Check{CheckKind::CHI_SQUARE, {}, 1e-3}};
      },
      cok_markov_estimand, cok_markov_predict, [](const ExperimentSpec&) { return 2; }};

  r["cok_joint_chain"] = {
      "cokernels of A and A - p^m B: shared ranks, then independent continuations", "cok_joint_chain", {"m"},
      [](ExperimentSpec& s) {
        s.p = 2; s.n = 3; s.trials = 100000; s.seed = 29;
        s.params["m"] = 1;
      },
      [](ExperimentSpec& s, const Given& g) {
        set_default_precision(s, g, std::max(8, 2 * (iparam(s, "m") + 1) + 2));
        s.formula = "markov_kernel";
        s.formula_args = FormulaArgs{};
        s.formula_args.set("t", 1.0 / s.p).set("u", 1.0);
        const int cells = static_cast<int>(joint_chain_table(s.n, iparam(s, "m")).cells.size());
        s.checks = {Check{CheckKind::CHI_SQUARE, iota_vec(cells), 1e-3}, Check{CheckKind::ZERO, {cells}, 0.0}};
      },
      joint_chain_estimand, joint_chain_predict,
      [](const ExperimentSpec& s) { return 2 * (iparam(s, "m") + 1) + 2; }};

  r["quad_chain"] = {
      "cokernel ranks of A - p^m w B over a quadratic ring of integers", "quad_chain", {"m"},
      [](ExperimentSpec& s) {
        s.p = 3; s.n = 3; s.trials = 100000; s.seed = 31;
        s.params["m"] = 1;
        s.label = "unramified";
      },
      [](ExperimentSpec& s, const Given& g) {
        set_default_precision(s, g, 2 * (iparam(s, "m") + 1) + 2);
        s.formula = "markov_kernel";
        s.formula_args = FormulaArgs{};
        s.formula_args.set("t", 1.0 / s.p).set("u", 1.0);
        ramified_label(s);
        s.formula_args.label = s.label;
        const int cells = static_cast<int>(single_chain_table(s.n, iparam(s, "m") + 1).cells.size());
        s.checks = {Check{CheckKind::CHI_SQUARE, iota_vec(cells), 1e-3}, Check{CheckKind::ZERO, {cells}, 0.0}};
      },
      quad_chain_estimand, quad_chain_predict,
      [](const ExperimentSpec& s) { return 2 * (iparam(s, "m") + 1) + 2; }};

  r["quad_density"] = {
      "quadratic eigenvalue orbits by field and discriminant level", "quad_density", {"max_m"},
      [](ExperimentSpec& s) {
        s.p = 3; s.n = 6; s.trials = 100000; s.seed = 37;
        s.params["max_m"] = 1;
        s.asymptotic = true;
        s.note = kEmpirical;
      },
      [](ExperimentSpec& s, const Given& g) {
        set_default_precision(s, g, std::max(8, 2 * iparam(s, "max_m") + 2));
        s.formula = "quad_density";
        s.checks = {point_check()};
      },
      quad_density_estimand, quad_density_predict,
      [](const ExperimentSpec& s) { return 2 * iparam(s, "max_m") + 2; }};

  r["expected_quad"] = {
      "total quadratic eigenvalue orbits per field type", "expected_quad", {},
      [](ExperimentSpec& s) {
        s.p = 3; s.n = 6; s.N = 8; s.trials = 100000; s.seed = 41;
        s.asymptotic = true;
        s.note = kEmpirical;
      },
      [](ExperimentSpec& s, const Given&) {
        s.formula = "expected_quad";
        s.checks = {point_check()};
      },
      expected_quad_estimand, expected_quad_predict, [](const ExperimentSpec&) { return 4; }};

  r["points_on_variety"] = {
      "P(val P_A(x_i) >= s for all points) over Mat_r", "points_on_variety", {"r", "s"},
      [](ExperimentSpec& s) {
        s.p = 2; s.n = 2; s.trials = 100000; s.seed = 43;
        s.run_mode = RunMode::EXHAUSTIVE;
        s.params["s"] = 1;
        s.points = {0, 1};
      },
      [](ExperimentSpec& s, const Given& g) {
        if (s.params.count("r")) {
          s.n = iparam(s, "r");
          s.params.erase("r");
        }
        if (!g.points) {
          s.points.clear();
          for (int i = 0; i < s.n; ++i) s.points.push_back(i);
        }
        if (static_cast<int>(s.points.size()) != s.n) throw InvalidParams("need exactly r points");
        set_default_precision(s, g, iparam(s, "s"));
        if (s.label == "GL") s.mode = SampleMode::GL;
        if (!s.label.empty() && s.label != "GL" && s.label != "MAT") throw InvalidParams("label must be MAT or GL");
        if (s.mode == SampleMode::POLY) throw InvalidParams("points_on_variety samples matrices");
        s.label = s.mode == SampleMode::GL ? "GL" : "MAT";
        s.formula = "points_on_variety_split";
        s.formula_args = base_args(s);
        s.formula_args.set("r", s.n).set("s", s.param("s"));
        s.formula_args.points = s.points;
        s.formula_args.label = s.label;
        s.checks = {s.run_mode == RunMode::EXHAUSTIVE ? Check{CheckKind::EXACT, {0}, 0.0} : point_check()};
      },
      points_estimand, points_predict, [](const ExperimentSpec& s) { return iparam(s, "s"); }};

  r["poly_variety"] = {
      "P(val P(x_i) >= s for all points) over monic polynomials", "poly_variety", {"s"},
      [](ExperimentSpec& s) {
        s.p = 2; s.n = 2; s.trials = 100000; s.seed = 47;
        s.mode = SampleMode::POLY;
        s.run_mode = RunMode::EXHAUSTIVE;
        s.params["s"] = 1;
        s.points = {0, 1};
      },
      [](ExperimentSpec& s, const Given& g) {
        if (g.points && !g.n) s.n = static_cast<int>(s.points.size());
        if (!g.points && g.n) {
          s.points.clear();
          for (int i = 0; i < s.n; ++i) s.points.push_back(i);
        }
        if (static_cast<int>(s.points.size()) != s.n) throw InvalidParams("degree must equal the number of points");
        if (s.mode != SampleMode::POLY) throw InvalidParams("poly_variety samples polynomials (mode POLY)");
        set_default_precision(s, g, iparam(s, "s"));
        s.formula = "poly_variety";
        s.formula_args = base_args(s);
        s.formula_args.set("s", s.param("s"));
        s.formula_args.points = s.points;
        s.checks = {s.run_mode == RunMode::EXHAUSTIVE ? Check{CheckKind::EXACT, {0}, 0.0} : point_check()};
      },
      poly_estimand, poly_predict, [](const ExperimentSpec& s) { return iparam(s, "s"); }};

  r["invertible_fraction"] = {
      "fraction of invertible matrices", "invertible_fraction", {},
      [](ExperimentSpec& s) {
        s.p = 2; s.n = 2; s.N = 1; s.trials = 100000; s.seed = 53;
        s.run_mode = RunMode::EXHAUSTIVE;
      },
      [](ExperimentSpec& s, const Given&) {
        s.formula = "invertible_fraction";
        s.formula_args = base_args(s);
        s.formula_args.set("n", s.n);
        s.checks = {s.run_mode == RunMode::EXHAUSTIVE ? Check{CheckKind::EXACT, {0}, 0.0} : point_check()};
      },
      invertible_estimand, invertible_predict, [](const ExperimentSpec&) { return 1; }};

  r["en_relation"] = {
      "P(all eigenvalues in Z_p) over P(all polynomial roots in Z_p)", "en_relation", {},
      [](ExperimentSpec& s) {
        s.p = 3; s.n = 2; s.N = 10; s.trials = 100000; s.seed = 59;
      },
      [](ExperimentSpec& s, const Given&) {
        s.formula = "en_relation_constant";
        s.formula_args = base_args(s);
        s.formula_args.set("n", s.n);
        s.checks = {Check{CheckKind::RATIO, {0, 1}, 0.0}};
      },
      en_relation_estimand, en_relation_predict, [](const ExperimentSpec&) { return 2; }};

  r["en_asymptotic_trend"] = {
      "decay of P(all eigenvalues in Z_p) across n (trend only)", "en_asymptotic_trend", {"n_min", "n_max"},
      [](ExperimentSpec& s) {
        s.p = 2; s.n = 4; s.N = 10; s.trials = 100000; s.seed = 61;
        s.params["n_min"] = 2;
        s.params["n_max"] = 4;
      },
      [](ExperimentSpec& s, const Given& g) {
        if (g.n) s.params["n_max"] = s.n;
        s.n = iparam(s, "n_max");
        if (iparam(s, "n_min") < 1 || iparam(s, "n_min") >= s.n) throw InvalidParams("need 1 <= n_min < n_max");
        s.formula = "en_asymptotic_exponent";
        s.checks = {Check{CheckKind::DECREASING, {}, 0.0}};
      },
      en_trend_estimand, en_trend_predict, [](const ExperimentSpec&) { return 2; }};

  r["gl_support"] = {
      "GL sampling: no eigenvalue with residue 0, and the Z_p count restricted to units", "gl_support", {},
      [](ExperimentSpec& s) {
        s.p = 3; s.n = 6; s.N = 10; s.trials = 100000; s.seed = 67;
        s.mode = SampleMode::GL;
        s.asymptotic = true;
        s.note = kEmpirical;
      },
      [](ExperimentSpec& s, const Given&) {
        if (s.mode != SampleMode::GL) throw InvalidParams("gl_support samples GL_n");
        s.formula = "expected_zp_gl";
        s.formula_args = base_args(s);
        s.checks = {Check{CheckKind::ZERO, {0}, 0.0}, point_check({1})};
      },
      gl_support_estimand, gl_support_predict, [](const ExperimentSpec&) { return 2; }};

  r["charpoly_det_identity"] = {
      "||det(A^2 - c)|| against ||Nm det(A_0 + x A_1)|| over Z_p[x]/(x^2 - c)", "charpoly_det_identity", {"c"},
      [](ExperimentSpec& s) {
        s.p = 3; s.n = 8; s.N = 10; s.trials = 100000; s.seed = 71;
        s.asymptotic = true;
        s.note = kEmpirical;
      },
      [](ExperimentSpec& s, const Given&) {
        if (!s.params.count("c")) s.params["c"] = static_cast<double>(smallest_nonresidue(s.p));
        const long c = iparam(s, "c");
        // c must be a non-residue unit so that x^2 - c is the unramified quadratic
        const Modulus mod(s.p, 1);
        if (c % s.p == 0 || mod.pow(static_cast<std::uint64_t>(c % s.p), (s.p - 1) / 2) == 1)
          throw InvalidParams("c must be a quadratic non-residue mod p");
        s.formula = "quad_det_expectation";
        s.formula_args = base_args(s);
        s.formula_args.set("m", 0);
        s.formula_args.label = "unramified";
        s.checks = {Check{CheckKind::TWO_SAMPLE, {0, 1}, 0.0}, point_check()};
      },
      charpoly_det_estimand, charpoly_det_predict, [](const ExperimentSpec&) { return 2; }};

  r["higher_degree_unramified_cubic"] = {
      "orbits in the unramified cubic extension from residue-simple cubic factors", "higher_degree_unramified_cubic", {},
      [](ExperimentSpec& s) {
        s.p = 3; s.n = 8; s.N = 1; s.trials = 100000; s.seed = 73;
        s.asymptotic = true;
        s.note = kEmpirical;
      },
      [](ExperimentSpec& s, const Given&) {
        s.formula = "higher_degree_bounds";
        s.formula_args = base_args(s);
        s.formula_args.set("f", 3).set("disc_norm", 1.0);
        s.checks = {Check{CheckKind::INTERVAL, {0}, 0.0}};
      },
      cubic_estimand, cubic_predict, [](const ExperimentSpec&) { return 1; }};

  return r;
}

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> r = make_registry();
  return r;
}

const Entry& entry_for(const std::string& name) {
  auto it = registry().find(name);
  if (it == registry().end()) throw UnknownExperiment("unknown experiment '" + name + "'");
  return it->second;
}

const Entry& estimand_entry(const ExperimentSpec& s) {
  return entry_for(s.estimand.empty() ? s.name : s.estimand);
}

// ---- override parsing ---------------------------------------------------

double parse_number(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(x))
    throw InvalidParams("parameter '" + key + "' expects a number, got '" + v + "'");
  return x;
}

long parse_integer(const std::string& key, const std::string& v) {
  const double x = parse_number(key, v);
  if (x != std::floor(x) || std::fabs(x) > 9.0e15) throw InvalidParams("parameter '" + key + "' expects an integer");
  return static_cast<long>(x);
}

std::vector<std::int64_t> parse_points(const std::string& v) {
  std::vector<std::int64_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_integer("points", item));
  }
  if (out.empty()) throw InvalidParams("points must be a comma-separated list of integers");
  return out;
}

}  // namespace

double ExperimentSpec::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw InvalidParams("experiment '" + name + "' has no parameter '" + key + "'");
  return it->second;
}

double ExperimentSpec::param_or(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

int ExperimentSpec::min_precision() const { return estimand_entry(*this).min_precision(*this); }

void ExperimentSpec::validate() const {
  if (p < 2 || !is_prime(p)) throw InvalidParams("p must be prime");
  if (n < 1) throw InvalidParams("n must be at least 1");
  if (N < 1) throw InvalidParams("N must be at least 1");
  if (trials < 1) throw InvalidParams("trials must be at least 1");
  if (workers < 1) throw InvalidParams("workers must be at least 1");
  if (tol < 0 || slack_abs < 0 || slack_rel < 0) throw InvalidParams("tolerances must be nonnegative");
  if (budget < 1) throw InvalidParams("budget must be positive");
  // constructing the modulus checks that p^N fits the arithmetic
  const Modulus mod(p, N);
  (void)mod;
  const Entry& e = estimand_entry(*this);
  for (const auto& [k, v] : params)
    if (!e.knobs.count(k))
      throw InvalidParams("experiment '" + name + "' has no parameter '" + k + "'");
  if (estimand == "quad_chain" || estimand == "quad_density" || estimand == "expected_quad" ||
      estimand == "charpoly_det_identity") {
    if (p == 2) throw UnsupportedPrime("quadratic experiments need an odd prime");
  }
  if (params.count("m") && (param("m") < 0 || param("m") >= N)) throw InvalidParams("need 0 <= m < N");
  if (params.count("max_m") && param("max_m") < 0) throw InvalidParams("max_m must be nonnegative");
  if (params.count("k") && param("k") < 0) throw InvalidParams("k must be nonnegative");
  if (params.count("d") && param("d") < 1) throw InvalidParams("d must be at least 1");
  if (params.count("s") && param("s") < 1) throw InvalidParams("s must be at least 1");
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, e] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

std::string experiment_description(const std::string& name) { return entry_for(name).description; }

ExperimentSpec build_experiment(const std::string& name, const Overrides& overrides) {
  const Entry& e = entry_for(name);
  ExperimentSpec s;
  s.name = name;
  s.estimand = e.estimand;
  e.defaults(s);
  if (name == "det_norm_mean") s.params["k"] = 1;
  Given g;
  for (const auto& [key, v] : overrides) {
    if (key == "p") {
      const long p = parse_integer(key, v);
      if (p < 2 || p > 0xffffffffL) throw InvalidParams("p out of range");
      s.p = static_cast<std::uint32_t>(p);
    } else if (key == "n") {
      s.n = static_cast<int>(parse_integer(key, v));
      g.n = true;
    } else if (key == "N" || key == "precision") {
      s.N = static_cast<int>(parse_integer(key, v));
      g.N = true;
    } else if (key == "trials") {
      s.trials = parse_integer(key, v);
      g.trials = true;
    } else if (key == "seed") {
      if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidParams("seed must be a nonnegative integer");
      s.seed = std::stoull(v);
    } else if (key == "workers") {
      s.workers = static_cast<int>(parse_integer(key, v));
    } else if (key == "tol") {
      s.tol = parse_number(key, v);
    } else if (key == "slack_abs") {
      s.slack_abs = parse_number(key, v);
    } else if (key == "slack_rel") {
      s.slack_rel = parse_number(key, v);
    } else if (key == "budget") {
      s.budget = parse_integer(key, v);
    } else if (key == "mode") {
      s.mode = sample_mode_from_string(v);
    } else if (key == "run_mode") {
      s.run_mode = run_mode_from_string(v);
      g.run_mode = true;
    } else if (key == "label") {
      s.label = v;
    } else if (key == "points") {
      s.points = parse_points(v);
      g.points = true;
    } else if (e.knobs.count(key)) {
      s.params[key] = parse_number(key, v);
    } else {
      throw InvalidParams("experiment '" + name + "' has no parameter '" + key + "'");
    }
  }
  if (name == "det_norm_mean" && s.param("k") != 1) throw InvalidParams("det_norm_mean fixes k = 1");
  if (s.n < 1) throw InvalidParams("n must be at least 1");
  e.finish(s, g);
  s.validate();
  return s;
}

Estimand make_estimand(const ExperimentSpec& spec) {
  spec.validate();
  return estimand_entry(spec).make(spec);
}

std::vector<Prediction> predict(const ExperimentSpec& spec) {
  spec.validate();
  return estimand_entry(spec).predict(spec);
}

}  // namespace padicrmt
