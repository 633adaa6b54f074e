#include "padicrmt/catalog.hpp"

#include <cmath>
#include <functional>

#include "padicrmt/errors.hpp"
#include "padicrmt/markov.hpp"
#include "padicrmt/modular.hpp"
#include "padicrmt/roots.hpp"

namespace padicrmt {

double FormulaArgs::get(const std::string& key) const {
  auto it = num.find(key);
  if (it == num.end()) throw InvalidParams("missing parameter '" + key + "'");
  return it->second;
}

double FormulaArgs::get_or(const std::string& key, double fallback) const {
  auto it = num.find(key);
  return it == num.end() ? fallback : it->second;
}

long FormulaArgs::get_int(const std::string& key) const {
  const double v = get(key);
  if (v != std::floor(v)) throw InvalidParams("parameter '" + key + "' must be an integer");
  return static_cast<long>(v);
}

int mobius(long n) {
  if (n < 1) throw InvalidParams("mobius needs n >= 1");
  int sign = 1;
  for (long q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    n /= q;
    if (n % q == 0) return 0;
    sign = -sign;
  }
  return n > 1 ? -sign : sign;
}

long divisor_count(long n) {
  long c = 0;
  for (long d = 1; d <= n; ++d) c += (n % d == 0);
  return c;
}

namespace {

using Cpp = boost::multiprecision::cpp_int;

std::uint32_t prime_arg(const FormulaArgs& a, const std::string& key = "p") {
  const long p = a.get_int(key);
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) throw InvalidParams("'" + key + "' must be prime");
  return static_cast<std::uint32_t>(p);
}

long nonneg_arg(const FormulaArgs& a, const std::string& key) {
  const long v = a.get_int(key);
  if (v < 0) throw InvalidParams("'" + key + "' must be nonnegative");
  return v;
}

long positive_arg(const FormulaArgs& a, const std::string& key) {
  const long v = a.get_int(key);
  if (v < 1) throw InvalidParams("'" + key + "' must be positive");
  return v;
}

Rational rpow(std::uint32_t p, long e) {
  Cpp x = boost::multiprecision::pow(Cpp(p), static_cast<unsigned>(e < 0 ? -e : e));
  return e >= 0 ? Rational(x) : Rational(Cpp(1), x);
}

Rational rational_pow(Rational x, long e) {
  Rational acc = 1;
  for (long i = 0; i < e; ++i) acc *= x;
  return acc;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

FormulaValue exact_value(const Rational& r) {
  FormulaValue v;
  v.exact = r;
  v.value = {to_double(r), 0.0};
  return v;
}

FormulaValue real_value(RealValue r) {
  FormulaValue v;
  v.value = r;
  return v;
}

bool ramified_label(const FormulaArgs& a) {
  if (a.label.empty()) throw InvalidParams("missing extension label");
  const ExtLabel l = ext_label_from_string(a.label);
  if (l == ExtLabel::QUAD_RAMIFIED) return true;
  if (l == ExtLabel::QUAD_UNRAMIFIED) return false;
  throw InvalidParams("label must be unramified or ramified");
}

// ||Disc_{K/Q_p}|| for the quadratic K: 1 unramified, p^{-1} ramified at odd p,
// caller-supplied at p = 2.
double quad_disc_norm(const FormulaArgs& a, std::uint32_t p, bool ramified) {
  if (!ramified) return 1.0;
  if (a.has("disc_norm")) {
    const double d = a.get("disc_norm");
    if (!(d > 0.0 && d < 1.0)) throw InvalidParams("ramified disc_norm must lie in (0,1)");
    return d;
  }
  if (p == 2) throw InvalidParams("ramified quadratic at p = 2 needs disc_norm");
  return 1.0 / p;
}

// sum of val(x_i - x_j) over i < j; throws on repeated points
long pair_valuation_sum(std::uint32_t p, const std::vector<std::int64_t>& pts) {
  long total = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      std::int64_t d = pts[i] - pts[j];
      if (d == 0) throw InvalidParams("points must be pairwise distinct");
      if (d < 0) d = -d;
      while (d % p == 0) {
        d /= p;
        ++total;
      }
    }
  return total;
}

Rational prod_one_minus(std::uint32_t p, long n) {
  Rational acc = 1;
  for (long i = 1; i <= n; ++i) acc *= 1 - rpow(p, -i);
  return acc;
}

RealValue scaled(RealValue r, double c) { return {r.value * c, r.abs_tol * std::fabs(c)}; }

// sum_{k>=0} p^{-((2m+1)k^2+(4m+1)k)/2} (1 - p^{-k-1})
RealValue unram_series(double pinv, int m) {
  return sum_series(
      [&](long k) {
        const double kd = static_cast<double>(k);
        return std::pow(pinv, ((2.0 * m + 1) * kd * kd + (4.0 * m + 1) * kd) / 2) * (1.0 - std::pow(pinv, kd + 1));
      },
      pinv);
}

// sum_{k>=0} p^{-(m+1)k^2-(2m+1)k} (1 - p^{-2k-2})
RealValue ram_series(double pinv, int m) {
  return sum_series(
      [&](long k) {
        const double kd = static_cast<double>(k);
        return std::pow(pinv, (m + 1.0) * kd * kd + (2.0 * m + 1) * kd) * (1.0 - std::pow(pinv, 2 * kd + 2));
      },
      pinv);
}

double orbital_quadratic_value(std::uint32_t p, bool ramified, long m) {
  const double pd = p;
  const double ram = (1.0 - std::pow(pd, m + 1)) / (1.0 - pd);
  return ramified ? ram : ram + (1.0 - std::pow(pd, m)) / (1.0 - pd);
}

Rational orbital_quadratic_exact(std::uint32_t p, bool ramified, long m) {
  // 1 + sum_{k=1}^m p^k (ramified), 1 + sum_{k=1}^m (p^k + p^{k-1}) (unramified)
  Rational acc = 1;
  for (long k = 1; k <= m; ++k) acc += rpow(p, k) + (ramified ? Rational(0) : rpow(p, k - 1));
  return acc;
}

RealValue quad_det_expectation(std::uint32_t p, bool ramified, int m) {
  const double pinv = 1.0 / p;
  return ramified ? scaled(ram_series(pinv, m), 1.0 - pinv) : scaled(unram_series(pinv, m), 1.0 - pinv * pinv);
}

RealValue quad_density(std::uint32_t p, bool ramified, int m, double disc_norm) {
  const double pinv = 1.0 / p, pm = std::pow(pinv, m);
  if (ramified) return scaled(ram_series(pinv, m), disc_norm * pm * (1.0 - pm * pinv) / (1.0 - pinv));
  return scaled(unram_series(pinv, m), pm * (1.0 + pinv - 2.0 * pm * pinv) / (1.0 - pinv));
}

using Handler = std::function<FormulaValue(const FormulaArgs&)>;

const std::map<std::string, Handler>& density_table() {
  static const std::map<std::string, Handler> table = {
      {"one_point_zp",
       [](const FormulaArgs& a) {
         if (a.has("p")) prime_arg(a);
         return exact_value(1);
       }},
      {"pair_corr_zp",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         double tol = 0;
         const double v = pair_corr_series(p, static_cast<int>(nonneg_arg(a, "m")), &tol);
         return real_value({v, tol});
       }},
      {"pair_corr_theta",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const long m = nonneg_arg(a, "m");
         const RealValue th = theta3(-std::sqrt(static_cast<double>(p)), std::pow(1.0 / p, 2.0 * m + 1));
         return real_value({1.0 - th.value, th.abs_tol});
       }},
      {"quad_density",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const bool ram = ramified_label(a);
         return real_value(quad_density(p, ram, static_cast<int>(nonneg_arg(a, "m")), quad_disc_norm(a, p, ram)));
       }},
      {"coulomb_zp",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const long n = static_cast<long>(a.points.size());
         if (n < 1) throw InvalidParams("coulomb_zp needs at least one point");
         const long v = pair_valuation_sum(p, a.points);
         return exact_value(prod_one_minus(p, n) / rational_pow(1 - rpow(p, -1), n) *
                            rpow(p, -v));
       }},
      {"points_on_variety_split",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const long r = positive_arg(a, "r");
         if (static_cast<long>(a.points.size()) != r) throw InvalidParams("split case needs exactly r points");
         const long v = pair_valuation_sum(p, a.points);
         // the identity holds once s > r * val Disc, with val Disc = 2 * sum_{i<j} val(x_i - x_j)
         if (a.has("s") && a.get_int("s") <= r * 2 * v) throw InvalidParams("s too small for the points' discriminant");
         const bool gl = a.label == "GL";
         if (!a.label.empty() && !gl && a.label != "MAT") throw InvalidParams("label must be MAT or GL");
         if (gl)
           for (auto x : a.points)
             if (((x % static_cast<std::int64_t>(p)) + p) % p == 0) return exact_value(0);
         Rational val = rational_pow(1 / (1 - rpow(p, -1)), r) * rpow(p, v);
         if (!gl) val *= prod_one_minus(p, r);
         return exact_value(val);
       }},
      {"poly_variety",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         if (a.points.empty()) throw InvalidParams("poly_variety needs points");
         const long v = pair_valuation_sum(p, a.points);
         if (a.has("s") && a.get_int("s") <= static_cast<long>(a.points.size()) * v)
           throw InvalidParams("s too small for the points' discriminant");
         return exact_value(rpow(p, v));
       }},
  };
  return table;
}

const std::map<std::string, Handler>& count_table() {
  static const std::map<std::string, Handler> table = {
      {"expected_zp",
       [](const FormulaArgs& a) {
         if (a.has("p")) prime_arg(a);
         return exact_value(1);
       }},
      {"expected_zp_gl",
       [](const FormulaArgs& a) {
         // one-point density 1 restricted to the units
         const auto p = prime_arg(a);
         FormulaValue v = exact_value(1 - rpow(p, -1));
         v.flags.push_back("ASYMPTOTIC");
         return v;
       }},
      {"var_zp",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const double pinv = 1.0 / p;
         return real_value(sum_series(
             [&](long k) {
               const double kd = static_cast<double>(k);
               return ((k % 2) ? -1.0 : 1.0) * (1.0 - pinv) * (1.0 + std::pow(pinv, kd + 1)) *
                      std::pow(pinv, (kd * kd + kd) / 2) / (1.0 - std::pow(pinv, kd * kd + 2 * kd + 2));
             },
             pinv));
       }},
      {"expected_quad",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const bool ram = ramified_label(a);
         const double pinv = 1.0 / p, disc = quad_disc_norm(a, p, ram);
         auto den = [&](double kd) {
           return (1.0 - std::pow(pinv, kd * kd + 2 * kd + 2)) * (1.0 - std::pow(pinv, kd * kd + 2 * kd + 3));
         };
         if (ram)
           return real_value(scaled(sum_series(
                                        [&](long k) {
                                          const double kd = static_cast<double>(k);
                                          return (1.0 - std::pow(pinv, 2 * kd + 2)) * std::pow(pinv, kd * kd + kd) / den(kd);
                                        },
                                        pinv),
                                    disc * (1.0 - pinv)));
         return real_value(scaled(sum_series(
                                      [&](long k) {
                                        const double kd = static_cast<double>(k);
                                        return (1.0 - std::pow(pinv, kd + 1)) * (1.0 + std::pow(pinv, kd * kd + 2 * kd + 3)) *
                                               std::pow(pinv, (kd * kd + kd) / 2) / den(kd);
                                      },
                                      pinv),
                                  1.0 - pinv));
       }},
      {"det_moment",
       [](const FormulaArgs& a) {
         // q defaults to the prime p
         const long q = a.has("q") ? positive_arg(a, "q") : static_cast<long>(prime_arg(a));
         const long n = nonneg_arg(a, "n"), k = nonneg_arg(a, "k");
         if (q < 2) throw InvalidParams("q must be at least 2");
         // (q^{-1};q^{-1})_k / (q^{-n-1};q^{-1})_k
         Rational num = 1, den = 1;
         for (long i = 0; i < k; ++i) {
           num *= 1 - rpow(static_cast<std::uint32_t>(q), -1 - i);
           den *= 1 - rpow(static_cast<std::uint32_t>(q), -n - 1 - i);
         }
         return exact_value(num / den);
       }},
      {"island_law",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const long d = positive_arg(a, "d"), j = nonneg_arg(a, "j");
         const double x = std::pow(1.0 / p, static_cast<double>(d));
         const RealValue inf = qpoch(x, x, kInfinity);
         const double rest = std::pow(x, static_cast<double>(j)) / qpoch(x, x, j).value;
         return real_value(scaled(inf, rest));
       }},
      {"orbital_quadratic",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         return exact_value(orbital_quadratic_exact(p, ramified_label(a), nonneg_arg(a, "m")));
       }},
      {"V_quadratic",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const bool ram = ramified_label(a);
         const long m = nonneg_arg(a, "m");
         const double delta = std::pow(1.0 / p, static_cast<double>(m)) * std::sqrt(quad_disc_norm(a, p, ram));
         // 1 - p^{-r/e} with r = 2
         const double denom = ram ? 1.0 - 1.0 / p : 1.0 - 1.0 / (static_cast<double>(p) * p);
         return real_value({delta * orbital_quadratic_value(p, ram, m) / denom, 0.0});
       }},
      {"quad_det_expectation",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         return real_value(quad_det_expectation(p, ramified_label(a), static_cast<int>(nonneg_arg(a, "m"))));
       }},
      {"generator_count",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const long f = positive_arg(a, "f");
         Rational acc = 0;
         for (long d = 1; d <= f; ++d)
           if (f % d == 0) acc += mobius(f / d) * rpow(p, d);
         return exact_value(acc);
       }},
      {"higher_degree_bounds",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const long f = positive_arg(a, "f");
         const double disc = a.get_or("disc_norm", 1.0);
         if (!(disc > 0.0 && disc <= 1.0)) throw InvalidParams("disc_norm must lie in (0,1]");
         Rational s = 0;
         for (long d = 1; d <= f; ++d)
           if (f % d == 0) s += mobius(f / d) * rpow(p, d - f);
         const double center = to_double(s), pf = std::pow(1.0 / p, static_cast<double>(f));
         FormulaValue v;
         v.exact = s;
         v.value = {center * disc, 0.0};
         v.interval = {{(center - pf) * disc, (center + (1.0 + divisor_count(f)) * pf / (1.0 - pf)) * disc}};
         v.flags.push_back("INTERVAL");
         return v;
       }},
      {"repulsion_bounds",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const long d = positive_arg(a, "d");
         const double res = a.get("res_norm");
         const double pd = std::pow(1.0 / p, static_cast<double>(d));
         // the resultant norm is a positive power of p^{-d}
         const double k = std::log(res) / std::log(pd);
         if (!(res > 0.0 && res < 1.0) || std::fabs(k - std::round(k)) > 1e-9)
           throw InvalidParams("res_norm must be a positive power of p^{-d}");
         const double c = qpoch(pd, pd, kInfinity).value;
         FormulaValue v;
         v.value = {res, 0.0};
         v.interval = {{res * c, res / c}};
         if (std::lround(k) == 1) v.refinement = {{pd, pd + pd * pd}};
         v.flags.push_back("INTERVAL");
         return v;
       }},
      {"orbital_bound",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const long d = positive_arg(a, "d");
         return exact_value(rpow(p, -d) + 2 * rpow(p, -2 * d));
       }},
      {"en_relation_constant",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const long n = positive_arg(a, "n");
         return exact_value(prod_one_minus(p, n) / rational_pow(1 - rpow(p, -1), n));
       }},
      {"en_asymptotic_exponent",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         const double n = static_cast<double>(positive_arg(a, "n"));
         FormulaValue v;
         v.value = {-n * n / (2.0 * (p - 1.0)) - 0.5 * n * std::log(n) / std::log(static_cast<double>(p)), 0.0};
         v.flags.push_back("UNBOUNDED_CONSTANT");
         return v;
       }},
      {"invertible_fraction",
       [](const FormulaArgs& a) {
         const auto p = prime_arg(a);
         return exact_value(prod_one_minus(p, positive_arg(a, "n")));
       }},
      {"markov_kernel",
       [](const FormulaArgs& a) {
         // a < 0 stands for the infinite state
         MarkovParams mp{a.get("t"), a.get_or("u", 1.0), a.get_or("xi", 1.0)};
         const long from = a.get_int("a");
         return real_value(markov_kernel_prob(mp, from < 0 ? kInfState : static_cast<int>(from),
                                              static_cast<int>(nonneg_arg(a, "b"))));
       }},
      {"generator_density",
       [](const FormulaArgs& a) {
         const double disc = a.get("disc_norm");
         if (!(disc > 0.0 && disc <= 1.0)) throw InvalidParams("disc_norm must lie in (0,1]");
         return real_value({disc, 0.0});
       }},
  };
  return table;
}

std::vector<std::string> keys_of(const std::map<std::string, Handler>& t) {
  std::vector<std::string> out;
  for (const auto& [k, v] : t) out.push_back(k);
  return out;
}

}  // namespace

double pair_corr_series(std::uint32_t p, int m, double* abs_tol) {
  const double pinv = 1.0 / p;
  const RealValue s = sum_series(
      [&](long k) {
        const double kd = static_cast<double>(k);
        return ((k % 2) ? -1.0 : 1.0) * std::pow(pinv, ((2.0 * m + 1) * kd * kd + (4.0 * m + 1) * kd) / 2) *
               (1.0 + std::pow(pinv, kd + 1));
      },
      pinv);
  const double pm = std::pow(pinv, m);
  if (abs_tol) *abs_tol = pm * s.abs_tol;
  return pm * s.value;
}

const std::vector<std::string>& density_names() {
  static const std::vector<std::string> names = keys_of(density_table());
  return names;
}

const std::vector<std::string>& count_names() {
  static const std::vector<std::string> names = keys_of(count_table());
  return names;
}

FormulaValue eval_density(const std::string& name, const FormulaArgs& args) {
  auto it = density_table().find(name);
  if (it == density_table().end()) throw UnknownFormula("unknown density formula '" + name + "'");
  return it->second(args);
}

FormulaValue eval_count(const std::string& name, const FormulaArgs& args) {
  auto it = count_table().find(name);
  if (it == count_table().end()) throw UnknownFormula("unknown count formula '" + name + "'");
  return it->second(args);
}

FormulaValue eval_formula(const std::string& name, const FormulaArgs& args) {
  if (density_table().count(name)) return eval_density(name, args);
  return eval_count(name, args);
}

}  // namespace padicrmt
