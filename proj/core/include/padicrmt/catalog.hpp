#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "padicrmt/qseries.hpp"

namespace padicrmt {

using Rational = boost::multiprecision::cpp_rational;

struct FormulaArgs {
  std::map<std::string, double> num;  // p, n, m, k, d, f, j, r, s, q, disc_norm, res_norm
  std::string label;                  // "unramified" / "ramified" / "GL" where relevant
  std::vector<std::int64_t> points;   // elements of Z_p given as integers

  FormulaArgs& set(const std::string& key, double v) {
    num[key] = v;
    return *this;
  }
  bool has(const std::string& key) const { return num.count(key) > 0; }
  double get(const std::string& key) const;
  double get_or(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
};

struct FormulaValue {
  RealValue value;
  std::optional<std::pair<double, double>> interval;
  std::optional<std::pair<double, double>> refinement;  // half-open (lo, hi]
  std::optional<Rational> exact;
  std::vector<std::string> flags;
};

// Pointwise densities and correlation functions.
FormulaValue eval_density(const std::string& name, const FormulaArgs& args);
// Expectations, counts and bounds.
FormulaValue eval_count(const std::string& name, const FormulaArgs& args);
// Either catalog, by name.
FormulaValue eval_formula(const std::string& name, const FormulaArgs& args);

const std::vector<std::string>& density_names();
const std::vector<std::string>& count_names();

// Shared pieces, exposed for cross-checks.
double pair_corr_series(std::uint32_t p, int m, double* abs_tol = nullptr);
int mobius(long n);
long divisor_count(long n);

}  // namespace padicrmt
