#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "padicrmt/catalog.hpp"

namespace padicrmt {

enum class RunMode { MONTE_CARLO, EXHAUSTIVE };
enum class SampleMode { MAT, GL, POLY };

std::string to_string(RunMode m);
std::string to_string(SampleMode m);
RunMode run_mode_from_string(const std::string& s);
SampleMode sample_mode_from_string(const std::string& s);

// How estimated components are judged against their predictions.
enum class CheckKind {
  POINT,        // |estimate - value| <= 3 se + tol (+ slack when asymptotic)
  INTERVAL,     // 3-sigma band overlaps the predicted interval
  EXACT,        // rational equality, or containment with bounded width
  CHI_SQUARE,   // one-hot components against predicted cell probabilities
  TOTAL_VARIATION,
  RATIO,        // components[0] / components[1], delta-method se
  TWO_SAMPLE,   // components[0] vs components[1]
  DECREASING,   // strictly decreasing estimates
  ZERO,         // every listed component identically zero
};

std::string to_string(CheckKind k);
CheckKind check_kind_from_string(const std::string& s);

struct Check {
  CheckKind kind = CheckKind::POINT;
  std::vector<int> components;  // empty: all components
  double threshold = 0.0;       // alpha (chi-square), distance (TV), width (EXACT)
};

// Analytic value for one estimated component.
struct Prediction {
  int component = 0;  // index into the estimated components
  std::string label;
  double value = 0.0;
  double tol = 0.0;
  std::optional<std::pair<double, double>> interval;
  std::optional<Rational> exact;
  std::vector<std::string> flags;
};

struct ExperimentSpec {
  std::string name;
  std::string estimand;
  RunMode run_mode = RunMode::MONTE_CARLO;
  SampleMode mode = SampleMode::MAT;
  std::uint32_t p = 2;
  int n = 1;
  int N = 10;
  long trials = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
  std::map<std::string, double> params;  // experiment-specific knobs (m, k, d, s, c, ...)
  std::vector<std::int64_t> points;
  std::string label;
  std::string formula;  // headline catalog entry
  FormulaArgs formula_args;
  std::vector<Check> checks;
  bool asymptotic = false;
  double slack_abs = 0.05;
  double slack_rel = 0.05;
  double tol = 1e-12;
  long budget = 1L << 26;
  std::string note;  // provenance of the defaults

  double param(const std::string& key) const;
  double param_or(const std::string& key, double fallback) const;
  // Smallest N for which the estimand is determined, by the precision policy.
  int min_precision() const;
  void validate() const;
};

struct EstimateReport {
  std::vector<std::string> labels;
  std::vector<double> estimate;
  std::vector<double> se;
  std::vector<std::pair<double, double>> ci;  // 95%
  long trials = 0;
  long used = 0;
  double discard_rate = 0.0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

struct ExactReport {
  std::vector<std::string> labels;
  std::vector<Rational> lo, hi;  // equal when nothing was undetermined
  std::uint64_t size = 0;        // items enumerated
  std::uint64_t undetermined = 0;
  double wall_ms = 0.0;
};

enum class Outcome { PASS, FAIL, INCONCLUSIVE };
std::string to_string(Outcome o);
Outcome outcome_from_string(const std::string& s);

struct Verdict {
  Outcome outcome = Outcome::PASS;
  double z = 0.0;  // largest standardized deviation (chi-square: statistic)
  std::string details;
};

struct RunResult {
  ExperimentSpec spec;
  std::optional<EstimateReport> estimate;
  std::optional<ExactReport> exact;
  std::vector<Prediction> predictions;
  Verdict verdict;
};

using Overrides = std::map<std::string, std::string>;

const std::vector<std::string>& experiment_names();
std::string experiment_description(const std::string& name);
ExperimentSpec build_experiment(const std::string& name, const Overrides& overrides = {});

EstimateReport run_monte_carlo(const ExperimentSpec& spec);
ExactReport run_exhaustive(const ExperimentSpec& spec);
std::vector<Prediction> predict(const ExperimentSpec& spec);

Verdict compare(const ExperimentSpec& spec, const EstimateReport& report,
                const std::vector<Prediction>& predictions);
Verdict compare(const ExperimentSpec& spec, const ExactReport& report,
                const std::vector<Prediction>& predictions);
// Single estimate against a single value; slack added on top of 3 se.
Verdict compare_point(double estimate, double se, const Prediction& prediction, double slack = 0.0);

RunResult run_experiment(const ExperimentSpec& spec);

// Report schema; parsing then re-serializing reproduces the text exactly.
std::string report_to_json(const RunResult& r);
RunResult report_from_json(const std::string& text);
std::string reports_to_json(const std::vector<RunResult>& rs);
std::string reports_to_csv(const std::vector<RunResult>& rs);

}  // namespace padicrmt
