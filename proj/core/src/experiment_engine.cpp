#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "experiment_internal.hpp"
#include "padicrmt/errors.hpp"
#include "padicrmt/modular.hpp"
#include "padicrmt/rng.hpp"

namespace padicrmt {

namespace {

constexpr long kChunk = 1024;
constexpr double kZ95 = 1.959963984540054;
constexpr double kMaxDiscard = 0.05;

template <class E>
std::string enum_name(E value, std::initializer_list<std::pair<E, const char*>> table) {
  for (const auto& [v, s] : table)
    if (v == value) return s;
  throw InvalidParams("unnamed enum value");
}

template <class E>
E enum_value(const std::string& s, std::initializer_list<std::pair<E, const char*>> table, const char* what) {
  for (const auto& [v, name] : table)
    if (s == name) return v;
  throw InvalidParams(std::string("unknown ") + what + " '" + s + "'");
}

const std::initializer_list<std::pair<RunMode, const char*>> kRunModes = {
    {RunMode::MONTE_CARLO, "MONTE_CARLO"}, {RunMode::EXHAUSTIVE, "EXHAUSTIVE"}};
const std::initializer_list<std::pair<SampleMode, const char*>> kSampleModes = {
    {SampleMode::MAT, "MAT"}, {SampleMode::GL, "GL"}, {SampleMode::POLY, "POLY"}};
const std::initializer_list<std::pair<CheckKind, const char*>> kChecks = {
    {CheckKind::POINT, "POINT"},
    {CheckKind::INTERVAL, "INTERVAL"},
    {CheckKind::EXACT, "EXACT"},
    {CheckKind::CHI_SQUARE, "CHI_SQUARE"},
    {CheckKind::TOTAL_VARIATION, "TOTAL_VARIATION"},
    {CheckKind::RATIO, "RATIO"},
    {CheckKind::TWO_SAMPLE, "TWO_SAMPLE"},
    {CheckKind::DECREASING, "DECREASING"},
    {CheckKind::ZERO, "ZERO"}};
const std::initializer_list<std::pair<Outcome, const char*>> kOutcomes = {
    {Outcome::PASS, "PASS"}, {Outcome::FAIL, "FAIL"}, {Outcome::INCONCLUSIVE, "INCONCLUSIVE"}};

// Runs body(worker_index) on `workers` threads and rethrows the first failure.
template <class Body>
void run_workers(int workers, Body body) {
  if (workers <= 1) {
    body(0);
    return;
  }
  std::vector<std::thread> threads;
  std::exception_ptr error;
  std::mutex mu;
  for (int w = 0; w < workers; ++w)
    threads.emplace_back([&, w] {
      try {
        body(w);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    });
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

void check_precision(const ExperimentSpec& spec) {
  const int need = spec.min_precision();
  if (spec.N < need)
    throw PrecisionPolicyViolation("experiment '" + spec.name + "' needs N >= " + std::to_string(need) +
                                   ", got " + std::to_string(spec.N));
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

const Prediction* prediction_for(const std::vector<Prediction>& ps, int component) {
  for (const auto& p : ps)
    if (p.component == component) return &p;
  return nullptr;
}

std::vector<int> check_components(const Check& c, std::size_t count) {
  if (!c.components.empty()) return c.components;
  std::vector<int> all(count);
  for (std::size_t i = 0; i < count; ++i) all[i] = static_cast<int>(i);
  return all;
}

double slack_for(const ExperimentSpec& spec, double value) {
  return spec.asymptotic ? std::max(spec.slack_abs, spec.slack_rel * std::fabs(value)) : 0.0;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

struct CheckResult {
  bool pass = true;
  double z = 0.0;
  std::string details;
};

CheckResult chi_square(const EstimateReport& r, const std::vector<int>& comps,
                       const std::vector<Prediction>& preds, double alpha) {
  // pool cells whose expected count is below 5
  const double n = static_cast<double>(r.used);
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double pool_obs = 0, pool_exp = 0;
  for (int c : comps) {
    const Prediction* pr = prediction_for(preds, c);
    if (!pr) throw InvalidParams("chi-square cell without a prediction");
    const double expected = pr->value * n, observed = r.estimate[c] * n;
    if (expected < 5.0) {
      pool_obs += observed;
      pool_exp += expected;
    } else {
      cells.emplace_back(observed, expected);
    }
  }
  if (pool_exp > 0 || pool_obs > 0) cells.emplace_back(pool_obs, pool_exp);
  double stat = 0;
  for (const auto& [o, e] : cells) {
    if (e <= 0) {
      if (o > 0) stat = std::numeric_limits<double>::infinity();
      continue;
    }
    stat += (o - e) * (o - e) / e;
  }
  const int df = static_cast<int>(cells.size()) - 1;
  double pvalue = 1.0;
  if (std::isinf(stat)) {
    pvalue = 0.0;
  } else if (df >= 1) {
    pvalue = boost::math::gamma_q(df / 2.0, stat / 2.0);
  }
  CheckResult out;
  out.pass = pvalue >= alpha;
  out.z = stat;
  out.details = "chi-square " + fmt(stat) + " on " + std::to_string(df) + " df, p-value " + fmt(pvalue) +
                " (alpha " + fmt(alpha) + ")";
  return out;
}

}  // namespace

std::string to_string(RunMode m) { return enum_name(m, kRunModes); }
std::string to_string(SampleMode m) { return enum_name(m, kSampleModes); }
std::string to_string(CheckKind k) { return enum_name(k, kChecks); }
std::string to_string(Outcome o) { return enum_name(o, kOutcomes); }
RunMode run_mode_from_string(const std::string& s) { return enum_value(s, kRunModes, "run mode"); }
SampleMode sample_mode_from_string(const std::string& s) { return enum_value(s, kSampleModes, "sample mode"); }
CheckKind check_kind_from_string(const std::string& s) { return enum_value(s, kChecks, "check kind"); }
Outcome outcome_from_string(const std::string& s) { return enum_value(s, kOutcomes, "outcome"); }

EstimateReport run_monte_carlo(const ExperimentSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  check_precision(spec);
  const Estimand est = make_estimand(spec);
  if (!est.sample) throw InvalidParams("experiment '" + spec.name + "' has no Monte Carlo mode");
  const std::size_t comps = est.labels.size();
  const long chunks = (spec.trials + kChunk - 1) / kChunk;

  struct Partial {
    std::vector<double> sum, sumsq;
    long used = 0;
  };
  std::vector<Partial> partials(static_cast<std::size_t>(chunks));
  std::atomic<long> next{0};
  const int workers = static_cast<int>(std::min<long>(spec.workers, chunks));

  run_workers(workers, [&](int) {
    std::vector<double> draw(comps);
    for (long c = next++; c < chunks; c = next++) {
      Partial& part = partials[static_cast<std::size_t>(c)];
      part.sum.assign(comps, 0.0);
      part.sumsq.assign(comps, 0.0);
      Rng rng(spec.seed, static_cast<std::uint64_t>(c));
      const long count = std::min(kChunk, spec.trials - c * kChunk);
      for (long i = 0; i < count; ++i) {
        std::fill(draw.begin(), draw.end(), 0.0);
        if (!est.sample(rng, draw.data())) continue;
        ++part.used;
        for (std::size_t k = 0; k < comps; ++k) {
          part.sum[k] += draw[k];
          part.sumsq[k] += draw[k] * draw[k];
        }
      }
    }
  });

  std::vector<double> sum(comps, 0.0), sumsq(comps, 0.0);
  long used = 0;
  for (const auto& part : partials) {
    used += part.used;
    for (std::size_t k = 0; k < comps; ++k) {
      sum[k] += part.sum[k];
      sumsq[k] += part.sumsq[k];
    }
  }

  EstimateReport r;
  r.labels = est.labels;
  r.trials = spec.trials;
  r.used = used;
  r.discard_rate = static_cast<double>(spec.trials - used) / static_cast<double>(spec.trials);
  r.seed = spec.seed;
  for (std::size_t k = 0; k < comps; ++k) {
    const double mean = used > 0 ? sum[k] / used : 0.0;
    double var = used > 1 ? (sumsq[k] - used * mean * mean) / (used - 1) : 0.0;
    if (var < 0) var = 0;
    const double se = used > 0 ? std::sqrt(var / used) : 0.0;
    r.estimate.push_back(mean);
    r.se.push_back(se);
    r.ci.emplace_back(mean - kZ95 * se, mean + kZ95 * se);
  }
  r.wall_ms = elapsed_ms(start);
  return r;
}

ExactReport run_exhaustive(const ExperimentSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  check_precision(spec);
  const Estimand est = make_estimand(spec);
  if (!est.classify) throw InvalidParams("experiment '" + spec.name + "' has no exhaustive mode");
  const std::uint64_t base = Modulus(spec.p, spec.N).pN();
  // size = base^digits, refused once it passes the budget
  std::uint64_t total = 1;
  for (int i = 0; i < est.digits; ++i) {
    if (total > static_cast<std::uint64_t>(spec.budget) / base + 1) {
      total = static_cast<std::uint64_t>(spec.budget) + 1;
      break;
    }
    total *= base;
  }
  if (total > static_cast<std::uint64_t>(spec.budget))
    throw BudgetExceeded("exhaustive enumeration of " + std::to_string(base) + "^" + std::to_string(est.digits) +
                         " items exceeds the budget of " + std::to_string(spec.budget));

  const std::size_t classes = est.class_values.size();
  const int workers = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(spec.workers), total));
  std::vector<std::vector<std::uint64_t>> counts(workers, std::vector<std::uint64_t>(classes, 0));

  run_workers(workers, [&](int w) {
    const std::uint64_t lo = total * w / workers, hi = total * (w + 1) / workers;
    std::vector<std::uint64_t> item(est.digits);
    std::uint64_t x = lo;
    for (auto& d : item) {
      d = x % base;
      x /= base;
    }
    for (std::uint64_t i = lo; i < hi; ++i) {
      const int c = est.classify(item.data());
      if (c >= 0) {
        if (static_cast<std::size_t>(c) >= classes) throw InvalidParams("class index out of range");
        ++counts[w][c];
      }
      for (int k = 0; k < est.digits && ++item[k] == base; ++k) item[k] = 0;
    }
  });

  std::vector<std::uint64_t> total_counts(classes, 0);
  for (const auto& cw : counts)
    for (std::size_t c = 0; c < classes; ++c) total_counts[c] += cw[c];
  std::uint64_t population = 0, undetermined = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    population += total_counts[c];
    bool exact = true;
    for (const auto& [lo, hi] : est.class_values[c]) exact = exact && lo == hi;
    if (!exact) undetermined += total_counts[c];
  }
  if (population == 0) throw InvalidParams("enumeration found no item in the population");

  ExactReport r;
  r.labels = est.labels;
  r.size = total;
  r.undetermined = undetermined;
  for (std::size_t k = 0; k < est.labels.size(); ++k) {
    Rational lo = 0, hi = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      if (total_counts[c] == 0) continue;
      lo += est.class_values[c][k].first * Rational(total_counts[c]);
      hi += est.class_values[c][k].second * Rational(total_counts[c]);
    }
    r.lo.push_back(lo / Rational(population));
    r.hi.push_back(hi / Rational(population));
  }
  r.wall_ms = elapsed_ms(start);
  return r;
}

Verdict compare_point(double estimate, double se, const Prediction& prediction, double slack) {
  Verdict v;
  const double diff = std::fabs(estimate - prediction.value);
  v.z = se > 0 ? diff / se : (diff > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  const bool ok = diff <= 3.0 * se + prediction.tol + slack;
  v.outcome = ok ? Outcome::PASS : Outcome::FAIL;
  v.details = prediction.label + ": " + fmt(estimate) + " +- " + fmt(se) + " vs " + fmt(prediction.value) +
              " (z " + fmt(v.z) + (slack > 0 ? ", slack " + fmt(slack) : "") + ")";
  return v;
}

Verdict compare(const ExperimentSpec& spec, const EstimateReport& r, const std::vector<Prediction>& preds) {
  Verdict out;
  std::vector<std::string> notes;
  bool pass = true;
  const std::size_t comps = r.estimate.size();

  for (const Check& check : spec.checks) {
    const std::vector<int> cs = check_components(check, comps);
    for (int c : cs)
      if (c < 0 || static_cast<std::size_t>(c) >= comps) throw InvalidParams("check refers to a missing component");
    CheckResult res;
    switch (check.kind) {
      case CheckKind::POINT: {
        for (int c : cs) {
          const Prediction* pr = prediction_for(preds, c);
          if (!pr) throw InvalidParams("component without a prediction");
          Prediction p = *pr;
          p.tol += spec.tol;
          const Verdict v = compare_point(r.estimate[c], r.se[c], p, slack_for(spec, p.value));
          res.pass = res.pass && v.outcome == Outcome::PASS;
          res.z = std::max(res.z, v.z);
          res.details += (res.details.empty() ? "" : "; ") + r.labels[c] + " " + v.details;
        }
        break;
      }
      case CheckKind::INTERVAL: {
        for (int c : cs) {
          const Prediction* pr = prediction_for(preds, c);
          if (!pr || !pr->interval) throw InvalidParams("interval check without an interval prediction");
          const auto [lo, hi] = *pr->interval;
          const double slack = slack_for(spec, pr->value) + pr->tol + spec.tol;
          const double e = r.estimate[c], band = 3.0 * r.se[c];
          const bool ok = e + band + slack >= lo && e - band - slack <= hi;
          const double dist = e < lo ? lo - e : (e > hi ? e - hi : 0.0);
          const double z = r.se[c] > 0 ? dist / r.se[c] : (dist > 0 ? std::numeric_limits<double>::infinity() : 0.0);
          res.pass = res.pass && ok;
          res.z = std::max(res.z, z);
          res.details += (res.details.empty() ? "" : "; ") + r.labels[c] + " " + fmt(e) + " +- " + fmt(r.se[c]) +
                         " vs [" + fmt(lo) + ", " + fmt(hi) + "]";
        }
        break;
      }
      case CheckKind::EXACT:
        throw InvalidParams("exact checks need an exhaustive report");
      case CheckKind::CHI_SQUARE:
        res = chi_square(r, cs, preds, check.threshold);
        break;
      case CheckKind::TOTAL_VARIATION: {
        double tv = 0;
        for (int c : cs) {
          const Prediction* pr = prediction_for(preds, c);
          if (!pr) throw InvalidParams("component without a prediction");
          tv += std::fabs(r.estimate[c] - pr->value);
        }
        tv *= 0.5;
        res.pass = tv < check.threshold;
        res.details = "total variation " + fmt(tv) + " (threshold " + fmt(check.threshold) + ")";
        break;
      }
      case CheckKind::RATIO: {
        if (cs.size() != 2) throw InvalidParams("ratio check needs two components");
        const Prediction* pr = prediction_for(preds, cs[0]);
        if (!pr) throw InvalidParams("ratio check without a prediction");
        const double a = r.estimate[cs[0]], b = r.estimate[cs[1]];
        if (a <= 0 || b <= 0) {
          res.pass = false;
          res.details = "ratio undefined (zero estimate)";
          break;
        }
        // the two indicators come from independent draws
        const double ratio = a / b;
        const double se = ratio * std::hypot(r.se[cs[0]] / a, r.se[cs[1]] / b);
        Prediction p = *pr;
        p.tol += spec.tol;
        const Verdict v = compare_point(ratio, se, p, slack_for(spec, p.value));
        res.pass = v.outcome == Outcome::PASS;
        res.z = v.z;
        res.details = "ratio " + v.details;
        break;
      }
      case CheckKind::TWO_SAMPLE: {
        if (cs.size() != 2) throw InvalidParams("two-sample check needs two components");
        const double diff = std::fabs(r.estimate[cs[0]] - r.estimate[cs[1]]);
        const double se = std::hypot(r.se[cs[0]], r.se[cs[1]]);
        const double slack = slack_for(spec, 0.5 * (r.estimate[cs[0]] + r.estimate[cs[1]]));
        res.pass = diff <= 3.0 * se + spec.tol + slack;
        res.z = se > 0 ? diff / se : (diff > 0 ? std::numeric_limits<double>::infinity() : 0.0);
        res.details = r.labels[cs[0]] + " vs " + r.labels[cs[1]] + ": difference " + fmt(diff) + " +- " + fmt(se);
        break;
      }
      case CheckKind::DECREASING: {
        for (std::size_t i = 0; i < cs.size(); ++i) {
          const double e = r.estimate[cs[i]];
          if (e <= 0) res.pass = false;
          if (i > 0 && !(e < r.estimate[cs[i - 1]])) res.pass = false;
          res.details += (i ? " > " : "log estimates: ") + (e > 0 ? fmt(std::log(e)) : std::string("-inf"));
        }
        break;
      }
      case CheckKind::ZERO: {
        double worst = 0;
        for (int c : cs) worst = std::max(worst, std::fabs(r.estimate[c]));
        res.pass = worst == 0.0;
        res.details = "largest rate among must-be-zero components " + fmt(worst);
        break;
      }
    }
    pass = pass && res.pass;
    out.z = std::max(out.z, res.z);
    notes.push_back(to_string(check.kind) + (res.pass ? " ok: " : " failed: ") + res.details);
  }

  if (r.discard_rate > kMaxDiscard) {
    out.outcome = Outcome::INCONCLUSIVE;
    notes.insert(notes.begin(), "discard rate " + fmt(r.discard_rate) + " exceeds 5%");
  } else {
    out.outcome = pass ? Outcome::PASS : Outcome::FAIL;
  }
  if (spec.asymptotic) notes.insert(notes.begin(), "ASYMPTOTIC");
  for (std::size_t i = 0; i < notes.size(); ++i) out.details += (i ? " | " : "") + notes[i];
  return out;
}

Verdict compare(const ExperimentSpec& spec, const ExactReport& r, const std::vector<Prediction>& preds) {
  Verdict out;
  bool pass = true;
  std::vector<std::string> notes;
  for (const Check& check : spec.checks) {
    if (check.kind != CheckKind::EXACT && check.kind != CheckKind::ZERO)
      throw InvalidParams("exhaustive reports support exact checks only");
    for (int c : check_components(check, r.lo.size())) {
      if (c < 0 || static_cast<std::size_t>(c) >= r.lo.size()) throw InvalidParams("check refers to a missing component");
      const Prediction* pr = prediction_for(preds, c);
      Rational target = 0;
      if (check.kind == CheckKind::EXACT) {
        if (!pr || !pr->exact) throw InvalidParams("exact check without an exact prediction");
        target = *pr->exact;
      }
      const Rational width = r.hi[c] - r.lo[c];
      bool ok;
      if (check.threshold == 0.0)
        ok = r.lo[c] == target && r.hi[c] == target;
      else
        ok = r.lo[c] <= target && target <= r.hi[c] && width <= Rational(check.threshold);
      pass = pass && ok;
      std::ostringstream os;
      os << r.labels[c] << " in [" << r.lo[c] << ", " << r.hi[c] << "] vs " << target;
      notes.push_back(to_string(check.kind) + (ok ? " ok: " : " failed: ") + os.str());
    }
  }
  out.outcome = pass ? Outcome::PASS : Outcome::FAIL;
  out.z = 0.0;
  for (std::size_t i = 0; i < notes.size(); ++i) out.details += (i ? " | " : "") + notes[i];
  return out;
}

RunResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  RunResult out;
  out.spec = spec;
  out.predictions = predict(spec);
  if (spec.run_mode == RunMode::EXHAUSTIVE) {
    out.exact = run_exhaustive(spec);
    out.verdict = compare(spec, *out.exact, out.predictions);
  } else {
    out.estimate = run_monte_carlo(spec);
    out.verdict = compare(spec, *out.estimate, out.predictions);
  }
  return out;
}

}  // namespace padicrmt
