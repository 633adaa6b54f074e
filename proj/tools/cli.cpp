#include "cli.hpp"

#include <fnmatch.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "padicrmt/catalog.hpp"
#include "padicrmt/errors.hpp"
#include "padicrmt/experiment.hpp"

namespace padicrmt::cli {

namespace {

// Usage problems detected after argument parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kRunKeys = {"p",     "n",         "precision", "trials", "seed",   "workers",
                                           "tol",   "mode",      "label",     "points", "budget", "slack_abs",
                                           "slack_rel", "k",     "m",         "max_m",  "d",      "r",
                                           "s",     "c",         "n_min",     "n_max"};

const std::vector<std::string> kFormulaKeys = {"p", "n", "m", "k", "d",  "f",         "j",        "r",     "s",
                                               "q", "t", "u", "xi", "a", "b", "disc_norm", "res_norm", "label", "points"};

using Store = std::map<std::string, std::string>;

void add_keys(CLI::App* app, Store& store, const std::vector<std::string>& keys) {
  for (const auto& k : keys) app->add_option("--" + k, store[k], "parameter " + k);
}

Store given(const CLI::App* app, const Store& store) {
  Store out;
  for (const auto& [k, v] : store)
    if (app->count("--" + k) > 0) out[k] = v;
  return out;
}

Overrides to_overrides(const Store& s) {
  Overrides ov;
  for (const auto& [k, v] : s) ov[k == "precision" ? "N" : k] = v;
  return ov;
}

void apply_worker_default(Overrides& ov) {
  if (ov.count("workers")) return;
  if (const char* env = std::getenv("PADIC_WORKERS")) {
    const std::string w(env);
    if (w.empty() || w.find_first_not_of("0123456789") != std::string::npos || std::stoi(w) < 1)
      throw UsageError("PADIC_WORKERS must be a positive integer");
    ov["workers"] = w;
  }
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(15) << x;
  return os.str();
}

void print_summary(std::ostream& out, const RunResult& r) {
  out << r.spec.name << ": " << to_string(r.verdict.outcome);
  if (r.spec.asymptotic) out << " [ASYMPTOTIC]";
  out << '\n';
  if (r.estimate) {
    const auto& e = *r.estimate;
    for (std::size_t i = 0; i < e.estimate.size(); ++i)
      out << "  " << e.labels[i] << " = " << format_double(e.estimate[i]) << " +- " << format_double(e.se[i]) << '\n';
    out << "  trials " << e.trials << ", discard rate " << format_double(e.discard_rate) << ", seed " << e.seed
        << ", " << format_double(e.wall_ms) << " ms\n";
  }
  if (r.exact) {
    const auto& x = *r.exact;
    for (std::size_t i = 0; i < x.lo.size(); ++i) {
      out << "  " << x.labels[i] << " = ";
      if (x.lo[i] == x.hi[i])
        out << x.lo[i];
      else
        out << '[' << x.lo[i] << ", " << x.hi[i] << ']';
      out << '\n';
    }
    out << "  enumerated " << x.size << " items, " << x.undetermined << " undetermined\n";
  }
  out << "  " << r.verdict.details << '\n';
}

void write_reports(const std::vector<RunResult>& rs, const std::string& path, const std::string& format,
                   bool single) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  if (format == "csv")
    f << reports_to_csv(rs);
  else
    f << (single ? report_to_json(rs.front()) : reports_to_json(rs)) << '\n';
}

int exit_code(const std::vector<RunResult>& rs) {
  for (const auto& r : rs)
    if (r.verdict.outcome != Outcome::PASS) return 1;
  return 0;
}

int cmd_list(std::ostream& out) {
  out << "experiments:\n";
  for (const auto& n : experiment_names()) out << "  " << n << "  " << experiment_description(n) << '\n';
  out << "densities:\n";
  for (const auto& n : density_names()) out << "  " << n << '\n';
  out << "counts:\n";
  for (const auto& n : count_names()) out << "  " << n << '\n';
  return 0;
}

int cmd_formula(std::ostream& out, const std::string& name, const Store& args) {
  FormulaArgs fa;
  for (const auto& [k, v] : args) {
    if (k == "label") {
      fa.label = v;
    } else if (k == "points") {
      std::stringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long x = 0;
        try {
          x = std::stoll(item, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != item.size()) throw UsageError("--points expects integers, got '" + item + "'");
        fa.points.push_back(x);
      }
    } else {
      std::size_t used = 0;
      double x = 0;
      try {
        x = std::stod(v, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != v.size()) throw UsageError("--" + k + " expects a number, got '" + v + "'");
      fa.set(k, x);
    }
  }
  const FormulaValue v = eval_formula(name, fa);
  out << format_double(v.value.value) << '\n';
  out << "  abs_tol " << format_double(v.value.abs_tol) << '\n';
  if (v.exact) out << "  exact " << *v.exact << '\n';
  if (v.interval) out << "  interval [" << format_double(v.interval->first) << ", " << format_double(v.interval->second) << "]\n";
  if (v.refinement)
    out << "  refinement (" << format_double(v.refinement->first) << ", " << format_double(v.refinement->second) << "]\n";
  for (const auto& f : v.flags) out << "  flag " << f << '\n';
  return 0;
}

int cmd_run(std::ostream& out, const std::string& name, Overrides ov, const std::string& path,
            const std::string& format) {
  apply_worker_default(ov);
  const RunResult r = run_experiment(build_experiment(name, ov));
  print_summary(out, r);
  write_reports({r}, path, format, true);
  return exit_code({r});
}

int cmd_suite(std::ostream& out, const std::string& filter, Overrides ov, const std::string& path,
              const std::string& format) {
  apply_worker_default(ov);
  std::vector<RunResult> results;
  for (const auto& name : experiment_names()) {
    if (fnmatch(filter.c_str(), name.c_str(), 0) != 0) continue;
    results.push_back(run_experiment(build_experiment(name, ov)));
    print_summary(out, results.back());
  }
  if (results.empty()) throw UsageError("no experiment matches '" + filter + "'");
  int pass = 0;
  for (const auto& r : results) pass += r.verdict.outcome == Outcome::PASS;
  out << "suite: " << pass << "/" << results.size() << " PASS\n";
  write_reports(results, path, format, false);
  return exit_code(results);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic random matrix eigenvalue statistics"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list registry experiments and catalog formulas");

  std::string formula_name;
  Store formula_store;
  auto* formula = app.add_subcommand("formula", "evaluate a catalog formula");
  formula->add_option("name", formula_name, "catalog name")->required();
  add_keys(formula, formula_store, kFormulaKeys);

  std::string run_name, run_out, run_format = "json", run_mode;
  Store run_store;
  auto* run = app.add_subcommand("run", "run one registry experiment");
  run->add_option("experiment", run_name, "experiment name")->required();
  run->add_option("--out", run_out, "report file");
  run->add_option("--format", run_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--run-mode", run_mode, "MONTE_CARLO or EXHAUSTIVE")->check(CLI::IsMember({"MONTE_CARLO", "EXHAUSTIVE"}));
  add_keys(run, run_store, kRunKeys);

  std::string enum_name, enum_out, enum_format = "json";
  Store enum_store;
  auto* enumerate = app.add_subcommand("enumerate", "run a registry experiment by exhaustive enumeration");
  enumerate->add_option("experiment", enum_name, "experiment name")->required();
  enumerate->add_option("--out", enum_out, "report file");
  enumerate->add_option("--format", enum_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_keys(enumerate, enum_store, kRunKeys);

  std::string filter = "*", suite_out, suite_format = "json";
  Store suite_store;
  auto* suite = app.add_subcommand("suite", "run every matching registry experiment at its defaults");
  suite->add_option("--filter", filter, "glob over experiment names");
  suite->add_option("--out", suite_out, "report file");
  suite->add_option("--format", suite_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_keys(suite, suite_store, {"trials", "seed", "workers"});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (list->parsed()) return cmd_list(out);
    if (formula->parsed()) return cmd_formula(out, formula_name, given(formula, formula_store));
    if (run->parsed()) {
      Overrides ov = to_overrides(given(run, run_store));
      if (!run_mode.empty()) ov["run_mode"] = run_mode;
      return cmd_run(out, run_name, ov, run_out, run_format);
    }
    if (enumerate->parsed()) {
      Overrides ov = to_overrides(given(enumerate, enum_store));
      ov["run_mode"] = "EXHAUSTIVE";
      return cmd_run(out, enum_name, ov, enum_out, enum_format);
    }
    if (suite->parsed()) return cmd_suite(out, filter, to_overrides(given(suite, suite_store)), suite_out, suite_format);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace padicrmt::cli
