#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "padicrmt/errors.hpp"
#include "padicrmt/experiment.hpp"

namespace padicrmt {

namespace {

using Json = nlohmann::ordered_json;

// JSON has no infinities; they travel as null.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double read_number(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

std::string rational_text(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

Rational parse_rational(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw InvalidParams("malformed rational '" + s + "'");
  }
}

const std::set<std::string> kGeneralKeys = {"p",       "n",        "N",        "trials",    "seed",
                                            "workers", "mode",     "run_mode", "tol",       "slack_abs",
                                            "slack_rel", "budget", "label",    "points"};

Json params_json(const ExperimentSpec& s) {
  Json j;
  j["p"] = s.p;
  j["n"] = s.n;
  j["N"] = s.N;
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  j["workers"] = s.workers;
  j["mode"] = to_string(s.mode);
  j["run_mode"] = to_string(s.run_mode);
  j["tol"] = s.tol;
  j["slack_abs"] = s.slack_abs;
  j["slack_rel"] = s.slack_rel;
  j["budget"] = s.budget;
  j["label"] = s.label;
  j["points"] = s.points;
  for (const auto& [k, v] : s.params) j[k] = v;
  return j;
}

Json spec_json(const ExperimentSpec& s) {
  Json formula;
  formula["name"] = s.formula;
  Json args = Json::object();
  for (const auto& [k, v] : s.formula_args.num) args[k] = v;
  formula["args"] = args;
  formula["label"] = s.formula_args.label;
  formula["points"] = s.formula_args.points;
  Json checks = Json::array();
  for (const auto& c : s.checks) {
    Json cj;
    cj["kind"] = to_string(c.kind);
    cj["components"] = c.components;
    cj["threshold"] = c.threshold;
    checks.push_back(cj);
  }
  Json j;
  j["estimand"] = s.estimand;
  j["formula"] = formula;
  j["checks"] = checks;
  j["asymptotic"] = s.asymptotic;
  j["note"] = s.note;
  return j;
}

Json prediction_json(const Prediction& p) {
  Json j;
  j["component"] = p.component;
  j["label"] = p.label;
  j["value"] = number(p.value);
  if (p.interval) j["interval"] = {number(p.interval->first), number(p.interval->second)};
  j["tol"] = p.tol;
  if (p.exact) j["exact"] = rational_text(*p.exact);
  j["flags"] = p.flags;
  return j;
}

Prediction prediction_from(const Json& j) {
  Prediction p;
  p.component = j.at("component").get<int>();
  p.label = j.at("label").get<std::string>();
  if (j.contains("interval")) p.interval = {{read_number(j["interval"][0]), read_number(j["interval"][1])}};
  p.value = read_number(j.at("value"));
  p.tol = j.at("tol").get<double>();
  if (j.contains("exact")) p.exact = parse_rational(j["exact"].get<std::string>());
  p.flags = j.at("flags").get<std::vector<std::string>>();
  return p;
}

// One component serializes as scalars, several as arrays.
template <class T, class F>
Json maybe_array(const std::vector<T>& v, F conv) {
  if (v.size() == 1) return conv(v[0]);
  Json a = Json::array();
  for (const auto& x : v) a.push_back(conv(x));
  return a;
}

template <class T, class F>
std::vector<T> read_maybe_array(const Json& j, F conv) {
  std::vector<T> out;
  if (j.is_array()) {
    for (const auto& x : j) out.push_back(conv(x));
  } else {
    out.push_back(conv(j));
  }
  return out;
}

Json to_json(const RunResult& r) {
  Json j;
  j["name"] = r.spec.name;
  j["params"] = params_json(r.spec);
  j["spec"] = spec_json(r.spec);
  if (r.estimate) {
    const EstimateReport& e = *r.estimate;
    j["labels"] = maybe_array(e.labels, [](const std::string& s) { return Json(s); });
    j["estimate"] = maybe_array(e.estimate, number);
    j["se"] = maybe_array(e.se, number);
    j["ci"] = maybe_array(e.ci, [](const std::pair<double, double>& c) { return Json{number(c.first), number(c.second)}; });
    j["discard_rate"] = e.discard_rate;
    j["trials_used"] = e.used;
  }
  if (r.exact) {
    const ExactReport& x = *r.exact;
    Json ex;
    ex["labels"] = maybe_array(x.labels, [](const std::string& s) { return Json(s); });
    ex["lo"] = maybe_array(x.lo, [](const Rational& q) { return Json(rational_text(q)); });
    ex["hi"] = maybe_array(x.hi, [](const Rational& q) { return Json(rational_text(q)); });
    ex["size"] = x.size;
    ex["undetermined"] = x.undetermined;
    j["exact"] = ex;
    j["discard_rate"] = x.size ? static_cast<double>(x.undetermined) / static_cast<double>(x.size) : 0.0;
  }
  j["analytic"] = maybe_array(r.predictions, prediction_json);
  j["verdict"] = to_string(r.verdict.outcome);
  j["z"] = number(r.verdict.z);
  j["details"] = r.verdict.details;
  j["seed"] = r.spec.seed;
  j["trials"] = r.spec.trials;
  j["wall_ms"] = r.estimate ? r.estimate->wall_ms : (r.exact ? r.exact->wall_ms : 0.0);
  return j;
}

RunResult from_json(const Json& j) {
  RunResult r;
  ExperimentSpec& s = r.spec;
  s.name = j.at("name").get<std::string>();
  const Json& pj = j.at("params");
  s.p = pj.at("p").get<std::uint32_t>();
  s.n = pj.at("n").get<int>();
  s.N = pj.at("N").get<int>();
  s.trials = pj.at("trials").get<long>();
  s.seed = pj.at("seed").get<std::uint64_t>();
  s.workers = pj.at("workers").get<int>();
  s.mode = sample_mode_from_string(pj.at("mode").get<std::string>());
  s.run_mode = run_mode_from_string(pj.at("run_mode").get<std::string>());
  s.tol = pj.at("tol").get<double>();
  s.slack_abs = pj.at("slack_abs").get<double>();
  s.slack_rel = pj.at("slack_rel").get<double>();
  s.budget = pj.at("budget").get<long>();
  s.label = pj.at("label").get<std::string>();
  s.points = pj.at("points").get<std::vector<std::int64_t>>();
  for (const auto& [k, v] : pj.items())
    if (!kGeneralKeys.count(k)) s.params[k] = v.get<double>();

  const Json& sj = j.at("spec");
  s.estimand = sj.at("estimand").get<std::string>();
  const Json& fj = sj.at("formula");
  s.formula = fj.at("name").get<std::string>();
  for (const auto& [k, v] : fj.at("args").items()) s.formula_args.num[k] = v.get<double>();
  s.formula_args.label = fj.at("label").get<std::string>();
  s.formula_args.points = fj.at("points").get<std::vector<std::int64_t>>();
  for (const auto& cj : sj.at("checks")) {
    Check c;
    c.kind = check_kind_from_string(cj.at("kind").get<std::string>());
    c.components = cj.at("components").get<std::vector<int>>();
    c.threshold = cj.at("threshold").get<double>();
    s.checks.push_back(c);
  }
  s.asymptotic = sj.at("asymptotic").get<bool>();
  s.note = sj.at("note").get<std::string>();

  const double wall = j.at("wall_ms").get<double>();
  if (j.contains("estimate")) {
    EstimateReport e;
    auto str = [](const Json& x) { return x.get<std::string>(); };
    e.labels = read_maybe_array<std::string>(j.at("labels"), str);
    e.estimate = read_maybe_array<double>(j.at("estimate"), read_number);
    e.se = read_maybe_array<double>(j.at("se"), read_number);
    const Json& ci = j.at("ci");
    if (e.estimate.size() == 1) {
      e.ci.emplace_back(read_number(ci[0]), read_number(ci[1]));
    } else {
      for (const auto& c : ci) e.ci.emplace_back(read_number(c[0]), read_number(c[1]));
    }
    e.discard_rate = j.at("discard_rate").get<double>();
    e.used = j.at("trials_used").get<long>();
    e.trials = s.trials;
    e.seed = s.seed;
    e.wall_ms = wall;
    r.estimate = e;
  }
  if (j.contains("exact")) {
    const Json& ex = j.at("exact");
    ExactReport x;
    auto str = [](const Json& v) { return v.get<std::string>(); };
    auto rat = [](const Json& v) { return parse_rational(v.get<std::string>()); };
    x.labels = read_maybe_array<std::string>(ex.at("labels"), str);
    x.lo = read_maybe_array<Rational>(ex.at("lo"), rat);
    x.hi = read_maybe_array<Rational>(ex.at("hi"), rat);
    x.size = ex.at("size").get<std::uint64_t>();
    x.undetermined = ex.at("undetermined").get<std::uint64_t>();
    x.wall_ms = wall;
    r.exact = x;
  }
  const Json& an = j.at("analytic");
  if (an.is_array()) {
    for (const auto& p : an) r.predictions.push_back(prediction_from(p));
  } else {
    r.predictions.push_back(prediction_from(an));
  }
  r.verdict.outcome = outcome_from_string(j.at("verdict").get<std::string>());
  r.verdict.z = read_number(j.at("z"));
  r.verdict.details = j.at("details").get<std::string>();
  return r;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string num_text(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::string report_to_json(const RunResult& r) { return to_json(r).dump(2); }

RunResult report_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParams(std::string("malformed report JSON: ") + e.what());
  }
  try {
    if (j.is_array()) {
      if (j.size() != 1) throw InvalidParams("expected a single report");
      return from_json(j[0]);
    }
    return from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParams(std::string("report JSON does not match the schema: ") + e.what());
  }
}

std::string reports_to_json(const std::vector<RunResult>& rs) {
  Json a = Json::array();
  for (const auto& r : rs) a.push_back(to_json(r));
  return a.dump(2);
}

// One row per (experiment, component).
std::string reports_to_csv(const std::vector<RunResult>& rs) {
  std::ostringstream os;
  os << "experiment,params,component,estimate,se,ci_lo,ci_hi,analytic,verdict,z,seed\n";
  for (const auto& r : rs) {
    std::string params;
    const Json pj = params_json(r.spec);
    for (const auto& [k, v] : pj.items()) {
      if (!params.empty()) params += ';';
      params += k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
    }
    const std::size_t comps = r.estimate ? r.estimate->estimate.size() : (r.exact ? r.exact->lo.size() : 0);
    for (std::size_t c = 0; c < comps; ++c) {
      std::string analytic;
      for (const auto& p : r.predictions)
        if (p.component == static_cast<int>(c)) analytic = p.exact ? rational_text(*p.exact) : num_text(p.value);
      os << csv_field(r.spec.name) << ',' << csv_field(params) << ',';
      if (r.estimate) {
        const auto& e = *r.estimate;
        os << csv_field(e.labels[c]) << ',' << num_text(e.estimate[c]) << ',' << num_text(e.se[c]) << ','
           << num_text(e.ci[c].first) << ',' << num_text(e.ci[c].second);
      } else {
        const auto& x = *r.exact;
        os << csv_field(x.labels[c]) << ',' << rational_text(x.lo[c]) << ",0," << rational_text(x.lo[c]) << ','
           << rational_text(x.hi[c]);
      }
      os << ',' << csv_field(analytic) << ',' << to_string(r.verdict.outcome) << ',' << num_text(r.verdict.z) << ','
         << r.spec.seed << '\n';
    }
  }
  return os.str();
}

}  // namespace padicrmt
