#include "fraglab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "fraglab/benford.hpp"
#include "fraglab/box_frag.hpp"
#include "fraglab/diophantine.hpp"
#include "fraglab/errors.hpp"
#include "fraglab/order_analytic.hpp"
#include "fraglab/stick_exact.hpp"
#include "fraglab/truncation.hpp"

namespace fraglab::cli {

namespace {

// Reads fields from one JSON object and rejects whatever is left unread.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(name(key), "required field is missing");
    return j_.at(key);
  }

  template <class T>
  T req(const std::string& key) {
    return convert<T>(key, raw(key));
  }

  template <class T>
  T opt(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    return convert<T>(key, j_.at(key));
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError(name(k), "unknown field");
  }

 private:
  template <class T>
  T convert(const std::string& key, const json& v) const {
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(name(key), "expected a string");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(name(key), "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(name(key), "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned()) return v.get<T>();
        if (v.get<long long>() < 0) throw ConfigError(name(key), "expected a non-negative integer");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(name(key), "expected a number");
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) throw ConfigError(name(key), "expected an array of numbers");
      for (const auto& e : v)
        if (!e.is_number()) throw ConfigError(name(key), "expected an array of numbers");
    }
    return v.get<T>();
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
auto guarded(const std::string& field, F&& make) {
  try {
    return make();
  } catch (const DomainError& e) {
    throw ConfigError(field, e.what());
  }
}

int require_range(Fields& f, const std::string& key, long long lo, long long hi, std::optional<long long> fallback = {}) {
  const long long v = fallback ? f.opt<long long>(key, *fallback) : f.req<long long>(key);
  if (v < lo || v > hi)
    throw ConfigError(f.name(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

// ---- typed parameter records -------------------------------------------

struct StickParams {
  int N = 0;
  std::vector<double> p;
  long long B = 10;
  double a = 0.0, b = 1.0;
  int grid_cells = 20;
  double epsilon = 0.5, delta = 0.04;
  std::uint64_t term_budget = stick::kDefaultTermBudget;
  std::string csv_path;
};

struct CutSpec {
  std::string kind;
  json raw;
};

struct BoxParams {
  int m = 3, N = 0;
  long long B = 10;
  int trials = 1;
  CutSpec cut;
  std::string statistic = "max_face";
  int d = 1;
  double a = 0.0, b = 1.0;
  double draw_budget = box::kDefaultDrawBudget;
  std::string csv_path;
};

struct AnalyticParams {
  int m = 3, d = 1;
  std::string quantity;
  double y = 0.0;
  int N = 1;
  double C = 1.0;
  double a = 0.0, b = 1.0;
  order::QuadratureSpec spec;
};

struct DiophParams {
  double x = 0.0;
  std::int64_t q_max = 1'000'000;
  double tol = 1e-12;
  int max_terms = 64;
  std::int64_t q_floor = 2;
};

StickParams parse_stick(const json& j, bool truncated) {
  Fields f(j, "params");
  StickParams s;
  s.N = require_range(f, "N", 0, 1'000'000);
  s.p = f.req<std::vector<double>>("p");
  s.B = f.opt<long long>("B", 10);
  s.a = f.opt<double>("a", 0.0);
  s.b = f.opt<double>("b", 1.0);
  s.grid_cells = require_range(f, "grid_cells", 1, 100000, 20);
  if (truncated) {
    s.epsilon = f.req<double>("epsilon");
    s.delta = f.req<double>("delta");
  } else {
    s.term_budget = f.opt<std::uint64_t>("term_budget", stick::kDefaultTermBudget);
    s.csv_path = f.opt<std::string>("csv_path", "");
  }
  f.finish();
  guarded("params.p", [&] { return stick::ProportionVector(s.p); });
  guarded("params.B", [&] { return benford::Base(s.B); });
  guarded("params.a", [&] { return benford::IntervalQuery(s.a, s.b); });
  if (truncated) guarded("params.delta", [&] { return stick::TruncationParams(s.epsilon, s.delta); });
  return s;
}

box::CutDistribution make_cut(const CutSpec& c, const benford::Base& B) {
  Fields f(c.raw, "params.cut");
  f.req<std::string>("kind");
  auto build = [&]() -> box::CutDistribution {
    if (c.kind == "log_uniform") return box::CutDistribution::log_uniform(f.req<double>("lo"), f.req<double>("hi"), B);
    if (c.kind == "beta")
      return box::CutDistribution::beta(f.req<double>("alpha"), f.req<double>("beta"), f.req<double>("p_min"), B);
    if (c.kind == "fixed") return box::CutDistribution::fixed(f.req<double>("p"), B);
    if (c.kind == "table")
      return box::CutDistribution::table(f.req<std::vector<double>>("edges"), f.req<std::vector<double>>("weights"), B);
    throw ConfigError("params.cut.kind", "unknown cut kind '" + c.kind + "'");
  };
  auto cut = guarded("params.cut", build);
  f.finish();
  return cut;
}

BoxParams parse_box(const json& j) {
  Fields f(j, "params");
  BoxParams s;
  s.m = require_range(f, "m", 1, 64);
  s.N = require_range(f, "N", 0, 100'000'000);
  s.B = f.opt<long long>("B", 10);
  s.trials = require_range(f, "trials", 1, 2'000'000'000);
  const json& cut = f.raw("cut");
  {
    Fields cf(cut, "params.cut");
    s.cut = {cf.req<std::string>("kind"), cut};
  }
  s.statistic = f.opt<std::string>("statistic", "max_face");
  if (s.statistic != "vol_d" && s.statistic != "max_face" && s.statistic != "z_vector")
    throw ConfigError("params.statistic", "expected vol_d, max_face or z_vector");
  s.d = require_range(f, "d", 1, s.m, 1);
  s.a = f.opt<double>("a", 0.0);
  s.b = f.opt<double>("b", 1.0);
  s.draw_budget = f.opt<double>("draw_budget", box::kDefaultDrawBudget);
  s.csv_path = f.opt<std::string>("csv_path", "");
  f.finish();
  const auto base = guarded("params.B", [&] { return benford::Base(s.B); });
  const auto c = make_cut(s.cut, base);
  if (s.statistic == "z_vector") {
    if (s.N < 1) throw ConfigError("params.N", "z_vector needs N >= 1");
    if (!(c.sigma() > 0.0)) throw ConfigError("params.cut", "z_vector needs a cut law with positive spread");
  }
  guarded("params.a", [&] { return benford::IntervalQuery(s.a, s.b); });
  return s;
}

AnalyticParams parse_analytic(const json& j) {
  Fields f(j, "params");
  AnalyticParams s;
  s.m = require_range(f, "m", 1, 20);
  s.d = require_range(f, "d", 1, s.m);
  s.quantity = f.req<std::string>("quantity");
  if (s.quantity == "main_cdf" || s.quantity == "main_density") {
    s.y = f.req<double>("y");
  } else if (s.quantity == "equidistribution_sum") {
    s.N = require_range(f, "N", 1, 100'000'000);
    s.C = f.req<double>("C");
    if (!(s.C > 0.0)) throw ConfigError("params.C", "must be positive");
    s.a = f.opt<double>("a", 0.0);
    s.b = f.opt<double>("b", 1.0);
    guarded("params.a", [&] { return benford::IntervalQuery(s.a, s.b); });
  } else {
    throw ConfigError("params.quantity", "expected main_cdf, main_density or equidistribution_sum");
  }
  s.spec.abs_tol = f.opt<double>("abs_tol", s.spec.abs_tol);
  s.spec.rel_tol = f.opt<double>("rel_tol", s.spec.rel_tol);
  if (f.has("lower_cut")) s.spec.lower_cut = f.req<double>("lower_cut");
  else f.opt<double>("lower_cut", 0.0);
  s.spec.max_evals = f.opt<std::int64_t>("max_evals", s.spec.max_evals);
  s.spec.mc_samples = f.opt<std::int64_t>("mc_samples", s.spec.mc_samples);
  const std::string scheme = f.opt<std::string>("scheme", "auto");
  if (scheme == "nested_adaptive") s.spec.scheme = order::Scheme::nested_adaptive;
  else if (scheme == "ordered_gaussian_mc") s.spec.scheme = order::Scheme::ordered_gaussian_mc;
  else if (scheme != "auto") throw ConfigError("params.scheme", "expected auto, nested_adaptive or ordered_gaussian_mc");
  if (s.quantity != "equidistribution_sum" && s.spec.resolve(s.d) == order::Scheme::nested_adaptive && s.d > 3)
    throw ConfigError("params.scheme", "nested quadrature supports d <= 3");
  f.finish();
  guarded("params", [&] {
    s.spec.validate();
    return 0;
  });
  return s;
}

DiophParams parse_dioph(const json& j) {
  Fields f(j, "params");
  DiophParams s;
  s.x = f.req<double>("x");
  if (!std::isfinite(s.x)) throw ConfigError("params.x", "must be finite");
  s.q_max = f.opt<std::int64_t>("q_max", s.q_max);
  if (s.q_max < 1) throw ConfigError("params.q_max", "must be at least 1");
  s.tol = f.opt<double>("tol", s.tol);
  if (!(s.tol > 0.0)) throw ConfigError("params.tol", "must be positive");
  s.max_terms = require_range(f, "max_terms", 1, 10000, 64);
  s.q_floor = f.opt<std::int64_t>("q_floor", 2);
  f.finish();
  return s;
}

void validate_params(const std::string& kind, const json& params) {
  if (kind == "stick_exact" || kind == "stick_bruteforce") parse_stick(params, false);
  else if (kind == "stick_truncated") parse_stick(params, true);
  else if (kind == "box_mc") parse_box(params);
  else if (kind == "analytic") parse_analytic(params);
  else if (kind == "diophantine") parse_dioph(params);
  else throw ConfigError("kind", "unknown experiment kind '" + kind + "'");
}

// ---- runners -------------------------------------------------------------

void write_csv_file(const std::string& path, const benford::MantissaDistribution& dist) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw ConfigError("params.csv_path", "cannot open '" + path + "' for writing");
  dist.write_csv(out);
}

double grid_sup_deviation(int cells, const std::function<double(const benford::IntervalQuery&)>& mass) {
  double sup = 0.0;
  for (int i = 0; i < cells; ++i) {
    const benford::IntervalQuery q(static_cast<double>(i) / cells, static_cast<double>(i + 1) / cells);
    sup = std::max(sup, std::fabs(mass(q) - (q.b - q.a)));
  }
  return sup;
}

json stick_header(const StickParams& s, const char* method) {
  return json{{"N", s.N}, {"m", s.p.size()}, {"p", s.p}, {"B", s.B}, {"a", s.a}, {"b", s.b}, {"method", method}};
}

json run_stick(const Experiment& e) {
  const bool truncated = e.kind == "stick_truncated";
  const StickParams s = parse_stick(e.params, truncated);
  const stick::ProportionVector p(s.p);
  const benford::Base B(s.B);
  const benford::IntervalQuery q(s.a, s.b);
  if (truncated) {
    const stick::TruncationParams t(s.epsilon, s.delta);
    const auto r = stick::truncated_estimate(s.N, p, B, q, t);
    json out = stick_header(s, "truncated");
    out.update(to_json(r));
    return out;
  }
  const bool brute = e.kind == "stick_bruteforce";
  json out = stick_header(s, brute ? "bruteforce" : "exact");
  const auto dist = brute ? stick::brute_force_mantissa(s.N, p, B, s.term_budget)
                          : stick::exact_mantissa_distribution(s.N, p, B, s.term_budget);
  out["value"] = brute ? benford::interval_mass(dist, q) : stick::exact_interval_probability(s.N, p, B, q);
  out["sup_deviation"] =
      grid_sup_deviation(s.grid_cells, [&](const benford::IntervalQuery& c) { return benford::interval_mass(dist, c); });
  out["ks"] = benford::ks_to_benford(dist);
  out["atoms"] = dist.size();
  out["grid_cells"] = s.grid_cells;
  write_csv_file(s.csv_path, dist);
  return out;
}

json run_box(const Experiment& e) {
  const BoxParams s = parse_box(e.params);
  const benford::Base B(s.B);
  const auto cut = make_cut(s.cut, B);
  box::Statistic stat;
  stat.d = s.d;
  stat.kind = s.statistic == "vol_d" ? box::Statistic::Kind::vol_d
              : s.statistic == "max_face" ? box::Statistic::Kind::max_face
                                          : box::Statistic::Kind::z_vector;
  const box::ProcessConfig cfg{s.m, s.N, cut, s.trials, e.seed, stat};
  json out{{"m", s.m}, {"N", s.N}, {"B", s.B}, {"trials", s.trials}, {"cut", cut.describe()},
           {"statistic", s.statistic}, {"d", s.d}, {"mu_P", cut.mu()}, {"sigma_P", cut.sigma()},
           {"support_bound", cut.support_bound()}};
  if (stat.kind == box::Statistic::Kind::z_vector) {
    auto y = box::monte_carlo_y_samples(cfg, s.d, s.draw_budget);
    std::sort(y.begin(), y.end());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double sup = 0.0;
    for (int i = 0; i <= 60; ++i) {
      const double t = -6.0 + 0.25 * i;
      const double emp = static_cast<double>(std::upper_bound(y.begin(), y.end(), t) - y.begin()) /
                         static_cast<double>(y.size());
      order::QuadratureSpec spec;
      spec.abs_tol = 1e-8;
      spec.rel_tol = 1e-8;
      spec.seed = e.seed;
      if (s.d > 3) {
        spec.abs_tol = 0.05;
        spec.mc_samples = 200'000;
      }
      sup = std::max(sup, std::fabs(emp - order::main_cdf(s.m, s.d, t, spec).value));
    }
    out["y_mean"] = mean;
    out["y_sup_distance"] = sup;
    return out;
  }
  const auto dist = box::monte_carlo_mantissa(cfg, s.draw_budget);
  out["ks"] = benford::ks_to_benford(dist);
  out["value"] = benford::interval_mass(dist, benford::IntervalQuery(s.a, s.b));
  out["a"] = s.a;
  out["b"] = s.b;
  out["atoms"] = dist.size();
  write_csv_file(s.csv_path, dist);
  return out;
}

json run_analytic(const Experiment& e) {
  AnalyticParams s = parse_analytic(e.params);
  s.spec.seed = e.seed;
  json out{{"m", s.m}, {"d", s.d}, {"quantity", s.quantity}};
  order::Evaluation ev;
  if (s.quantity == "main_cdf") {
    ev = order::main_cdf(s.m, s.d, s.y, s.spec);
    out["y"] = s.y;
  } else if (s.quantity == "main_density") {
    ev = order::main_density(s.m, s.d, s.y, s.spec);
    out["y"] = s.y;
  } else {
    ev = order::equidistribution_sum(s.m, s.d, s.N, s.C, benford::IntervalQuery(s.a, s.b), s.spec);
    out["interval"] = {s.a, s.b};
    out["N"] = s.N;
    out["C"] = s.C;
  }
  out.update(to_json(ev));
  return out;
}

json run_dioph(const Experiment& e) {
  const DiophParams s = parse_dioph(e.params);
  const auto verdict = dioph::rationality_verdict(s.x, s.q_max, s.tol);
  json out = to_json(verdict, s.x);
  const auto cf = dioph::continued_fraction(s.x, s.max_terms);
  out["quotients"] = cf.quotients;
  if (verdict.kind == dioph::RationalityVerdict::Kind::irrational_like && s.q_floor > 2) {
    try {
      out["kappa_estimate"] = dioph::irrationality_exponent_estimate(cf, s.q_floor);
    } catch (const DomainError&) {
      out.erase("kappa_estimate");
    }
  }
  return out;
}

void set_path(json& j, const std::string& dotted, const json& value, const std::string& full) {
  const auto dot = dotted.find('.');
  const std::string key = dotted.substr(0, dot);
  if (key.empty()) throw ConfigError(full, "empty path component");
  if (dot == std::string::npos) {
    j[key] = value;
    return;
  }
  if (!j.contains(key)) j[key] = json::object();
  if (!j[key].is_object()) throw ConfigError(full, "cannot descend into a non-object");
  set_path(j[key], dotted.substr(dot + 1), value, full);
}

}  // namespace

std::string library_version() { return FRAGLAB_VERSION; }

json Experiment::to_json() const {
  return json{{"schema_version", schema_version},
              {"kind", kind},
              {"params", params},
              {"output_path", output_path},
              {"seed", seed}};
}

Experiment parse_experiment(const json& j) {
  Fields f(j, "");
  Experiment e;
  e.schema_version = f.req<int>("schema_version");
  if (e.schema_version != kSchemaVersion)
    throw ConfigError("schema_version", "unsupported version " + std::to_string(e.schema_version));
  e.kind = f.req<std::string>("kind");
  e.params = f.raw("params");
  e.output_path = f.opt<std::string>("output_path", "");
  e.seed = f.opt<std::uint64_t>("seed", 0);
  f.finish();
  validate_params(e.kind, e.params);
  return e;
}

Experiment load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + err.what());
  }
  return parse_experiment(j);
}

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "override must look like path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  set_path(config, path, value, path);
}

json run_experiment(const Experiment& e) {
  const auto t0 = std::chrono::steady_clock::now();
  json result;
  if (e.kind == "stick_exact" || e.kind == "stick_bruteforce" || e.kind == "stick_truncated") result = run_stick(e);
  else if (e.kind == "box_mc") result = run_box(e);
  else if (e.kind == "analytic") result = run_analytic(e);
  else if (e.kind == "diophantine") result = run_dioph(e);
  else throw ConfigError("kind", "unknown experiment kind '" + e.kind + "'");
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json report{{"experiment", e.to_json()},
              {"result", result},
              {"library_version", library_version()},
              {"wall_time_s", wall}};
  if (!e.output_path.empty()) {
    std::ofstream out(e.output_path);
    if (!out) throw ConfigError("output_path", "cannot open '" + e.output_path + "' for writing");
    out << report.dump(2) << '\n';
  }
  return report;
}

void validate_report(const json& report) {
  Fields f(report, "report");
  parse_experiment(f.raw("experiment"));
  if (!f.raw("result").is_object()) throw ConfigError("report.result", "expected an object");
  f.req<std::string>("library_version");
  f.req<double>("wall_time_s");
  f.finish();
}

std::vector<json> sweep(const Experiment& templ, const std::string& axis, const std::vector<json>& values) {
  std::vector<json> reports;
  if (!templ.params.contains(axis) || !templ.params.at(axis).is_number())
    throw ConfigError("params." + axis, "sweep axis must name a numeric field");
  for (const auto& v : values) {
    if (!v.is_number()) throw ConfigError("params." + axis, "sweep values must be numeric");
    json j = templ.to_json();
    j["params"][axis] = v;
    // Per-run output files would overwrite each other.
    j["output_path"] = "";
    reports.push_back(run_experiment(parse_experiment(j)));
  }
  return reports;
}

void write_sweep_csv(std::ostream& out, const std::string& axis, const std::vector<json>& reports) {
  std::vector<std::string> cols;
  for (const auto& r : reports)
    for (const auto& [k, v] : r.at("result").items())
      if (v.is_number() && k != axis && std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  out << axis;
  for (const auto& c : cols) out << ',' << c;
  out << '\n';
  auto cell = [](const json& v) {
    if (v.is_number_integer()) return v.dump();
    return format17(v.get<double>());
  };
  for (const auto& r : reports) {
    out << cell(r.at("experiment").at("params").at(axis));
    for (const auto& c : cols) {
      out << ',';
      const auto& res = r.at("result");
      if (res.contains(c) && res.at(c).is_number()) out << cell(res.at(c));
    }
    out << '\n';
  }
}

}  // namespace fraglab::cli
