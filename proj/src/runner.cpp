#include "accel/runner.hpp"

#include "accel/composite.hpp"
#include "accel/extrapolation.hpp"
#include "accel/momentum.hpp"
#include "accel/poly.hpp"
#include "accel/prox_outer.hpp"
#include "accel/restart.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace accel {

using nlohmann::json;

namespace {

enum class Kind { number, integer, string, boolean, form };

const std::map<std::string, Kind>& param_kinds() {
  static const std::map<std::string, Kind> k = {
      {"gamma", Kind::number},    {"mu", Kind::number},         {"lambda", Kind::number},
      {"delta", Kind::number},    {"alpha", Kind::number},      {"beta", Kind::number},
      {"L0", Kind::number},       {"growth", Kind::number},     {"h", Kind::number},
      {"overshoot", Kind::number}, {"f0_gap", Kind::number},    {"heb_mu", Kind::number},
      {"L", Kind::number},        {"budget", Kind::integer},    {"memory", Kind::integer},
      {"k", Kind::integer},       {"epochs", Kind::integer},    {"max_doublings", Kind::integer},
      {"mode", Kind::string},     {"inner", Kind::string},      {"safeguard", Kind::string},
      {"cref", Kind::string},     {"dgf", Kind::string},        {"solver", Kind::string},
      {"strongly_convex", Kind::boolean}, {"form", Kind::form}};
  return k;
}

const std::map<std::string, std::set<std::string>>& method_keys() {
  static const std::map<std::string, std::set<std::string>> m = {
      {"gd", {"gamma"}},
      {"chebyshev", {}},
      {"heavy_ball", {}},
      {"cg", {}},
      {"ogm", {"form"}},
      {"fgm", {"form", "mu"}},
      {"constant_momentum", {"form"}},
      {"item", {}},
      {"tmm", {}},
      {"bregman_agm", {"dgf"}},
      {"fista", {"mu", "L0", "alpha", "beta", "mode", "max_doublings"}},
      {"prox_agm", {"mu", "L0", "alpha", "beta", "mode", "max_doublings"}},
      {"monotone", {"inner", "mu", "L0", "alpha", "beta", "mode", "dgf"}},
      {"online_rna", {"h", "lambda", "memory", "safeguard", "cref"}},
      {"prox_rna", {"gamma", "lambda", "memory", "cref"}},
      {"ppa", {"lambda", "growth"}},
      {"accel_ppa", {"lambda", "growth", "delta", "mu", "solver", "overshoot"}},
      {"catalyst", {"inner", "lambda", "budget", "strongly_convex"}},
      {"restart_fixed", {"inner", "k", "epochs"}},
      {"restart_scheduled", {"heb_mu", "f0_gap", "L"}},
      {"restart_grid", {"L"}},
  };
  return m;
}

[[noreturn]] void bad(const std::string& msg) { throw ConfigError("config: " + msg); }

bool is_int(const json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

int parse_form(const json& v) {
  if (is_int(v)) {
    int f = v.get<int>();
    if (f >= 1 && f <= 3) return f;
  } else if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "I" || s == "1") return 1;
    if (s == "II" || s == "2") return 2;
    if (s == "III" || s == "3") return 3;
  }
  bad("form must be 1..3 or I/II/III");
}

void check_kind(const std::string& key, const json& v, Kind k) {
  switch (k) {
    case Kind::number:
      if (!v.is_number()) bad("'" + key + "' must be a number");
      break;
    case Kind::integer:
      if (!is_int(v)) bad("'" + key + "' must be an integer");
      break;
    case Kind::string:
      if (!v.is_string()) bad("'" + key + "' must be a string");
      break;
    case Kind::boolean:
      if (!v.is_boolean()) bad("'" + key + "' must be true or false");
      break;
    case Kind::form:
      parse_form(v);
      break;
  }
}

double num(const json& j, const char* key, double fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->get<double>();
}
int integer(const json& j, const char* key, int fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->get<int>();
}
std::string str(const json& j, const char* key, const std::string& fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->get<std::string>();
}
bool flag(const json& j, const char* key, bool fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->get<bool>();
}

ProblemSpec parse_problem(const json& j) {
  if (!j.is_object()) bad("'problem' must be an object");
  static const std::map<std::string, Kind> keys = {
      {"kind", Kind::string}, {"d", Kind::integer},     {"mu", Kind::number},       {"L", Kind::number},
      {"tau", Kind::number},  {"r", Kind::number},      {"radius", Kind::number},   {"weight", Kind::number},
      {"rotate", Kind::boolean}, {"x0", Kind::string}, {"x0_scale", Kind::number}};
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto k = keys.find(it.key());
    if (k == keys.end()) bad("unknown problem key '" + it.key() + "'");
    check_kind(it.key(), it.value(), k->second);
  }
  ProblemSpec p;
  if (!j.contains("kind")) bad("problem needs 'kind'");
  p.kind = j["kind"].get<std::string>();
  static const std::set<std::string> kinds = {"quad", "huber", "heb", "lasso", "simplex"};
  if (!kinds.count(p.kind)) bad("unknown problem kind '" + p.kind + "'");
  p.d = integer(j, "d", p.d);
  p.mu = num(j, "mu", p.mu);
  p.L = num(j, "L", p.L);
  p.tau = num(j, "tau", p.tau);
  p.r = num(j, "r", p.r);
  p.radius = num(j, "radius", p.radius);
  p.weight = num(j, "weight", p.weight);
  p.rotate = flag(j, "rotate", p.rotate);
  p.x0 = str(j, "x0", p.kind == "simplex" ? "uniform" : p.x0);
  p.x0_scale = num(j, "x0_scale", p.x0_scale);
  if (p.d < 1 || p.d > 100000) bad("problem dimension must be in [1, 1e5]");
  if (!(p.L > 0) || !std::isfinite(p.L)) bad("problem L must be positive");
  if (!(p.mu >= 0) || !(p.mu <= p.L)) bad("problem mu must lie in [0, L]");
  static const std::set<std::string> starts = {"random", "zero", "optimum", "uniform"};
  if (!starts.count(p.x0)) bad("x0 must be random, zero, optimum or uniform");
  return p;
}

MethodSpec parse_method(const json& j) {
  if (!j.is_object()) bad("'method' must be an object");
  if (!j.contains("name") || !j["name"].is_string()) bad("method needs a string 'name'");
  MethodSpec m;
  m.name = j["name"].get<std::string>();
  auto allowed = method_keys().find(m.name);
  if (allowed == method_keys().end()) bad("unknown method '" + m.name + "'");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "name") continue;
    if (key == "N") {
      if (!is_int(it.value()) || it.value().get<long long>() < 0 || it.value().get<long long>() > 10000000)
        bad("'N' must be a nonnegative integer");
      m.N = it.value().get<int>();
      continue;
    }
    auto k = param_kinds().find(key);
    if (k == param_kinds().end()) bad("unknown method key '" + key + "'");
    if (!allowed->second.count(key)) bad("method '" + m.name + "' does not take '" + key + "'");
    check_kind(key, it.value(), k->second);
    if (key == "form") {
      m.form = parse_form(it.value());
      continue;
    }
    m.params[key] = it.value();
  }
  return m;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) bad("top level must be an object");
  ExperimentConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "problem") {
      c.problem = parse_problem(it.value());
    } else if (key == "method") {
      c.method = parse_method(it.value());
    } else if (key == "seed") {
      if (!is_int(it.value()) || it.value().get<long long>() < 0) bad("'seed' must be a nonnegative integer");
      c.seed = it.value().get<std::uint64_t>();
    } else if (key == "out") {
      if (!it.value().is_string()) bad("'out' must be a string");
      c.out = it.value().get<std::string>();
    } else if (key == "verify") {
      const json& v = it.value();
      if (!v.is_object()) bad("'verify' must be an object");
      for (auto vt = v.begin(); vt != v.end(); ++vt) {
        if (!vt.value().is_boolean()) bad("verify flags must be booleans");
        if (vt.key() == "potential") c.verify_potential = vt.value().get<bool>();
        else if (vt.key() == "interpolation") c.verify_interpolation = vt.value().get<bool>();
        else bad("unknown verify key '" + vt.key() + "'");
      }
    } else {
      bad("unknown key '" + key + "'");
    }
  }
  if (!j.contains("problem")) bad("missing 'problem'");
  if (!j.contains("method")) bad("missing 'method'");
  return c;
}

json to_json(const ProblemSpec& p) {
  return json{{"kind", p.kind},     {"d", p.d},         {"mu", p.mu},         {"L", p.L},
              {"tau", p.tau},       {"r", p.r},         {"radius", p.radius}, {"weight", p.weight},
              {"rotate", p.rotate}, {"x0", p.x0},       {"x0_scale", p.x0_scale}};
}

json to_json(const ExperimentConfig& c) {
  json m = c.method.params;
  m["name"] = c.method.name;
  m["N"] = c.method.N;
  if (method_keys().at(c.method.name).count("form")) m["form"] = c.method.form;
  json j{{"problem", to_json(c.problem)},
         {"method", m},
         {"seed", c.seed},
         {"verify", {{"potential", c.verify_potential}, {"interpolation", c.verify_interpolation}}}};
  if (!c.out.empty()) j["out"] = c.out;
  return j;
}

json parse_problem_string(const std::string& s) {
  json j = json::object();
  const auto colon = s.find(':');
  j["kind"] = s.substr(0, colon);
  if (colon == std::string::npos) return j;
  std::stringstream rest(s.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) bad("problem option '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    if (val == "true" || val == "false") {
      j[key] = val == "true";
      continue;
    }
    try {
      std::size_t used = 0;
      long long iv = std::stoll(val, &used);
      if (used == val.size()) {
        j[key] = iv;
        continue;
      }
      double dv = std::stod(val, &used);
      if (used == val.size()) {
        j[key] = dv;
        continue;
      }
    } catch (const std::exception&) {
    }
    j[key] = val;
  }
  return j;
}

// ---------------------------------------------------------------- problems

BuiltProblem build_problem(const ProblemSpec& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BuiltProblem b;
  auto quad = [&]() {
    if (!(s.mu < s.L)) bad("quadratic problems need mu < L");
    // a convex (mu = 0) instance still needs a positive spectrum; the class stays F_{mu,L}
    Vec eigs = random_eigs(s.d, std::max(s.mu, 1e-3 * s.L), s.L, rng);
    Vec xs = random_vector(s.d, rng);
    std::optional<std::uint64_t> rot;
    if (s.rotate) rot = seed + 1;
    Oracle o = make_quadratic(eigs, xs, rot);
    o.params = {s.mu, s.L};
    return o;
  };
  if (s.kind == "quad") {
    b.p = smooth_problem(quad());
  } else if (s.kind == "huber") {
    b.p = smooth_problem(make_huber(s.tau, s.L, s.d, s.mu));
  } else if (s.kind == "heb") {
    b.p = smooth_problem(make_heb_power(s.r, s.d, s.radius));
  } else if (s.kind == "lasso") {
    b.p = make_composite(quad(), make_l1(s.d, s.weight));
    b.p.optimum = reference_optimum(b.p);
  } else if (s.kind == "simplex") {
    b.p = make_composite(quad(), make_simplex_indicator(s.d));
    b.p.optimum = reference_optimum(b.p);
  } else {
    bad("unknown problem kind '" + s.kind + "'");
  }
  const int d = s.d;
  if (s.x0 == "zero") {
    b.x0 = Vec::Zero(d);
  } else if (s.x0 == "optimum") {
    if (!b.p.optimum) bad("x0 = optimum needs a known optimum");
    b.x0 = b.p.optimum->x;
  } else if (s.x0 == "uniform") {
    b.x0 = Vec::Constant(d, 1.0 / d);
  } else if (s.kind == "simplex") {
    std::uniform_real_distribution<double> u(0.5, 1.5);
    b.x0 = Vec(d);
    for (int i = 0; i < d; ++i) b.x0[i] = u(rng);
    b.x0 /= b.x0.sum();
  } else if (s.kind == "heb") {
    Vec v = random_vector(d, rng);
    b.x0 = v * (0.5 * s.radius * s.x0_scale / v.norm());
  } else {
    b.x0 = random_vector(d, rng, s.x0_scale);
  }
  if (!b.p.feasible(b.x0)) bad("x0 lies outside the domain of h");
  return b;
}

// ---------------------------------------------------------------- methods

namespace {

const Oracle& smooth_only(const BuiltProblem& b, const std::string& name) {
  if (b.p.h.kind != "zero") bad(name + " needs a smooth problem (quad, huber or heb)");
  return b.p.f;
}

std::vector<double> steps_from(const json& p, double L, int N) {
  const double lam = num(p, "lambda", 1.0 / L);
  const double growth = num(p, "growth", 1.0);
  if (growth == 1.0) return {lam};
  return geometric_steps(lam, growth, std::max(N, 1));
}

BacktrackOptions backtrack_from(const json& p, double mu_default) {
  BacktrackOptions o;
  o.mu = num(p, "mu", mu_default);
  o.L0 = num(p, "L0", kNaN);
  o.alpha = num(p, "alpha", o.alpha);
  o.beta = num(p, "beta", kNaN);
  o.mode = parse_backtrack_mode(str(p, "mode", "monotone"));
  o.max_doublings = integer(p, "max_doublings", o.max_doublings);
  return o;
}

Trace dispatch(const MethodSpec& m, const BuiltProblem& b) {
  const auto& p = m.params;
  const Oracle& f = b.p.f;
  const double L = f.params.L, mu = f.params.mu;
  const int N = m.N;
  const std::string& n = m.name;
  if (n == "gd") return gradient_descent(smooth_only(b, n), num(p, "gamma", 1.0 / L), b.x0, N);
  if (n == "chebyshev") return chebyshev(f.params, smooth_only(b, n), b.x0, N);
  if (n == "heavy_ball") return heavy_ball(f.params, smooth_only(b, n), b.x0, N);
  if (n == "cg") return conjugate_gradient_quadratic(smooth_only(b, n), b.x0, N);
  if (n == "ogm") return ogm(smooth_only(b, n), b.x0, N, m.form);
  if (n == "fgm") return fgm(smooth_only(b, n), b.x0, N, m.form, num(p, "mu", mu));
  if (n == "constant_momentum") return constant_momentum(smooth_only(b, n), b.x0, N, m.form);
  if (n == "item") return item(smooth_only(b, n), b.x0, N);
  if (n == "tmm") return tmm(smooth_only(b, n), b.x0, N);
  if (n == "bregman_agm")
    return bregman_agm(b.p, parse_dgf(str(p, "dgf", b.p.h.kind == "simplex" ? "entropy" : "euclidean")), b.x0, N);
  if (n == "fista") return fista(b.p, b.x0, N, backtrack_from(p, mu));
  if (n == "prox_agm") return prox_agm(b.p, b.x0, N, backtrack_from(p, mu));
  if (n == "monotone") {
    MonotoneOptions o;
    o.mu = num(p, "mu", 0.0);
    o.backtrack = backtrack_from(p, 0.0);
    o.dgf = parse_dgf(str(p, "dgf", b.p.h.kind == "simplex" ? "entropy" : "euclidean"));
    return monotone_wrap(str(p, "inner", "fgm"), b.p, b.x0, N, o);
  }
  if (n == "online_rna") {
    OnlineOptions o;
    o.h = num(p, "h", kNaN);
    o.lambda = num(p, "lambda", o.lambda);
    o.memory = integer(p, "memory", o.memory);
    o.safeguard = parse_safeguard(str(p, "safeguard", "none"));
    o.cref = parse_cref(str(p, "cref", "uniform"));
    return online_rna(smooth_only(b, n), b.x0, N, o);
  }
  if (n == "prox_rna") {
    ProxRnaOptions o;
    o.gamma = num(p, "gamma", kNaN);
    o.lambda = num(p, "lambda", o.lambda);
    o.memory = integer(p, "memory", o.memory);
    o.cref = parse_cref(str(p, "cref", "uniform"));
    return prox_rna(b.p, b.x0, N, o);
  }
  if (n == "ppa") return ppa(smooth_only(b, n), steps_from(p, L, N), b.x0, N);
  if (n == "accel_ppa") {
    const Oracle& g = smooth_only(b, n);
    AccelPpaOptions o;
    o.mu = num(p, "mu", 0.0);
    o.delta = num(p, "delta", 1.0);
    const std::string solver = str(p, "solver", "exact");
    SubproblemSolver s;
    if (solver == "exact") s = exact_prox_solver(g);
    else if (solver == "overshoot") s = overshoot_solver(g, num(p, "overshoot", 1.5));
    else bad("solver must be exact or overshoot");
    o.allow_out_of_range = solver == "overshoot";
    return accel_inexact_ppa(g, s, steps_from(p, L, N), b.x0, N, o);
  }
  if (n == "catalyst") {
    CatalystOptions o;
    o.inner = parse_inner(str(p, "inner", "gd"));
    o.lambda = num(p, "lambda", kNaN);
    o.budget = integer(p, "budget", N);
    o.strongly_convex = flag(p, "strongly_convex", false);
    return catalyst(smooth_only(b, n), b.x0, o);
  }
  if (n == "restart_fixed") {
    const Oracle& g = smooth_only(b, n);
    const int k = integer(p, "k", mu > 0 ? fixed_restart_period(L, mu) : std::max(N, 1));
    const int epochs = integer(p, "epochs", std::max(1, N / std::max(k, 1)));
    return fixed_restart(g, parse_restart_inner(str(p, "inner", "fgm")), k, b.x0, epochs);
  }
  if (n == "restart_scheduled") {
    const Oracle& g = smooth_only(b, n);
    HebParams h;
    h.r = g.heb ? g.heb->r : 2.0;
    h.mu = num(p, "heb_mu", g.heb ? g.heb->mu : mu);
    const double gap0 = g.optimum ? g.value(b.x0) - g.optimum->f : kNaN;
    return scheduled_restart(g, h, num(p, "L", L), b.x0, num(p, "f0_gap", gap0), N);
  }
  if (n == "restart_grid") return grid_restart(smooth_only(b, n), num(p, "L", L), b.x0, N).best;
  bad("unknown method '" + n + "'");
}

void fill_potentials(Trace& t, const BuiltProblem& b) {
  if (!has_certificate(t.method) || !b.p.optimum) return;
  try {
    auto phi = potential_sequence(t, b.p);
    for (std::size_t k = 0; k < t.records.size() && k < phi.size(); ++k) t.records[k].potential = phi[k];
  } catch (const InvalidArgument&) {
  }
}

}  // namespace

Trace run_method(const MethodSpec& m, const BuiltProblem& b) {
  Trace t = dispatch(m, b);
  fill_potentials(t, b);
  return t;
}

RunResult run_experiment(const ExperimentConfig& c) {
  BuiltProblem b = build_problem(c.problem, c.seed);
  RunResult r;
  try {
    r.trace = run_method(c.method, b);
  } catch (Diverged& e) {
    r.trace = std::move(e.partial);
    r.diverged = true;
    r.message = e.what();
  } catch (InnerSolveError& e) {
    r.trace = std::move(e.partial);
    r.diverged = true;
    r.message = e.what();
  } catch (RunawayL& e) {
    r.trace.method = c.method.name;
    r.diverged = true;
    r.message = e.what();
  } catch (ContractViolation& e) {
    r.trace.method = c.method.name;
    r.diverged = true;
    r.message = e.what();
  }
  return r;
}

// ---------------------------------------------------------------- output

namespace {

void put(std::ostream& os, double v) {
  if (std::isfinite(v)) os << v;
  else if (std::isnan(v)) os << "";
  else os << (v > 0 ? "inf" : "-inf");
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string trace_csv(const Trace& t, bool with_wall) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "k,f_gap,grad_norm,dist_opt,potential,grad_calls,prox_calls,inner_iters,wall_ns\n";
  for (const auto& r : t.records) {
    os << r.k << ',';
    put(os, r.f_gap);
    os << ',';
    put(os, r.grad_norm);
    os << ',';
    put(os, r.dist_opt);
    os << ',';
    put(os, r.potential);
    os << ',' << r.grad_calls << ',' << r.prox_calls << ',' << r.inner_iters << ',' << (with_wall ? r.wall_ns : 0)
       << '\n';
  }
  return os.str();
}

std::string sidecar_path(const std::string& csv_path) {
  const auto dot = csv_path.rfind('.');
  const auto slash = csv_path.find_last_of("/\\");
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return csv_path.substr(0, dot) + ".json";
  return csv_path + ".json";
}

json summary_json(const Trace& t, const BuiltProblem& b) {
  json s;
  s["method"] = t.method;
  s["rows"] = t.records.size();
  json meta = json::object();
  for (const auto& [k, v] : t.num) meta[k] = finite_or_null(v);
  for (const auto& [k, v] : t.tag) meta[k] = v;
  s["meta"] = meta;
  if (t.records.empty()) return s;
  const Record& last = t.back();
  s["final_f"] = finite_or_null(last.f);
  s["final_gap"] = finite_or_null(last.f_gap);
  s["final_dist"] = finite_or_null(last.dist_opt);
  s["grad_calls"] = t.num.count("grad_calls") ? static_cast<std::int64_t>(t.meta("grad_calls")) : last.grad_calls;
  s["prox_calls"] = last.prox_calls;
  s["inner_iters"] = last.inner_iters;
  const double bound = t.meta("bound");
  s["bound"] = finite_or_null(bound);
  if (std::isnan(bound)) {
    s["bound_satisfied"] = nullptr;
    return s;
  }
  const std::string on = t.text("bound_on", "f_gap");
  double measured = last.f_gap;
  if (on == "dist") measured = last.dist_opt;
  else if (on == "z_dist_sq" && b.p.optimum && last.z.size()) measured = (last.z - b.p.optimum->x).squaredNorm();
  s["bound_on"] = on;
  s["measured"] = finite_or_null(measured);
  s["bound_satisfied"] = std::isfinite(measured) && tolerance().ok(bound - measured, std::max(bound, measured));
  return s;
}

std::string compare_table(const std::vector<Trace>& traces, const std::vector<std::string>& labels) {
  require(traces.size() == labels.size(), "compare_table: one label per trace");
  std::set<std::int64_t> calls;
  for (const auto& t : traces)
    for (const auto& r : t.records) calls.insert(r.grad_calls);
  std::ostringstream os;
  os << std::setprecision(17) << "grad_calls";
  for (const auto& l : labels) os << ',' << l;
  os << '\n';
  std::vector<std::size_t> pos(traces.size(), 0);
  for (std::int64_t c : calls) {
    os << c;
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const auto& rs = traces[i].records;
      while (pos[i] + 1 < rs.size() && rs[pos[i] + 1].grad_calls <= c) ++pos[i];
      os << ',';
      if (!rs.empty() && rs[pos[i]].grad_calls <= c) put(os, rs[pos[i]].f_gap);
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------- certify

CertifyReport certify_trace(const Trace& t, const BuiltProblem& b, bool potential, bool interpolation) {
  CertifyReport rep;
  rep.registered = has_certificate(t.method);
  if (!rep.registered) return rep;
  if (potential) rep.potential = check_potential(t, b.p);
  const Oracle& f = b.p.f;
  // heb oracles are only smooth on a ball, so the global class test does not apply
  if (interpolation && f.params.valid() && f.full_domain() && f.kind != "heb_power") {
    auto s = harvest_triplets(t, f);
    rep.triplets = s.size();
    rep.interpolation = check_interpolation(s, f.params.mu, f.params.L);
    rep.interpolation_checked = true;
  }
  return rep;
}

json to_json(const CertifyReport& r) {
  json j;
  j["registered"] = r.registered;
  j["passed"] = r.passed();
  auto section = [](const MarginReport& m) {
    json s;
    s["margins"] = m.margins.size();
    s["min_slack"] = m.margins.empty() ? json(nullptr) : finite_or_null(m.min_slack);
    s["failures"] = m.failures;
    json bad_steps = json::array();
    for (const auto& x : m.failing()) {
      if (bad_steps.size() >= 50) break;
      json e{{"i", x.i}, {"slack", x.slack}};
      if (x.j >= 0) e["j"] = x.j;
      if (!x.label.empty()) e["label"] = x.label;
      bad_steps.push_back(e);
    }
    s["failing"] = bad_steps;
    return s;
  };
  j["potential"] = section(r.potential);
  j["interpolation"] = section(r.interpolation);
  j["interpolation"]["checked"] = r.interpolation_checked;
  j["interpolation"]["triplets"] = r.triplets;
  return j;
}

}  // namespace accel
