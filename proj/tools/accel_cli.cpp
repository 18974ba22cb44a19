#include "accel/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using accel::ExperimentConfig;
using nlohmann::json;

namespace {

enum Exit { ok = 0, certify_failed = 1, schema = 2, diverged = 3, no_certificate = 4 };

struct Flags {
  std::vector<std::string> configs;
  std::string method, problem, out, mode, form;
  std::optional<int> N;
  std::optional<std::uint64_t> seed;
  std::optional<double> mu, L, lambda, delta;
  std::vector<std::string> params;
};

void add_flags(CLI::App* app, Flags& f, bool many_configs) {
  if (many_configs)
    app->add_option("--config", f.configs, "JSON experiment config (repeatable)");
  else
    app->add_option("--config", f.configs, "JSON experiment config")->expected(0, 1);
  app->add_option("--method", f.method, many_configs ? "method name, or a comma-separated list" : "method name");
  app->add_option("--problem", f.problem, "problem, e.g. quad:d=20,mu=0.01,L=1");
  app->add_option("--N", f.N, "iteration budget");
  app->add_option("--seed", f.seed, "seed for problem generation");
  app->add_option("--out", f.out, "output path");
  app->add_option("--mu", f.mu, "problem strong convexity");
  app->add_option("--L", f.L, "problem smoothness");
  app->add_option("--lambda", f.lambda, "step / regularization parameter");
  app->add_option("--delta", f.delta, "relative inexactness");
  app->add_option("--form", f.form, "algorithm form (I, II, III)");
  app->add_option("--mode", f.mode, "backtracking mode");
  app->add_option("--param", f.params, "extra method parameter key=value (repeatable)");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw accel::ConfigError("config: cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw accel::ConfigError(std::string("config: ") + path + " is not valid JSON: " + e.what());
  }
}

json scalar(const std::string& text) {
  json p = accel::parse_problem_string("x:v=" + text);
  return p["v"];
}

// base JSON (from a file or empty) with command-line overrides applied
json merged(const Flags& f, const std::optional<std::string>& config, const std::string& method) {
  json j = config ? read_json_file(*config) : json::object();
  if (!j.is_object()) throw accel::ConfigError("config: top level must be an object");
  if (!j.contains("problem")) j["problem"] = json{{"kind", "quad"}};
  if (!j.contains("method")) j["method"] = json::object();
  json& m = j["method"];
  json& p = j["problem"];
  if (!m.is_object() || !p.is_object()) throw accel::ConfigError("config: problem and method must be objects");
  if (!f.problem.empty()) p = accel::parse_problem_string(f.problem);
  if (f.mu) p["mu"] = *f.mu;
  if (f.L) p["L"] = *f.L;
  if (!method.empty()) m["name"] = method;
  if (f.N) m["N"] = *f.N;
  if (f.lambda) m["lambda"] = *f.lambda;
  if (f.delta) m["delta"] = *f.delta;
  if (!f.form.empty()) m["form"] = f.form;
  if (!f.mode.empty()) m["mode"] = f.mode;
  for (const auto& kv : f.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw accel::ConfigError("config: --param expects key=value");
    m[kv.substr(0, eq)] = scalar(kv.substr(eq + 1));
  }
  if (f.seed) j["seed"] = *f.seed;
  if (!f.out.empty()) j["out"] = f.out;
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int cmd_run(const Flags& f) {
  ExperimentConfig c = accel::parse_config(
      merged(f, f.configs.empty() ? std::nullopt : std::optional<std::string>(f.configs[0]), f.method));
  if (c.out.empty()) c.out = "trace.csv";
  accel::BuiltProblem b = accel::build_problem(c.problem, c.seed);
  accel::RunResult r = accel::run_experiment(c);
  json side{{"config", accel::to_json(c)}, {"summary", accel::summary_json(r.trace, b)}};
  side["summary"]["diverged"] = r.diverged;
  if (r.diverged) side["summary"]["message"] = r.message;
  write_file(c.out, accel::trace_csv(r.trace));
  write_file(accel::sidecar_path(c.out), side.dump(2) + "\n");
  if (r.diverged) {
    std::cerr << "diverged: " << r.message << "\n";
    return diverged;
  }
  std::cout << side["summary"].dump() << "\n";
  return ok;
}

int cmd_compare(const Flags& f) {
  std::vector<ExperimentConfig> cs;
  if (!f.configs.empty()) {
    for (const auto& path : f.configs) cs.push_back(accel::parse_config(merged(f, path, f.method)));
  } else {
    std::stringstream ss(f.method);
    std::string name;
    while (std::getline(ss, name, ',')) cs.push_back(accel::parse_config(merged(f, std::nullopt, name)));
  }
  if (cs.size() < 2) throw accel::ConfigError("compare: needs at least two configs or methods");
  const json ref = accel::to_json(cs[0].problem);
  for (const auto& c : cs)
    if (accel::to_json(c.problem) != ref || c.seed != cs[0].seed)
      throw accel::ConfigError("compare: configs describe different problems");

  const int n = static_cast<int>(cs.size());
  std::vector<accel::RunResult> res(n);
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      res[i] = accel::run_experiment(cs[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (int i = 0; i < n; ++i)
    if (!errors[i].empty()) throw accel::ConfigError("compare: " + cs[i].method.name + ": " + errors[i]);

  std::vector<accel::Trace> traces;
  std::vector<std::string> labels;
  std::map<std::string, int> seen;
  bool any_diverged = false;
  for (int i = 0; i < n; ++i) {
    std::string label = cs[i].method.name;
    if (int k = seen[label]++; k > 0) label += "#" + std::to_string(k + 1);
    labels.push_back(label);
    traces.push_back(res[i].trace);
    any_diverged = any_diverged || res[i].diverged;
  }
  const std::string table = accel::compare_table(traces, labels);
  if (f.out.empty()) std::cout << table;
  else write_file(f.out, table);
  return any_diverged ? diverged : ok;
}

int cmd_certify(const Flags& f) {
  ExperimentConfig c = accel::parse_config(
      merged(f, f.configs.empty() ? std::nullopt : std::optional<std::string>(f.configs[0]), f.method));
  if (!accel::has_certificate(c.method.name)) {
    std::cerr << "certify: no certificate registered for " << c.method.name << "\n";
    return no_certificate;
  }
  accel::BuiltProblem b = accel::build_problem(c.problem, c.seed);
  accel::RunResult r = accel::run_experiment(c);
  if (r.diverged) {
    std::cerr << "diverged: " << r.message << "\n";
    return diverged;
  }
  accel::CertifyReport rep = accel::certify_trace(r.trace, b, c.verify_potential, c.verify_interpolation);
  json j = accel::to_json(rep);
  j["method"] = c.method.name;
  std::cout << j.dump(2) << "\n";
  if (!c.out.empty()) {
    accel::MarginReport all = rep.potential;
    all.merge(rep.interpolation);
    write_file(c.out, accel::margins_csv(all));
  }
  if (!rep.passed()) {
    std::cerr << "certify: failed";
    for (const auto& m : rep.potential.failing()) std::cerr << " step " << m.i;
    for (const auto& m : rep.interpolation.failing()) std::cerr << " pair " << m.i << "," << m.j;
    std::cerr << "\n";
    return certify_failed;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"accelerated first-order methods: run, compare and certify"};
  app.require_subcommand(1);
  Flags run_f, cmp_f, cert_f;
  auto* run = app.add_subcommand("run", "run one method and write a CSV trace plus JSON summary");
  add_flags(run, run_f, false);
  auto* cmp = app.add_subcommand("compare", "gap versus gradient calls for several methods on one problem");
  add_flags(cmp, cmp_f, true);
  auto* cert = app.add_subcommand("certify", "check potentials and interpolation along a run");
  add_flags(cert, cert_f, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : schema;
  }
  try {
    if (*run) return cmd_run(run_f);
    if (*cmp) return cmd_compare(cmp_f);
    if (*cert) return cmd_certify(cert_f);
  } catch (const accel::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return schema;
  } catch (const accel::InvalidArgument& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return schema;
  } catch (const accel::Unsupported& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return schema;
  } catch (const json::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return schema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return diverged;
  }
  return schema;
}
