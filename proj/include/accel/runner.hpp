#pragma once

#include "accel/certify.hpp"
#include "accel/oracles.hpp"
#include "accel/trace.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace accel {

// Bad or unknown configuration keys; maps to exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

struct ProblemSpec {
  std::string kind = "quad";  // quad | huber | heb | lasso | simplex
  int d = 10;
  double mu = 0.0;
  double L = 1.0;
  double tau = 0.1;     // huber threshold
  double r = 4.0;       // heb power
  double radius = 1.0;  // heb smoothness ball
  double weight = 0.1;  // l1 weight for lasso
  bool rotate = true;
  std::string x0 = "random";  // random | zero | optimum | uniform
  double x0_scale = 1.0;
};

struct MethodSpec {
  std::string name;
  int N = 100;
  int form = 1;
  nlohmann::json params = nlohmann::json::object();  // validated method-specific knobs
};

struct ExperimentConfig {
  ProblemSpec problem;
  MethodSpec method;
  bool verify_potential = true;
  bool verify_interpolation = true;
  std::uint64_t seed = 1;
  std::string out;
};

ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
nlohmann::json to_json(const ProblemSpec& p);
// "quad:d=20,mu=0.1" -> {"kind": "quad", "d": 20, "mu": 0.1}
nlohmann::json parse_problem_string(const std::string& s);

struct BuiltProblem {
  CompositeProblem p;
  Vec x0;
};
BuiltProblem build_problem(const ProblemSpec& spec, std::uint64_t seed);

// Runs the method; fills Record::potential when a certificate exists.
Trace run_method(const MethodSpec& m, const BuiltProblem& b);

struct RunResult {
  Trace trace;
  bool diverged = false;
  std::string message;
};
// Divergence (non-finite iterates, runaway L, failed inner solves) comes back
// with the partial trace; config problems throw ConfigError or InvalidArgument.
RunResult run_experiment(const ExperimentConfig& c);

std::string trace_csv(const Trace& t, bool with_wall = true);
nlohmann::json summary_json(const Trace& t, const BuiltProblem& b);
std::string sidecar_path(const std::string& csv_path);

// gap-vs-gradient-calls table, one column per trace
std::string compare_table(const std::vector<Trace>& traces, const std::vector<std::string>& labels);

struct CertifyReport {
  bool registered = false;
  MarginReport potential;
  MarginReport interpolation;
  bool interpolation_checked = false;
  std::size_t triplets = 0;
  bool passed() const { return registered && potential.passed() && interpolation.passed(); }
};
CertifyReport certify_trace(const Trace& t, const BuiltProblem& b, bool potential = true, bool interpolation = true);
nlohmann::json to_json(const CertifyReport& r);

}  // namespace accel
