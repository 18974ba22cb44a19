#pragma once

#include "accel/oracles.hpp"
#include "accel/trace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace accel {

struct Triplet {
  Vec x;
  Vec g;
  double f = 0.0;
};

// slack >= 0 means the inequality holds; `scale` feeds the tolerance policy.
// Pair margins use (i, j); step margins use i = k, j = -1.
struct Margin {
  int i = 0;
  int j = -1;
  double slack = 0.0;
  double scale = 0.0;
  std::string label;  // which inequality, empty for pair/step margins

  bool ok() const { return tolerance().ok(slack, scale); }
};

struct MarginReport {
  std::vector<Margin> margins;
  double min_slack = kInf;
  int worst = -1;  // index into margins
  std::size_t failures = 0;

  bool passed() const { return failures == 0; }
  void add(Margin m);
  void merge(const MarginReport& other);
  std::vector<Margin> failing() const;
};

// f_i >= f_j + <g_j, x_i - x_j> + |g_i - g_j|^2/(2L) + mu/(2(1 - mu/L)) |x_i - x_j - (g_i - g_j)/L|^2
double interpolation_slack(const Triplet& ti, const Triplet& tj, double mu, double L, double* scale = nullptr);
MarginReport check_interpolation(const std::vector<Triplet>& s, double mu, double L, Exec exec = Exec::openmp);
// minimum slack only, no per-pair storage
double min_interpolation_slack(const std::vector<Triplet>& s, double mu, double L, Exec exec = Exec::openmp);

// Points of every row (x, y, z when present), evaluated on the oracle.
std::vector<Triplet> harvest_triplets(const Trace& t, const Oracle& f);

// which: subset of {1..7}. mu = 0 uses the smooth convex list, mu > 0 the
// strongly convex one (the numbering of (vi)/(vii) differs between the two).
struct ClassCheckOptions {
  std::vector<int> which = {1, 2, 3, 4, 5, 6, 7};
  int samples = 200;
  double scale = 1.0;  // spread of sampled points around the centre
  std::uint64_t seed = 1;
  int lambda_grid = 11;  // includes 0 and 1
};
MarginReport check_class_inequalities(const Oracle& f, double mu, double L, const ClassCheckOptions& opt = {});

// Potential values along the trace (one per row, plus a final entry for the
// ogm last-step variant). Throws InvalidArgument when the trace lacks the
// state the certificate needs.
bool has_certificate(const std::string& method);
std::vector<double> potential_sequence(const Trace& t, const CompositeProblem& p);
MarginReport check_potential(const Trace& t, const CompositeProblem& p);
MarginReport check_potential(const Trace& t, const Oracle& f);

// 2x2 dual certificate for |x+ - x*|^2 <= tau |x - x*|^2 with x+ = x - gamma grad f(x)
struct LmiResult {
  bool feasible = false;
  double lambda = kNaN;   // witness multiplier
  double tau_min = kNaN;  // smallest tau certified along the scan
  double det = kNaN;      // determinant at the witness
};
LmiResult lmi_gd_distance(double tau, double gamma, double mu, double L, int grid = 2000);

std::string margins_csv(const MarginReport& r);

}  // namespace accel
