#pragma once

#include "accel/oracles.hpp"
#include "accel/trace.hpp"

#include <functional>
#include <string>
#include <vector>

namespace accel {

// e = x_next - y + lambda g; accepted iff ||e|| <= delta ||x_next - y||
struct InexactProxCertificate {
  Vec e;
  Vec x_next;
  Vec y;
  double lambda = 0.0;
  Vec g;
  double delta = 0.0;
};
// Recomputes e and throws InconsistentCertificate when the stored one drifts by more than 1e-10.
bool check_relative_error(const InexactProxCertificate& cert);

// Approximate prox of lambda f at y.
struct ProxStep {
  Vec x_next;
  Vec g;  // subgradient of f at x_next
  Vec e;
  std::int64_t grad_calls = 0;
  std::int64_t prox_calls = 0;
  std::int64_t inner_iters = 0;
};
using SubproblemSolver = std::function<ProxStep(const Vec& y, double lambda)>;

SubproblemSolver exact_prox_solver(const Oracle& f);
// x = y + s (prox(y) - y); s = 1 is exact, s > 1 overshoots and breaks small-error certificates
SubproblemSolver overshoot_solver(const Oracle& f, double s);

// step at iteration i; a single entry means constant steps
double step_at(const std::vector<double>& lambdas, int i);
std::vector<double> geometric_steps(double lambda0, double ratio, int n);

// Rows: x = x_k, A = A_k.
Trace ppa(const Oracle& f, const std::vector<double>& lambdas, const Vec& x0, int N);

struct AccelPpaOptions {
  double mu = 0.0;
  double delta = 1.0;
  bool allow_out_of_range = false;  // lets tests feed a delta outside the certified range
};
// Solver failure or a rejected certificate raises InnerSolveError with the partial trace.
struct InnerSolveError : Error {
  Trace partial;
  InnerSolveError(const std::string& msg, Trace t) : Error(msg), partial(std::move(t)) {}
};
// Rows: x = x_k, y = y_{k-1}, z = z_k, A = A_k.
Trace accel_inexact_ppa(const Oracle& f, const SubproblemSolver& solver, const std::vector<double>& lambdas,
                        const Vec& x0, int N, const AccelPpaOptions& opt = {});
double accel_ppa_bound(const std::vector<double>& lambdas, double mu, int k, double R);

enum class InnerMethod { gd, gd_linesearch, const_momentum };
InnerMethod parse_inner(const std::string& s);
std::string to_string(InnerMethod m);

struct InnerContract {
  double C = 1.0;
  double tau = 1.0;
};
InnerContract inner_contract(InnerMethod m, double lambda, double L);
// log(C (lambda L + 2)) / log(1 / (1 - tau)) + 1
double catalyst_burden(const InnerContract& c, double lambda, double L);
double lambda_gd_suboptimal(double L, double mu);  // 1/(L - 2mu)
double lambda_gd_optimal(double L, double mu);     // 2/(L - 3mu)

struct CatalystOptions {
  InnerMethod inner = InnerMethod::gd;
  double lambda = kNaN;  // NaN: 1/L
  int budget = 100;      // total inner iterations
  bool strongly_convex = false;
};
// Rows: one per outer step; inner_iters is cumulative. Meta: N_outer, N_total, N_useless, B, max_inner.
Trace catalyst(const Oracle& f, const Vec& x0, const CatalystOptions& opt = {});

}  // namespace accel
