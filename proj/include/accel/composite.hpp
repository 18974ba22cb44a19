#pragma once

#include "accel/core.hpp"
#include "accel/oracles.hpp"
#include "accel/trace.hpp"

#include <string>

namespace accel {

enum class BacktrackMode { monotone, reset, decrease };
BacktrackMode parse_backtrack_mode(const std::string& s);
std::string to_string(BacktrackMode m);

struct BacktrackOptions {
  double mu = 0.0;
  double L0 = kNaN;    // NaN: use the oracle's L
  double alpha = 2.0;  // growth factor on rejection
  double beta = kNaN;  // decrease factor; NaN means 1/alpha
  BacktrackMode mode = BacktrackMode::monotone;
  int max_doublings = 200;
};

// Rows: x = x_k, y = y_{k-1}, z = z_k, A = B_k (= A_k / L), Lk = L_k.
// grad_calls include rejected trials; num["wasted"] counts them.
Trace fista(const CompositeProblem& p, const Vec& x0, int N, const BacktrackOptions& opt = {});
Trace prox_agm(const CompositeProblem& p, const Vec& x0, int N, const BacktrackOptions& opt = {});

// min{2/N^2, (1 - sqrt(mu/ell))^N} * ell * R^2 with ell = max(alpha L, L0)
double composite_bound(double mu, double L, double L0, double alpha, int N, double R);

}  // namespace accel
