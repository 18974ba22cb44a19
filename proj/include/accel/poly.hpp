#pragma once

#include "accel/oracles.hpp"
#include "accel/trace.hpp"

#include <vector>

namespace accel {

// Fixed-step gradient descent, N+1 rows.
Trace gradient_descent(const Oracle& f, double gamma, const Vec& x0, int N);

// delta_1..delta_N of the shifted Chebyshev recursion (index 0 holds delta_1).
std::vector<double> chebyshev_deltas(const ClassParams& p, int N);
double chebyshev_xi(const ClassParams& p);
// distance ratio bound 2 / (xi^N + xi^-N)
double chebyshev_bound(const ClassParams& p, int N);
Trace chebyshev(const ClassParams& p, const Oracle& f, const Vec& x0, int N);

struct HeavyBallCoeffs {
  double step;
  double momentum;
  double delta_inf;
};
HeavyBallCoeffs heavy_ball_coeffs(const ClassParams& p);
Trace heavy_ball(const ClassParams& p, const Oracle& f, const Vec& x0, int N);

// Classical residual recurrence; rows after exact termination repeat the
// final iterate so the trace always has N+1 rows (tag "terminated_at").
Trace conjugate_gradient_quadratic(const Oracle& f, const Vec& x0, int N);

}  // namespace accel
