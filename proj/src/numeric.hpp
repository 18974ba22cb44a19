#pragma once

#include <functional>

namespace accel::detail {

// Golden-section search for a minimizer of a unimodal function on [a, b]
// using exactly `evals` function evaluations; returns the best point seen.
double golden_section(const std::function<double(double)>& fn, double a, double b, int evals);

}  // namespace accel::detail
