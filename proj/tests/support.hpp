#pragma once

#include "accel/certify.hpp"
#include "accel/oracles.hpp"
#include "accel/trace.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testing_support {

using accel::Oracle;
using accel::Vec;

// seeded generator of test instances
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
  std::uint64_t seed() { return rng(); }
  Vec vec(int d, double scale = 1.0) { return accel::random_vector(d, rng, scale); }

  // random quadratic with spectrum in [mu, L]; mu = 0 floors the spectrum at 1e-3 L
  Oracle quadratic(int d, double mu, double L, bool rotate = true) {
    Vec eigs = accel::random_eigs(d, std::max(mu, 1e-3 * L), L, rng);
    Oracle o = accel::make_quadratic(eigs, vec(d), rotate ? std::optional<std::uint64_t>(seed()) : std::nullopt,
                                     uniform(-1, 1));
    o.params = {mu, L};
    return o;
  }
};

inline double rel_dev(const Vec& a, const Vec& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

inline double max_row_dev(const accel::Trace& a, const accel::Trace& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < std::min(a.records.size(), b.records.size()); ++k)
    m = std::max(m, rel_dev(a.records[k].x, b.records[k].x));
  return m;
}

inline bool tol_ok(double slack, double mag) { return accel::tolerance().ok(slack, mag); }

}  // namespace testing_support

namespace testing_support {

inline accel::CompositeProblem lasso(Gen& g, int d, double mu, double L, double weight) {
  auto p = accel::make_composite(g.quadratic(d, mu, L), accel::make_l1(d, weight));
  p.optimum = accel::reference_optimum(p);
  return p;
}

inline accel::CompositeProblem simplex_problem(Gen& g, int d, double mu, double L) {
  auto p = accel::make_composite(g.quadratic(d, mu, L), accel::make_simplex_indicator(d));
  p.optimum = accel::reference_optimum(p);
  return p;
}

}  // namespace testing_support
