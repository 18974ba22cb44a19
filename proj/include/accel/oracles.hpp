#pragma once

#include "accel/core.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>

namespace accel {

struct Optimum {
  Vec x;
  double f = 0.0;
};

// Hölderian error bound (r, mu_heb): (mu/r) dist^r <= f - f*.
struct Heb {
  double r = 2.0;
  double mu = 1.0;
};

// f(x) = 1/2 <x - xs, H (x - xs)> + fs with H = Q diag(eigs) Q^T.
struct QuadData {
  Vec eigs;
  Mat Q;  // empty when axis aligned
  Vec x_star;
  double f_star = 0.0;

  Vec apply(const Vec& v) const;         // H v
  Vec solve_shifted(const Vec& v, double lambda) const;  // (I + lambda H)^{-1} v
  Mat dense() const;
};

struct Oracle {
  std::string kind;
  int dim = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Vec(const Vec&, double)> prox;  // prox of step * (this function)
  std::function<bool(const Vec&)> domain;       // empty means all of R^d
  ClassParams params;
  std::optional<Optimum> optimum;
  std::optional<Heb> heb;
  std::shared_ptr<const QuadData> quad;

  bool has_prox() const { return static_cast<bool>(prox); }
  bool full_domain() const { return !domain; }
  bool has_gradient() const { return static_cast<bool>(gradient); }
};

// F = f + h. h only needs value + prox; `optimum` refers to F.
struct CompositeProblem {
  Oracle f;
  Oracle h;
  std::optional<Optimum> optimum;

  double F(const Vec& x) const { return f.value(x) + h.value(x); }
  bool feasible(const Vec& x) const { return !h.domain || h.domain(x); }
  int dim() const { return f.dim; }
};

Oracle make_quadratic(const Vec& eigs, const Vec& x_star, std::optional<std::uint64_t> rotation_seed = {},
                      double f_star = 0.0);
// Coordinatewise Huber with slope L*tau, optionally plus (mu/2)||x||^2.
Oracle make_huber(double tau, double L, int d, double mu = 0.0);
// f = ||x||^r / r; params.L is the smoothness constant on the ball of `radius`.
Oracle make_heb_power(double r, int d, double radius = 1.0);
double heb_local_L(double r, double radius);

Oracle make_zero(int d);
Oracle make_l1(int d, double weight);
Oracle make_simplex_indicator(int d);

Vec prox_l1(const Vec& x, double weight);
Vec project_simplex(const Vec& x);
Vec finite_diff_gradient(const Oracle& oracle, const Vec& x, double h);

CompositeProblem smooth_problem(const Oracle& f);
CompositeProblem make_composite(const Oracle& f, const Oracle& h);
// Proximal gradient run to a fixed point; used as reference optimum.
Optimum reference_optimum(const CompositeProblem& p, int max_iter = 100000);

// seeded helpers
Vec random_vector(int d, std::mt19937_64& rng, double scale = 1.0);
Vec random_eigs(int d, double mu, double L, std::mt19937_64& rng);  // includes both endpoints when d >= 2
Mat random_rotation(int d, std::uint64_t seed);

}  // namespace accel
