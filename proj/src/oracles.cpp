#include "accel/oracles.hpp"

#include <algorithm>
#include <numeric>

namespace accel {

Vec QuadData::apply(const Vec& v) const {
  if (Q.size() == 0) return eigs.cwiseProduct(v);
  return Q * eigs.cwiseProduct(Q.transpose() * v);
}

Vec QuadData::solve_shifted(const Vec& v, double lambda) const {
  Vec scale = (1.0 + lambda * eigs.array()).inverse().matrix();
  if (Q.size() == 0) return scale.cwiseProduct(v);
  return Q * scale.cwiseProduct(Q.transpose() * v);
}

Mat QuadData::dense() const {
  if (Q.size() == 0) return eigs.asDiagonal();
  return Q * eigs.asDiagonal() * Q.transpose();
}

Mat random_rotation(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  Mat G(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) G(i, j) = n01(rng);
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ();
  Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (R(j, j) < 0) Q.col(j) *= -1.0;
  return Q;
}

Oracle make_quadratic(const Vec& eigs, const Vec& x_star, std::optional<std::uint64_t> rotation_seed,
                      double f_star) {
  if (eigs.size() == 0) throw InvalidArgument("make_quadratic: empty eigenvalue list");
  require(eigs.size() == x_star.size(), "make_quadratic: eigs and x_star dimensions differ");
  for (int i = 0; i < eigs.size(); ++i)
    require(eigs[i] > 0 && std::isfinite(eigs[i]), "make_quadratic: eigenvalues must be positive and finite");

  auto data = std::make_shared<QuadData>();
  data->eigs = eigs;
  data->x_star = x_star;
  data->f_star = f_star;
  if (rotation_seed) data->Q = random_rotation(static_cast<int>(eigs.size()), *rotation_seed);

  Oracle o;
  o.kind = "quadratic";
  o.dim = static_cast<int>(eigs.size());
  o.quad = data;
  o.value = [data](const Vec& x) {
    Vec e = x - data->x_star;
    return 0.5 * e.dot(data->apply(e)) + data->f_star;
  };
  o.gradient = [data](const Vec& x) { return data->apply(x - data->x_star); };
  o.prox = [data](const Vec& x, double lambda) {
    Vec rhs = x + lambda * data->apply(data->x_star);
    return data->solve_shifted(rhs, lambda);
  };
  o.params = {eigs.minCoeff(), eigs.maxCoeff()};
  o.optimum = Optimum{x_star, f_star};
  return o;
}

Oracle make_huber(double tau, double L, int d, double mu) {
  require(tau > 0, "make_huber: tau must be positive");
  require(L > 0, "make_huber: L must be positive");
  require(d >= 1, "make_huber: dimension must be >= 1");
  require(mu >= 0, "make_huber: mu must be nonnegative");
  const double slope = L * tau;           // linear-branch coefficient
  const double offset = -L * tau * tau / 2;  // linear-branch offset

  Oracle o;
  o.kind = "huber";
  o.dim = d;
  o.value = [=](const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      double a = std::abs(x[i]);
      s += a >= tau ? slope * a + offset : 0.5 * L * a * a;
    }
    return s + 0.5 * mu * x.squaredNorm();
  };
  o.gradient = [=](const Vec& x) {
    Vec g(x.size());
    for (int i = 0; i < x.size(); ++i) {
      double a = std::abs(x[i]);
      g[i] = a >= tau ? slope * (x[i] > 0 ? 1.0 : -1.0) : L * x[i];
    }
    return Vec(g + mu * x);
  };
  o.prox = [=](const Vec& x, double lambda) {
    Vec y(x.size());
    const double knee = tau * (1.0 + lambda * (L + mu));
    for (int i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) < knee)
        y[i] = x[i] / (1.0 + lambda * (L + mu));
      else
        y[i] = (x[i] - lambda * slope * (x[i] > 0 ? 1.0 : -1.0)) / (1.0 + lambda * mu);
    }
    return y;
  };
  o.params = {mu, L + mu};
  o.optimum = Optimum{Vec::Zero(d), 0.0};
  return o;
}

double heb_local_L(double r, double radius) { return (r - 1.0) * std::pow(radius, r - 2.0); }

Oracle make_heb_power(double r, int d, double radius) {
  if (!(r >= 2.0)) throw InvalidArgument("make_heb_power: r must be >= 2");
  require(d >= 1, "make_heb_power: dimension must be >= 1");
  require(radius > 0, "make_heb_power: radius must be positive");
  Oracle o;
  o.kind = "heb_power";
  o.dim = d;
  o.value = [r](const Vec& x) { return std::pow(x.norm(), r) / r; };
  o.gradient = [r](const Vec& x) {
    double n = x.norm();
    if (n == 0.0) return Vec(Vec::Zero(x.size()));
    return Vec(std::pow(n, r - 2.0) * x);
  };
  o.params = {r == 2.0 ? 1.0 : 0.0, heb_local_L(r, radius)};
  o.optimum = Optimum{Vec::Zero(d), 0.0};
  o.heb = Heb{r, 1.0};
  return o;
}

Oracle make_zero(int d) {
  Oracle o;
  o.kind = "zero";
  o.dim = d;
  o.value = [](const Vec&) { return 0.0; };
  o.gradient = [](const Vec& x) { return Vec(Vec::Zero(x.size())); };
  o.prox = [](const Vec& x, double) { return x; };
  o.params = {0.0, 1.0};
  return o;
}

Vec prox_l1(const Vec& x, double weight) {
  require(weight >= 0, "prox_l1: weight must be nonnegative");
  Vec y(x.size());
  for (int i = 0; i < x.size(); ++i) {
    double a = std::abs(x[i]) - weight;
    y[i] = a > 0 ? (x[i] > 0 ? a : -a) : 0.0;
  }
  return y;
}

Oracle make_l1(int d, double weight) {
  require(weight >= 0, "make_l1: weight must be nonnegative");
  Oracle o;
  o.kind = "l1";
  o.dim = d;
  o.value = [weight](const Vec& x) { return weight * x.lpNorm<1>(); };
  o.prox = [weight](const Vec& x, double step) { return prox_l1(x, weight * step); };
  return o;
}

// sort-based projection onto {x >= 0, sum x = 1}
Vec project_simplex(const Vec& x) {
  const int n = static_cast<int>(x.size());
  require(n >= 1, "project_simplex: empty vector");
  std::vector<double> u(x.data(), x.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  for (int j = 0; j < n; ++j) {
    css += u[j];
    double t = (css - 1.0) / (j + 1);
    if (u[j] - t > 0) theta = t;
  }
  Vec y = (x.array() - theta).max(0.0).matrix();
  return y;
}

Oracle make_simplex_indicator(int d) {
  Oracle o;
  o.kind = "simplex";
  o.dim = d;
  o.domain = [](const Vec& x) {
    if ((x.array() < -1e-12).any()) return false;
    return std::abs(x.sum() - 1.0) <= 1e-10;
  };
  auto dom = o.domain;
  o.value = [dom](const Vec& x) { return dom(x) ? 0.0 : kInf; };
  o.prox = [](const Vec& x, double) { return project_simplex(x); };
  return o;
}

Vec finite_diff_gradient(const Oracle& oracle, const Vec& x, double h) {
  require(h > 0, "finite_diff_gradient: h must be positive");
  Vec g(x.size());
  Vec xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (oracle.value(xp) - oracle.value(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

CompositeProblem smooth_problem(const Oracle& f) {
  CompositeProblem p;
  p.f = f;
  p.h = make_zero(f.dim);
  p.optimum = f.optimum;
  return p;
}

CompositeProblem make_composite(const Oracle& f, const Oracle& h) {
  require(f.dim == h.dim, "make_composite: dimension mismatch");
  require(h.has_prox(), "make_composite: nonsmooth part needs a prox");
  CompositeProblem p;
  p.f = f;
  p.h = h;
  if (h.kind == "zero") p.optimum = f.optimum;
  return p;
}

Optimum reference_optimum(const CompositeProblem& p, int max_iter) {
  const double L = p.f.params.L;
  const int d = p.dim();
  Vec x = p.h.prox(Vec::Zero(d), 1.0 / L);
  if (p.h.kind == "simplex") x = Vec::Constant(d, 1.0 / d);
  Vec x_prev = x, y = x;
  double t = 1.0;
  // accelerated proximal gradient with gradient-based momentum restart
  for (int it = 0; it < max_iter; ++it) {
    Vec xn = p.h.prox(y - p.f.gradient(y) / L, 1.0 / L);
    double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if ((y - xn).dot(xn - x) > 0) {
      tn = 1.0;
      y = xn;
    } else {
      y = xn + ((t - 1.0) / tn) * (xn - x);
    }
    double step = (xn - x).norm();
    x_prev = x;
    x = xn;
    t = tn;
    if (step <= 1e-16 * (1.0 + x.norm()) && it > 10) break;
  }
  // polish with plain proximal gradient steps
  for (int it = 0; it < 2000; ++it) {
    Vec xn = p.h.prox(x - p.f.gradient(x) / L, 1.0 / L);
    if ((xn - x).norm() == 0.0) break;
    x = xn;
  }
  return Optimum{x, p.F(x)};
}

Vec random_vector(int d, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n01;
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = scale * n01(rng);
  return v;
}

Vec random_eigs(int d, double mu, double L, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(mu, L);
  Vec e(d);
  for (int i = 0; i < d; ++i) e[i] = u(rng);
  if (d >= 1) e[0] = L;
  if (d >= 2) e[d - 1] = mu;
  return e;
}

}  // namespace accel
