#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "../suite.hpp"
#include "accel/certify.hpp"
#include "accel/extrapolation.hpp"
#include "accel/restart.hpp"
#include "accel/runner.hpp"

#include <doctest.h>

using namespace accel;
using namespace testing_support;

namespace {

// random in-class smooth oracle: quadratic, Huber, or Huber plus ridge
Oracle random_smooth(Gen& g, int d, bool strongly) {
  const double L = g.log_uniform(0.5, 5.0);
  const double mu = strongly ? L * g.log_uniform(1e-3, 0.2) : 0.0;
  switch (g.integer(0, 1)) {
    case 0: return g.quadratic(d, mu, L);
    default: return make_huber(g.log_uniform(0.01, 0.5), L - mu, d, mu);
  }
}

std::vector<Oracle> oracle_zoo(Gen& g) {
  std::vector<Oracle> z;
  for (double mu : {0.0, 0.05}) {
    z.push_back(g.quadratic(g.integer(1, 8), mu, g.log_uniform(0.5, 5)));
    z.push_back(make_huber(g.log_uniform(0.01, 0.5), 1.0, g.integer(1, 8), mu));
  }
  z.push_back(make_heb_power(2, 4));
  return z;
}

}  // namespace

TEST_CASE("oracle class inequalities on random pairs") {
  Gen g(1001);
  for (int trial = 0; trial < 6; ++trial)
    for (const Oracle& f : oracle_zoo(g)) {
      ClassCheckOptions o;
      o.which = {2};
      o.samples = 200;
      o.seed = g.seed();
      o.scale = g.log_uniform(0.05, 3.0);
      // |x|^2/2 sits on the mu = L boundary; test it as a member of a wider class
      const double mu = f.params.mu < f.params.L ? f.params.mu : 0.5 * f.params.L;
      MarginReport r = check_class_inequalities(f, mu, f.params.L, o);
      CHECK_MESSAGE(r.passed(), f.kind << " min slack " << r.min_slack);
    }
  // power oracle inside its smoothness ball
  for (double r : {3.0, 4.0}) {
    Oracle f = make_heb_power(r, 3, 2.0);
    ClassCheckOptions o;
    o.which = {2};
    o.scale = 0.3;
    CHECK(check_class_inequalities(f, 0.0, f.params.L, o).passed());
  }
}

TEST_CASE("prox optimality") {
  Gen g(1003);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = g.integer(1, 8);
    const double lam = g.log_uniform(1e-3, 1e2);
    Vec x = g.vec(d, 3.0);
    for (const Oracle& f : {g.quadratic(d, 0.0, 2.0), make_huber(0.2, 1.5, d, 0.1)}) {
      Vec y = f.prox(x, lam);
      CHECK((y - x + lam * f.gradient(y)).norm() <= 1e-10 * (1 + x.norm()));
    }
    const double w = g.log_uniform(1e-3, 1.0);
    Vec y = prox_l1(x, lam * w);
    for (int i = 0; i < d; ++i) {
      const double s = (x[i] - y[i]) / lam;
      if (y[i] != 0.0) CHECK(std::abs(s - w * (y[i] > 0 ? 1 : -1)) <= 1e-12 * (1 + std::abs(x[i]) / lam));
      else CHECK(std::abs(s) <= w * (1 + 1e-12));
    }
    Vec p = project_simplex(x);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
    double theta = -kInf;
    for (int i = 0; i < d; ++i)
      if (p[i] > 0) theta = std::max(theta, x[i] - p[i]);
    for (int i = 0; i < d; ++i) {
      CHECK(p[i] >= 0.0);
      if (p[i] > 0) CHECK(std::abs(x[i] - p[i] - theta) <= 1e-12 * (1 + x.cwiseAbs().maxCoeff()));
      else CHECK(x[i] <= theta + 1e-12);
    }
  }
}

TEST_CASE("finite differences agree with gradients") {
  Gen g(1007);
  std::vector<Oracle> zoo = oracle_zoo(g);
  zoo.push_back(make_heb_power(4, 3));
  zoo.push_back(make_heb_power(3, 5));
  for (const Oracle& f : zoo)
    for (int i = 0; i < 50; ++i) {
      Vec x = g.vec(f.dim, 1.0);
      Vec a = f.gradient(x), b = finite_diff_gradient(f, x, 1e-6);
      CHECK_MESSAGE((a - b).norm() <= 1e-5 * std::max(1e-3, a.norm()), f.kind);
    }
}

TEST_CASE("chebyshev instance bound and delta monotonicity") {
  Gen g(1009);
  for (int trial = 0; trial < 10; ++trial) {
    const double kappa = g.log_uniform(1.5, 1e3);
    ClassParams p{1.0, kappa};
    auto d = chebyshev_deltas(p, 200);
    for (std::size_t k = 1; k < d.size(); ++k) CHECK(d[k] <= d[k - 1]);
    Oracle q = g.quadratic(g.integer(2, 20), 1.0 / kappa, 1.0);
    Vec x0 = g.vec(q.dim);
    const double R = (x0 - q.optimum->x).norm();
    for (int N = 0; N <= 50; ++N) {
      Trace t = chebyshev(q.params, q, x0, N);
      const double b = N == 0 ? R : chebyshev_bound(q.params, N) * R;
      CHECK(b - t.back().dist_opt >= -1e-8 * R);
    }
  }
}

TEST_CASE("offline extrapolation is instance optimal and meets the chebyshev bound") {
  Gen g(1013);
  for (int trial = 0; trial < 20; ++trial) {
    Oracle q = g.quadratic(6, 0.05, 1.0);
    const int k = 4;
    PairBuffer buf;
    Vec x = g.vec(6);
    for (int i = 0; i <= k; ++i) {
      Vec gr = q.gradient(x);
      buf.push(x, gr);
      x -= gr / q.params.L;
    }
    auto r = offline_na(buf);
    const Mat G = buf.G();
    const double best = (G * r.c).norm();
    for (int s = 0; s < 100; ++s) {
      Vec w = g.vec(k + 1);
      w /= w.sum();
      CHECK(best <= (G * w).norm() * (1 + 1e-9) + 1e-14);
    }
    const double g0 = buf.g(0).norm();
    CHECK(q.gradient(r.x_extr).norm() <= chebyshev_bound(q.params, k) * g0 * (1 + 1e-9));
  }
}

TEST_CASE("regularized systems are positive definite") {
  Gen g(1019);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = g.integer(1, 6);
    PairBuffer buf(g.integer(1, 8));
    for (int i = 0; i < g.integer(1, 10); ++i) buf.push(g.vec(d), i % 3 == 0 ? Vec::Zero(d) : g.vec(d));
    const double lam = g.log_uniform(1e-12, 10);
    ExtrapolationResult r;
    CHECK_NOTHROW(r = rna(buf, g.uniform(0, 1), lam));
    CHECK(r.system_min_eig >= lam * (1 - 1e-9) - 1e-14);  // Gram is normalized to unit norm
    CHECK(std::abs(r.c.sum() - 1.0) <= 1e-12);
  }
}

TEST_CASE("potentials along every certified method") {
  Gen g(1021);
  for (int trial = 0; trial < 6; ++trial) {
    Oracle f = random_smooth(g, g.integer(2, 10), trial % 2 == 1);
    Vec x0 = g.vec(f.dim, g.log_uniform(0.1, 3));
    const int N = g.integer(20, 100);
    for (const auto& run : certified_runs(f, x0, N)) {
      MarginReport r = check_potential(run.trace, f);
      CHECK_MESSAGE(r.passed(), f.kind << " " << run.label << " mu=" << f.params.mu << " min slack " << r.min_slack);
    }
  }
}

TEST_CASE("potentials on composite problems") {
  Gen g(1031);
  for (int trial = 0; trial < 4; ++trial) {
    const double mu = trial % 2 ? 0.02 : 0.0;
    CompositeProblem p = trial < 2 ? lasso(g, 8, mu, 1.0, 0.1) : simplex_problem(g, 8, mu, 1.0);
    Vec x0 = trial < 2 ? g.vec(8) : Vec::Constant(8, 1.0 / 8);
    for (const auto& run : composite_runs(p, x0, 80)) {
      MarginReport r = check_potential(run.trace, p);
      CHECK_MESSAGE(r.passed(), run.label << " min slack " << r.min_slack);
      for (const auto& rec : run.trace.records) CHECK(p.feasible(rec.x));
    }
  }
}

TEST_CASE("monotone wrapper never increases F") {
  Gen g(1033);
  for (int trial = 0; trial < 10; ++trial) {
    Oracle f = make_huber(g.log_uniform(1e-3, 0.1), 1.0, g.integer(1, 6));
    for (const char* inner : {"fgm", "fista", "prox_agm", "bregman_agm"}) {
      Trace t = monotone_wrap(inner, smooth_problem(f), g.vec(f.dim), 100);
      for (std::size_t k = 1; k < t.records.size(); ++k) CHECK(t.records[k].f <= t.records[k - 1].f);
    }
  }
}

TEST_CASE("form equivalences") {
  Gen g(1039);
  for (int trial = 0; trial < 20; ++trial) {
    const bool huber = trial % 4 == 3;
    Oracle f = huber ? make_huber(0.1, 1.0, 6, 0.05) : g.quadratic(6, g.log_uniform(1e-3, 0.2), 1.0);
    Vec x0 = g.vec(6);
    const double mu = f.params.mu;
    for (double m : {0.0, mu}) {
      Trace a = fgm(f, x0, 50, 1, m);
      CHECK(max_row_dev(a, fgm(f, x0, 50, 2, m)) <= 1e-9);
      CHECK(max_row_dev(a, fgm(f, x0, 50, 3, m)) <= 1e-9);
    }
    CHECK(max_row_dev(constant_momentum(f, x0, 50, 1), constant_momentum(f, x0, 50, 2)) <= 1e-9);
    CHECK(max_row_dev(ogm(f, x0, 50, 1), ogm(f, x0, 50, 2)) <= 1e-9);
  }
}

TEST_CASE("stated bounds hold at every budget") {
  Gen g(1049);
  for (int trial = 0; trial < 4; ++trial) {
    Oracle f = random_smooth(g, 6, trial % 2 == 1);
    Vec x0 = g.vec(6);
    const double mu = f.params.mu;
    for (int N = 1; N <= 40; ++N) {
      std::vector<Trace> ts = {gradient_descent(f, 1.0 / f.params.L, x0, N), fgm(f, x0, N), ogm(f, x0, N),
                               item(f, x0, N), fista(smooth_problem(f), x0, N),
                               bregman_agm(smooth_problem(f), Dgf::euclidean, x0, N), ppa(f, {1.0}, x0, N),
                               accel_inexact_ppa(f, exact_prox_solver(f), {1.0}, x0, N)};
      if (mu > 0) {
        ts.push_back(fgm(f, x0, N, 1, mu));
        ts.push_back(tmm(f, x0, N));
        ts.push_back(constant_momentum(f, x0, N));
      }
      for (const Trace& t : ts) {
        const double b = t.meta("bound");
        REQUIRE_MESSAGE(std::isfinite(b), t.method);
        const std::string on = t.text("bound_on");
        double v = t.back().f_gap;
        if (on == "z_dist_sq") v = (t.back().z - f.optimum->x).squaredNorm();
        if (on == "dist") v = t.back().dist_opt;
        CHECK_MESSAGE(tol_ok(b - v, b), t.method << " N=" << N << " value " << v << " bound " << b);
      }
    }
  }
}

TEST_CASE("interpolation along every trajectory") {
  Gen g(1051);
  std::size_t harvested = 0;
  for (int trial = 0; trial < 4; ++trial) {
    Oracle f = random_smooth(g, g.integer(2, 8), trial % 2 == 1);
    Vec x0 = g.vec(f.dim);
    for (const auto& run : certified_runs(f, x0, 30)) {
      auto s = harvest_triplets(run.trace, f);
      harvested += s.size();
      MarginReport r = check_interpolation(s, f.params.mu, f.params.L);
      CHECK_MESSAGE(r.passed(), run.label << " min slack " << r.min_slack);
    }
  }
  CHECK(harvested > 1000);
}

TEST_CASE("lmi feasibility is sound on sampled gradient steps") {
  Gen g(1061);
  int feasible = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const double L = 1.0, mu = g.log_uniform(1e-3, 0.5);
    const double gamma = g.uniform(0.0, 2.2 / L);
    const double tau = g.uniform(0.0, 1.2);
    if (!lmi_gd_distance(tau, gamma, mu, L).feasible) continue;
    ++feasible;
    for (int s = 0; s < 500; ++s) {
      Oracle f = s % 2 ? g.quadratic(g.integer(1, 5), mu, L) : make_huber(g.log_uniform(0.01, 1), L - mu, 3, mu);
      Vec x = g.vec(f.dim, g.log_uniform(0.01, 10));
      Vec xp = x - gamma * f.gradient(x);
      const double lhs = (xp - f.optimum->x).squaredNorm(), rhs = tau * (x - f.optimum->x).squaredNorm();
      CHECK(tol_ok(rhs - lhs, rhs + lhs));
    }
  }
  CHECK(feasible > 5);
}

TEST_CASE("catalyst counters") {
  Gen g(1063);
  for (int trial = 0; trial < 10; ++trial) {
    Oracle f = random_smooth(g, 8, trial % 2 == 1);
    CatalystOptions o;
    o.inner = static_cast<InnerMethod>(g.integer(0, 2));
    o.lambda = g.log_uniform(0.1, 10) / f.params.L;
    o.budget = g.integer(0, 400);
    o.strongly_convex = f.params.mu > 0 && trial % 4 == 1;
    Trace t = catalyst(f, g.vec(8), o);
    std::int64_t inner = t.records.size() > 1 ? t.back().inner_iters : 0;
    CHECK(t.meta("N_total") == double(inner) + t.meta("N_useless"));
    CHECK(t.meta("N_useless") < std::ceil(t.meta("B")));
    CHECK(t.meta("N_total") <= o.budget);
    CHECK(t.meta("max_inner") <= std::ceil(t.meta("B")));
  }
}

TEST_CASE("restart schedule and grid accounting") {
  Gen g(1069);
  for (int trial = 0; trial < 10; ++trial) {
    const int N = g.integer(4, 300);
    Oracle f = g.quadratic(5, 0.01, 1.0);
    auto cells = grid_cells(f, 1.0, g.vec(5), N, Exec::openmp);
    const int lg = static_cast<int>(std::floor(std::log2(double(N))));
    const int ug = static_cast<int>(std::ceil(std::log2(double(N))));
    CHECK(cells.size() == std::size_t(lg * (ug + 1)));
    std::int64_t total = 0;
    for (const auto& c : cells) total += c.iterations;
    CHECK(total <= std::int64_t(cells.size()) * N);
  }
}

TEST_CASE("runner determinism and counter conservation") {
  const std::vector<std::string> methods = {
      "gd",       "chebyshev", "heavy_ball", "cg",       "ogm",        "fgm",        "constant_momentum",
      "item",     "tmm",       "fista",      "prox_agm", "monotone",   "bregman_agm", "online_rna",
      "prox_rna", "ppa",       "accel_ppa",  "catalyst", "restart_fixed", "restart_grid"};
  for (const auto& m : methods) {
    ExperimentConfig c;
    c.problem.kind = "quad";
    c.problem.d = 8;
    c.problem.mu = 0.05;
    c.method.name = m;
    c.method.N = 40;
    c.seed = 77;
    RunResult a = run_experiment(c), b = run_experiment(c);
    REQUIRE_MESSAGE(!a.diverged, m << ": " << a.message);
    CHECK_MESSAGE(trace_csv(a.trace, false) == trace_csv(b.trace, false), m);
    BuiltProblem bp = build_problem(c.problem, c.seed);
    auto s = summary_json(a.trace, bp);
    const double meta_calls = a.trace.meta("grad_calls");
    const double expect = std::isnan(meta_calls) ? double(a.trace.back().grad_calls) : meta_calls;
    CHECK_MESSAGE(s["grad_calls"].get<double>() == expect, m);
    if (m == "fista" || m == "prox_agm")
      CHECK(a.trace.back().grad_calls == c.method.N + static_cast<std::int64_t>(a.trace.meta("wasted")));
  }
}
