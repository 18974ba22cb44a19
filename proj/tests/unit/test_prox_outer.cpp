#include "../oracle/frozen_values.hpp"
#include "../support.hpp"
#include "accel/certify.hpp"
#include "accel/prox_outer.hpp"

#include <doctest.h>

using namespace accel;
using testing_support::Gen;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

InexactProxCertificate cert(const Vec& e, double delta) {
  // x_next - y = (1, 0); g chosen so the residual is exactly e
  InexactProxCertificate c;
  c.y = Vec::Zero(2);
  c.x_next = v2(1, 0);
  c.lambda = 0.5;
  c.g = (e - c.x_next + c.y) / c.lambda;
  c.e = e;
  c.delta = delta;
  return c;
}

}  // namespace

TEST_CASE("relative error criterion") {
  for (double d : {0.0, 0.3, 1.0, 7.0}) CHECK(check_relative_error(cert(Vec::Zero(2), d)));
  CHECK_FALSE(check_relative_error(cert(v2(0, 1e-3), 0.0)));
  CHECK(check_relative_error(cert(v2(0, 0.5), 0.5)));
  CHECK_FALSE(check_relative_error(cert(v2(0, 0.5 + 1e-6), 0.5)));
  auto c = cert(v2(0, 0.1), 1.0);
  c.e = v2(0, 0.2);
  CHECK_THROWS_AS(check_relative_error(c), InconsistentCertificate);
  // both sides zero
  InexactProxCertificate z{Vec::Zero(2), Vec::Zero(2), Vec::Zero(2), 1.0, Vec::Zero(2), 0.0};
  CHECK(check_relative_error(z));
}

TEST_CASE("proximal point on a quadratic") {
  Oracle q = make_quadratic(v2(1, 10), Vec::Zero(2));
  Trace t = ppa(q, {1.0}, v2(1, 1), 5);
  Vec x = v2(1, 1);
  for (int k = 1; k <= 5; ++k) {
    x = v2(x[0] / 2, x[1] / 11);
    CHECK((t.records[k].x - x).norm() < 1e-15);
  }
  CHECK(t.records[5].A == doctest::Approx(frozen::ppa_A5_mu1));
  CHECK(t.back().f_gap <= t.meta("bound"));
  CHECK(check_potential(t, q).passed());
  for (const auto& r : ppa(q, {1.0}, Vec::Zero(2), 4).records) CHECK(r.dist_opt == 0.0);
  CHECK_THROWS_AS(ppa(q, {}, v2(1, 1), 2), InvalidArgument);
  CHECK_THROWS_AS(ppa(make_heb_power(4, 2), {1.0}, v2(1, 1), 2), Unsupported);
}

TEST_CASE("accelerated inexact proximal point") {
  Gen g(101);
  Oracle q = g.quadratic(6, 0.0, 1.0);
  q.params.mu = 0.0;
  Vec x0 = g.vec(6);
  const double R = (x0 - q.optimum->x).norm();
  auto exact = exact_prox_solver(q);
  for (int N : {1, 5, 20}) {
    Trace t = accel_inexact_ppa(q, exact, {2.0}, x0, N);
    CHECK(t.meta("bound") == doctest::Approx(2 * R * R / (2.0 * N * N)));
    CHECK(t.back().f_gap <= t.meta("bound") * (1 + 1e-9));
    // a_k solves lambda (a + A) = a^2
    for (int k = 0; k < N; ++k) {
      const double A = t.records[k].A, a = t.records[k + 1].A - A;
      CHECK(std::abs(2.0 * (a + A) - a * a) <= 1e-10 * (1 + a * a));
    }
  }
  for (const auto& r : accel_inexact_ppa(q, exact, {1.0}, q.optimum->x, 4).records) CHECK(r.dist_opt < 1e-14);

  // optimal y with an honest solver lands on the optimum
  Trace one = accel_inexact_ppa(q, exact, {1.0}, q.optimum->x, 1, AccelPpaOptions{0.0, 1.0, false});
  CHECK(one.back().dist_opt < 1e-14);

  // growing steps
  auto grow = geometric_steps(1.0, 4.0, 10);
  CHECK(grow[3] == 64.0);
  double s = 0;
  for (int i = 0; i < 10; ++i) s += std::sqrt(grow[i]);
  CHECK(s * s == doctest::Approx(std::pow(std::pow(2.0, 10) - 1, 2)));
  Trace fast = accel_inexact_ppa(q, exact, grow, x0, 10);
  Trace slow = accel_inexact_ppa(q, exact, {1.0}, x0, 10);
  CHECK(fast.meta("bound") < 1e-2 * slow.meta("bound"));
  CHECK(fast.back().f_gap <= fast.meta("bound") * (1 + 1e-9) + 1e-15);
}

TEST_CASE("accelerated proximal point rejects bad inner solves") {
  Gen g(103);
  Oracle q = g.quadratic(4, 0.0, 1.0);
  q.params.mu = 0.0;
  Vec x0 = g.vec(4);
  AccelPpaOptions o;
  o.delta = 0.1;
  CHECK_THROWS_AS(accel_inexact_ppa(q, overshoot_solver(q, 3.0), {1.0}, x0, 5, o), InnerSolveError);
  o.delta = 1.5;
  CHECK_THROWS_AS(accel_inexact_ppa(q, exact_prox_solver(q), {1.0}, x0, 5, o), InvalidArgument);
  o.allow_out_of_range = true;
  CHECK_NOTHROW(accel_inexact_ppa(q, exact_prox_solver(q), {1.0}, x0, 5, o));
  try {
    AccelPpaOptions tight;
    tight.delta = 0.0;
    accel_inexact_ppa(q, overshoot_solver(q, 1.5), {1.0}, x0, 5, tight);
    FAIL("expected rejection");
  } catch (const InnerSolveError& e) {
    CHECK(e.partial.records.size() == 1);
  }
}

TEST_CASE("strongly convex accelerated proximal point") {
  Gen g(107);
  Oracle q = g.quadratic(6, 0.1, 1.0);
  Vec x0 = g.vec(6);
  AccelPpaOptions o;
  o.mu = 0.1;
  Trace t = accel_inexact_ppa(q, exact_prox_solver(q), {1.0}, x0, 30, o);
  CHECK(t.back().f_gap <= t.meta("bound") * (1 + 1e-9));
  CHECK(check_potential(t, q).passed());
}

TEST_CASE("catalyst constants") {
  auto c = inner_contract(InnerMethod::gd, 1.0, 1.0);
  CHECK(c.C == 1.0);
  CHECK(c.tau == 0.5);
  CHECK(catalyst_burden(c, 1.0, 1.0) == doctest::Approx(frozen::catalyst_B_lamL1).epsilon(1e-14));
  CHECK(lambda_gd_suboptimal(1.0, 0.1) == doctest::Approx(1.0 / 0.8));
  CHECK(lambda_gd_optimal(1.0, 0.1) == doctest::Approx(2.0 / 0.7));
  CHECK_THROWS_AS(lambda_gd_optimal(1.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(parse_inner("newton"), InvalidArgument);
}

TEST_CASE("catalyst accounting") {
  Gen g(109);
  for (auto inner : {InnerMethod::gd, InnerMethod::gd_linesearch, InnerMethod::const_momentum}) {
    Oracle q = g.quadratic(10, 0.01, 1.0);
    CatalystOptions o;
    o.inner = inner;
    o.budget = 300;
    Trace t = catalyst(q, g.vec(10), o);
    const double B = t.meta("B");
    CHECK(t.meta("max_inner") <= std::ceil(B) + 0.0);
    CHECK(t.meta("N_useless") < std::ceil(B));
    CHECK(t.meta("N_total") <= o.budget);
    CHECK(t.meta("N_total") < (t.meta("N_outer") + 1) * B);
    CHECK(t.back().f_gap <= t.meta("bound") * (1 + 1e-9));
    std::int64_t sum = 0;
    for (std::size_t k = 1; k < t.records.size(); ++k) sum = t.records[k].inner_iters;
    CHECK(double(sum) + t.meta("N_useless") == t.meta("N_total"));
  }
}

TEST_CASE("catalyst warm start at the prox point") {
  Gen g(113);
  Oracle q = g.quadratic(5, 0.01, 1.0);
  Trace t = catalyst(q, q.optimum->x, CatalystOptions{});
  CHECK(t.meta("N_outer") == 1);
  CHECK(t.meta("N_total") == 0);
  CHECK(t.back().dist_opt == 0.0);
}
