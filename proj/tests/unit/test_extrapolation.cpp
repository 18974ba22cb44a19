#include "../support.hpp"
#include "accel/extrapolation.hpp"
#include "accel/poly.hpp"

#include <doctest.h>

using namespace accel;
using testing_support::Gen;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

PairBuffer gd_buffer(const Oracle& f, const Vec& x0, double step, int pairs) {
  PairBuffer buf;
  Vec x = x0;
  for (int i = 0; i < pairs; ++i) {
    Vec g = f.gradient(x);
    buf.push(x, g);
    x = x - step * g;
  }
  return buf;
}

}  // namespace

TEST_CASE("pair buffer keeps the newest pairs") {
  PairBuffer b(2);
  for (int i = 0; i < 4; ++i) b.push(Vec::Constant(2, i), Vec::Constant(2, -i));
  CHECK(b.size() == 2);
  CHECK(b.x(0)[0] == 2.0);
  CHECK(b.g(1)[0] == -3.0);
  CHECK(b.X().cols() == 2);
  CHECK_THROWS_AS(b.push(Vec::Zero(3), Vec::Zero(3)), InvalidArgument);
  CHECK_THROWS_AS(PairBuffer(-1), InvalidArgument);
}

TEST_CASE("gaussian elimination") {
  Mat A(2, 2);
  A << 0, 1, 2, 3;
  Vec x = solve_gepp(A, v2(1, 5), 1e-13);
  CHECK((A * x - v2(1, 5)).norm() < 1e-14);
  Mat S(2, 2);
  S << 1, 2, 2, 4;
  CHECK_THROWS_AS(solve_gepp(S, v2(1, 1), 1e-13), SingularSystem);
  CHECK(spectral_norm_psd(Mat::Identity(3, 3) * 4.0) == doctest::Approx(4.0));
}

TEST_CASE("offline extrapolation basics") {
  Oracle q = make_quadratic(v2(1, 10), Vec::Zero(2));
  PairBuffer one;
  one.push(v2(1, 1), q.gradient(v2(1, 1)));
  auto r = offline_na(one);
  CHECK(r.c.size() == 1);
  CHECK(r.c[0] == doctest::Approx(1.0));
  CHECK((r.x_extr - v2(1, 1)).norm() == 0.0);

  auto mixed = na_mixing(one, 0.1);
  CHECK((mixed.x_extr - (v2(1, 1) - 0.1 * q.gradient(v2(1, 1)))).norm() < 1e-15);

  CHECK_THROWS_AS(offline_na(PairBuffer()), InvalidArgument);
}

TEST_CASE("offline extrapolation recovers the optimum when k >= d") {
  Gen g(4);
  for (int trial = 0; trial < 10; ++trial) {
    Oracle q = g.quadratic(2, 0.1, 1.0);
    Vec x0 = g.vec(2);
    PairBuffer buf = gd_buffer(q, x0, 1.0 / q.params.L, 3);
    auto r = offline_na(buf);
    CHECK(q.gradient(r.x_extr).norm() <= 1e-9 * std::max(1.0, q.gradient(x0).norm()));
    CHECK(r.c.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mixing") {
  Oracle q = make_quadratic(v2(1, 10), Vec::Zero(2));
  Gen g(9);
  for (int trial = 0; trial < 5; ++trial) {
    PairBuffer buf = gd_buffer(q, g.vec(2), 0.05, 2);
    auto off = offline_na(buf);
    auto mix0 = na_mixing(buf, 0.0);
    CHECK((mix0.x_extr - off.x_extr).norm() == 0.0);
    auto mix = na_mixing(buf, 2.0 / 11.0);
    const double go = q.gradient(off.x_extr).norm();
    if (go > 1e-12) CHECK(q.gradient(mix.x_extr).norm() / go <= 9.0 / 11.0 + 1e-12);
  }
}

TEST_CASE("regularized extrapolation limits") {
  Gen g(12);
  Oracle q = g.quadratic(6, 0.1, 1.0);
  PairBuffer buf = gd_buffer(q, g.vec(6), 1.0, 4);
  Vec cref = make_cref(CRef::uniform, 4);
  auto big = rna(buf, 0.0, 1e8, cref);
  CHECK((big.c - cref).norm() <= 1e-6);
  auto last = rna(buf, 0.0, 1e8, make_cref(CRef::last, 4));
  CHECK((last.c - make_cref(CRef::last, 4)).norm() <= 1e-6);

  auto off = offline_na(buf);
  auto tiny = rna(buf, 0.0, 1e-12, cref);
  CHECK((tiny.c - off.c).norm() <= 1e-6 * std::max(1.0, off.c.norm()));
  CHECK(tiny.system_min_eig >= 1e-12 * (1 - 1e-6));

  CHECK_THROWS_AS(rna(buf, 0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(rna(buf, 0.0, 1.0, Vec::Ones(4)), InvalidArgument);
  CHECK_THROWS_AS(parse_cref("mean"), InvalidArgument);
}

TEST_CASE("online extrapolation") {
  Gen g(13);
  Oracle q = g.quadratic(3, 0.05, 1.0);
  Vec x0 = g.vec(3);
  OnlineOptions o;
  o.memory = 4;
  o.lambda = 1e-10;
  Trace t = online_rna(q, x0, 8, o);
  double best = kInf;
  for (const auto& r : t.records) best = std::min(best, r.grad_norm);
  CHECK(best <= 1e-8);

  OnlineOptions m1;
  m1.memory = 1;
  m1.h = 0.7;
  Trace a = online_rna(q, x0, 20, m1);
  Trace b = gradient_descent(q, 0.7, x0, 20);
  CHECK(testing_support::max_row_dev(a, b) < 1e-14);

  Trace s = online_rna(q, q.optimum->x, 5, o);
  for (const auto& r : s.records) CHECK(r.dist_opt < 1e-14);
}

TEST_CASE("online safeguards") {
  Oracle h = make_huber(0.05, 1.0, 8);
  Gen g(17);
  Vec x0 = g.vec(8, 2.0);
  OnlineOptions o;
  o.safeguard = Safeguard::descent;
  Trace t = online_rna(h, x0, 40, o);
  // an accepted step always improves on the buffered values, a rejected one is a plain gradient step
  for (std::size_t k = 1; k < t.records.size(); ++k)
    if (t.records[k].flagged) {
      Vec expect = t.records[k - 1].x - h.gradient(t.records[k - 1].x);
      CHECK((t.records[k].x - expect).norm() < 1e-14);
    }
  CHECK(t.back().f_gap < t.records[0].f_gap);

  o.safeguard = Safeguard::linesearch;
  Trace ls = online_rna(h, x0, 40, o);
  CHECK(ls.back().f_gap < ls.records[0].f_gap);
  CHECK_THROWS_AS(parse_safeguard("maybe"), InvalidArgument);
}

TEST_CASE("proximal extrapolation") {
  Gen g(19);
  Oracle q = g.quadratic(4, 0.05, 1.0);
  Vec x0 = g.vec(4);
  CompositeProblem smooth = smooth_problem(q);
  ProxRnaOptions po;
  po.gamma = 1.0;
  Trace a = prox_rna(smooth, x0, 15, po);
  OnlineOptions oo;
  oo.h = 1.0;
  Trace b = online_rna(q, x0, 15, oo);
  CHECK(testing_support::max_row_dev(a, b) < 1e-9);

  CompositeProblem las = testing_support::lasso(g, 5, 0.0, 1.0, 0.1);
  Vec y0 = g.vec(5);
  const int N = 50;
  Trace t = prox_rna(las, y0, N);
  Vec x = y0;
  for (int k = 0; k < N; ++k) x = las.h.prox(x - las.f.gradient(x) / las.f.params.L, 1.0 / las.f.params.L);
  CHECK(t.back().f <= las.F(x) + 1e-12);

  Trace s = prox_rna(las, las.optimum->x, 6);
  for (std::size_t k = 1; k < s.records.size(); ++k) CHECK(s.records[k].dist_opt < 1e-9);
}

TEST_CASE("weights always sum to one") {
  Gen g(23);
  for (int trial = 0; trial < 20; ++trial) {
    Oracle q = g.quadratic(g.integer(2, 10), 0.01, 1.0);
    PairBuffer buf = gd_buffer(q, g.vec(q.dim), 1.0, g.integer(1, 6));
    const double lam = g.log_uniform(1e-10, 1.0);
    auto r = rna(buf, 0.5, lam);
    CHECK(std::abs(r.c.sum() - 1.0) <= 1e-12);
    CHECK(r.system_min_eig >= lam * (1 - 1e-9));
    try {
      auto o = offline_na(buf);
      CHECK(std::abs(o.c.sum() - 1.0) <= 1e-12);
    } catch (const SingularSystem&) {
    }
  }
}

TEST_CASE("gram conditioning grows with the window") {
  Gen g(29);
  Oracle q = g.quadratic(20, 1e-3, 1.0);
  Vec x0 = g.vec(20);
  auto c3 = offline_na(gd_buffer(q, x0, 1.0, 3)).gram_cond;
  double c8 = kInf;
  try {
    c8 = offline_na(gd_buffer(q, x0, 1.0, 8)).gram_cond;
  } catch (const SingularSystem&) {
  }
  CHECK(c8 > c3);
}
