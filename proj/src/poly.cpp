#include "accel/poly.hpp"

#include "accel/momentum.hpp"
#include "accel/record.hpp"

namespace accel {

namespace {

double dist0(const Oracle& f, const Vec& x0) {
  return f.optimum ? (x0 - f.optimum->x).norm() : kNaN;
}

void require_strongly_convex(const ClassParams& p, const char* who) {
  if (!(p.mu > 0)) throw InvalidArgument(std::string(who) + ": requires mu > 0");
  require(p.valid(), std::string(who) + ": need 0 <= mu < L");
}

}  // namespace

Trace gradient_descent(const Oracle& f, double gamma, const Vec& x0, int N) {
  require(gamma > 0, "gradient_descent: step must be positive");
  require(N >= 0, "gradient_descent: N must be >= 0");
  Stopwatch clock;
  Trace t;
  t.method = "gd";
  t.num["gamma"] = gamma;
  t.num["L"] = f.params.L;
  t.num["mu"] = f.params.mu;
  t.num["N"] = N;

  Vec x = x0;
  std::int64_t calls = 0;
  Record r0 = make_record(0, x, f);
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  for (int k = 1; k <= N; ++k) {
    Vec g = f.gradient(x);
    ++calls;
    Vec xn = x - gamma * g;
    guard_finite(xn, t, "gradient_descent");
    x = xn;
    Record r = make_record(k, x, f);
    r.y = t.records.back().x;
    r.grad_calls = calls;
    r.wall_ns = clock.ns();
    if (!std::isfinite(r.f)) throw Diverged("gradient_descent: non-finite value", std::move(t));
    t.records.push_back(std::move(r));
  }
  // bound for gamma <= 1/L (potential chain with A_k = k)
  double R = dist0(f, x0);
  if (N >= 1 && gamma * f.params.L <= 1.0 + 1e-15) {
    t.num["bound"] = R * R / (2.0 * gamma * N);
    t.tag["bound_on"] = "f_gap";
  }
  return t;
}

std::vector<double> chebyshev_deltas(const ClassParams& p, int N) {
  require_strongly_convex(p, "chebyshev_deltas");
  std::vector<double> d;
  if (N <= 0) return d;
  const double L = p.L, mu = p.mu;
  d.push_back((L - mu) / (L + mu));
  const double c = 2.0 * (L + mu) / (L - mu);
  for (int k = 2; k <= N; ++k) d.push_back(1.0 / (c - d.back()));
  return d;
}

double chebyshev_xi(const ClassParams& p) {
  const double s = std::sqrt(p.kappa());
  return (s + 1.0) / (s - 1.0);
}

double chebyshev_bound(const ClassParams& p, int N) {
  const double xi = chebyshev_xi(p);
  return 2.0 / (std::pow(xi, N) + std::pow(xi, -N));
}

Trace chebyshev(const ClassParams& p, const Oracle& f, const Vec& x0, int N) {
  require_strongly_convex(p, "chebyshev");
  require(N >= 0, "chebyshev: N must be >= 0");
  Stopwatch clock;
  Trace t;
  t.method = "chebyshev";
  t.num["L"] = p.L;
  t.num["mu"] = p.mu;
  t.num["N"] = N;
  const double L = p.L, mu = p.mu;
  auto delta = chebyshev_deltas(p, N);

  Vec x_prev = x0, x = x0;
  std::int64_t calls = 0;
  Record r0 = make_record(0, x, f);
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  for (int k = 1; k <= N; ++k) {
    Vec g = f.gradient(x);
    ++calls;
    Vec xn;
    if (k == 1) {
      xn = x - (2.0 / (L + mu)) * g;
    } else {
      const double dk = delta[k - 1];
      xn = x - (4.0 * dk / (L - mu)) * g + (1.0 - 2.0 * dk * (L + mu) / (L - mu)) * (x_prev - x);
    }
    guard_finite(xn, t, "chebyshev");
    x_prev = x;
    x = xn;
    Record r = make_record(k, x, f);
    r.y = x_prev;
    r.A = delta[k - 1];
    r.grad_calls = calls;
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
  }
  t.num["bound"] = chebyshev_bound(p, N) * dist0(f, x0);
  t.tag["bound_on"] = "dist";
  return t;
}

HeavyBallCoeffs heavy_ball_coeffs(const ClassParams& p) {
  require_strongly_convex(p, "heavy_ball");
  const double sL = std::sqrt(p.L), sm = std::sqrt(p.mu);
  HeavyBallCoeffs c;
  c.step = 4.0 / ((sL + sm) * (sL + sm));
  c.delta_inf = (sL - sm) / (sL + sm);
  c.momentum = c.delta_inf * c.delta_inf;
  return c;
}

Trace heavy_ball(const ClassParams& p, const Oracle& f, const Vec& x0, int N) {
  auto c = heavy_ball_coeffs(p);
  require(N >= 0, "heavy_ball: N must be >= 0");
  Stopwatch clock;
  Trace t;
  t.method = "heavy_ball";
  t.num["L"] = p.L;
  t.num["mu"] = p.mu;
  t.num["N"] = N;
  t.num["step"] = c.step;
  t.num["momentum"] = c.momentum;

  Vec x_prev = x0, x = x0;
  std::int64_t calls = 0;
  Record r0 = make_record(0, x, f);
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  for (int k = 1; k <= N; ++k) {
    Vec g = f.gradient(x);
    ++calls;
    Vec xn = x - c.step * g + c.momentum * (x - x_prev);
    guard_finite(xn, t, "heavy_ball");
    x_prev = x;
    x = xn;
    Record r = make_record(k, x, f);
    r.y = x_prev;
    r.grad_calls = calls;
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
  }
  return t;
}

Trace conjugate_gradient_quadratic(const Oracle& f, const Vec& x0, int N) {
  if (!f.quad) throw Unsupported("conjugate_gradient_quadratic: oracle is not a quadratic");
  require(N >= 0, "conjugate_gradient_quadratic: N must be >= 0");
  Stopwatch clock;
  Trace t;
  t.method = "cg";
  t.num["L"] = f.params.L;
  t.num["mu"] = f.params.mu;
  t.num["N"] = N;

  const QuadData& q = *f.quad;
  Vec x = x0;
  Vec r = -f.gradient(x);
  std::int64_t calls = 1;
  Vec p = r;
  double rr = r.squaredNorm();
  const double rr0 = rr;
  int stop = N;
  bool done = rr == 0.0;
  if (done) stop = 0;

  Record r0 = make_record(0, x, f);
  r0.grad_calls = calls;
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  for (int k = 1; k <= N; ++k) {
    if (!done) {
      Vec Hp = q.apply(p);
      ++calls;
      double pHp = p.dot(Hp);
      if (!(pHp > 0)) {
        done = true;
        stop = k - 1;
      } else {
        double alpha = rr / pHp;
        x += alpha * p;
        r -= alpha * Hp;
        double rr_new = r.squaredNorm();
        guard_finite(x, t, "conjugate_gradient_quadratic");
        if (rr_new <= 1e-30 * rr0) {
          done = true;
          stop = k;
        }
        p = r + (rr_new / rr) * p;
        rr = rr_new;
      }
    }
    Record rec = make_record(k, x, f);
    rec.y = t.records.back().x;
    rec.grad_calls = calls;
    rec.wall_ns = clock.ns();
    t.records.push_back(std::move(rec));
  }
  t.num["terminated_at"] = done ? stop : N;
  if (N >= 1) {
    auto th = theta_schedule(N);
    double R = dist0(f, x0);
    t.num["bound"] = f.params.L * R * R / (2.0 * th[N] * th[N]);
    t.tag["bound_on"] = "f_gap";
  }
  return t;
}

}  // namespace accel
