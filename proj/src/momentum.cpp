#include "accel/momentum.hpp"

#include "accel/record.hpp"
#include "stepper.hpp"

#include <algorithm>

namespace accel {

namespace {

double dist0(const std::optional<Optimum>& opt, const Vec& x0) {
  return opt ? (x0 - opt->x).norm() : kNaN;
}

void base_meta(Trace& t, const Oracle& f, int N) {
  t.num["L"] = f.params.L;
  t.num["mu"] = f.params.mu;
  t.num["N"] = N;
}

// strongly convex FGM coefficients at step k (q = 0 reduces to the convex ones)
struct FgmCoef {
  double tau, delta;
};
FgmCoef fgm_coef(double A, double An, double q) {
  FgmCoef c;
  c.tau = A == 0.0 ? 1.0 : (An - A) * (1.0 + q * A) / (An + 2.0 * q * A * An - q * A * A);
  c.delta = (An - A) / (1.0 + q * An);
  return c;
}

double next_A(double A, double q) {
  return (2.0 * A + 1.0 + std::sqrt(4.0 * A + 4.0 * q * A * A + 1.0)) / (2.0 * (1.0 - q));
}

}  // namespace

std::vector<double> theta_schedule(int N) {
  require(N >= 1, "theta_schedule: N must be >= 1");
  std::vector<double> th(N + 1);
  th[0] = 1.0;
  for (int k = 0; k + 1 < N; ++k) th[k + 1] = 0.5 * (1.0 + std::sqrt(4.0 * th[k] * th[k] + 1.0));
  th[N] = 0.5 * (1.0 + std::sqrt(8.0 * th[N - 1] * th[N - 1] + 1.0));
  return th;
}

std::vector<double> fgm_A(int n, double q) {
  require(q >= 0 && q < 1, "fgm_A: q must lie in [0,1)");
  std::vector<double> A(n + 1, 0.0);
  for (int k = 0; k < n; ++k) A[k + 1] = next_A(A[k], q);
  return A;
}

std::vector<double> item_A(int n, double q) {
  require(q >= 0 && q < 1, "item_A: q must lie in [0,1)");
  std::vector<double> A(n + 1, 0.0);
  const double s = (1.0 - q) * (1.0 - q);
  for (int k = 0; k < n; ++k)
    A[k + 1] = ((1.0 + q) * A[k] + 2.0 * (1.0 + std::sqrt((1.0 + A[k]) * (1.0 + q * A[k])))) / s;
  return A;
}

// ---------------------------------------------------------------- OGM

Trace ogm(const Oracle& f, const Vec& x0, int N, int form) {
  require(form == 1 || form == 2, "ogm: form must be I or II");
  require(N >= 0, "ogm: N must be >= 0");
  Stopwatch clock;
  Trace t;
  t.method = "ogm";
  t.tag["form"] = form == 1 ? "I" : "II";
  base_meta(t, f, N);
  const double L = f.params.L;

  Record r0 = make_record(0, x0, f);
  r0.z = x0;
  r0.A = 1.0;
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  if (N == 0) return t;

  auto th = theta_schedule(N);
  std::int64_t calls = 0;
  Vec x = x0, z = x0, y = x0;
  for (int k = 0; k < N; ++k) {
    Vec g = f.gradient(y);
    ++calls;
    Vec xn = y - g / L;
    Vec yn, zn;
    if (form == 1) {
      zn = z - (2.0 * th[k] / L) * g;
      yn = (1.0 - 1.0 / th[k + 1]) * xn + zn / th[k + 1];
    } else {
      yn = xn + ((th[k] - 1.0) / th[k + 1]) * (xn - x) + (th[k] / th[k + 1]) * (xn - y);
      zn = th[k + 1] * yn - (th[k + 1] - 1.0) * xn;  // recovered auxiliary sequence
    }
    guard_finite(yn, t, "ogm");
    Record r = make_record(k + 1, yn, f);
    r.y = y;
    r.z = zn;
    r.A = th[k + 1];
    r.grad_calls = calls;
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
    x = xn;
    y = yn;
    z = zn;
  }
  double R = dist0(f.optimum, x0);
  t.num["bound"] = L * R * R / (2.0 * th[N] * th[N]);
  t.tag["bound_on"] = "f_gap";
  return t;
}

// ---------------------------------------------------------------- FGM

namespace detail {

class FgmStepper : public Stepper {
 public:
  FgmStepper(const Oracle& f, const Vec& x0, double mu) : f_(f), x_(x0), z_(x0), y_(), q_(mu / f.params.L) {
    require(mu >= 0 && mu < f.params.L, "fgm: need 0 <= mu < L");
  }
  void step() override {
    const double L = f_.params.L;
    double An = next_A(A_, q_);
    auto c = fgm_coef(A_, An, q_);
    y_ = x_ + c.tau * (z_ - x_);
    Vec g = f_.gradient(y_);
    ++calls_;
    x_ = y_ - g / L;
    z_ = (1.0 - q_ * c.delta) * z_ + q_ * c.delta * y_ - (c.delta / L) * g;
    A_ = An;
  }
  const Vec& x() const override { return x_; }
  void set_x(const Vec& v) override { x_ = v; }
  void fill(Record& r) const override {
    r.y = y_;
    r.z = z_;
    r.A = A_;
    r.Lk = f_.params.L;
    r.grad_calls = calls_;
  }

 private:
  const Oracle& f_;
  Vec x_, z_, y_;
  double q_;
  double A_ = 0.0;
  std::int64_t calls_ = 0;
};

class ConstantMomentumStepper : public Stepper {
 public:
  ConstantMomentumStepper(const Oracle& f, const Vec& x0) : f_(f), x_(x0), z_(x0) {
    if (!(f.params.mu > 0)) throw InvalidArgument("constant_momentum: requires mu > 0");
    require(f.params.valid(), "constant_momentum: need mu < L");
    sq_ = std::sqrt(f.params.q());
  }
  void step() override {
    const double L = f_.params.L, mu = f_.params.mu;
    y_ = x_ + (sq_ / (1.0 + sq_)) * (z_ - x_);
    Vec g = f_.gradient(y_);
    ++calls_;
    x_ = y_ - g / L;
    z_ = (1.0 - sq_) * z_ + sq_ * (y_ - g / mu);
    ++k_;
  }
  const Vec& x() const override { return x_; }
  void set_x(const Vec& v) override { x_ = v; }
  void fill(Record& r) const override {
    r.y = y_;
    r.z = z_;
    r.A = std::pow(1.0 - sq_, -k_);
    r.Lk = f_.params.L;
    r.grad_calls = calls_;
  }

 private:
  const Oracle& f_;
  Vec x_, z_, y_;
  double sq_ = 0.0;
  int k_ = 0;
  std::int64_t calls_ = 0;
};

std::unique_ptr<Stepper> fgm_stepper(const Oracle& f, const Vec& x0, double mu) {
  return std::make_unique<FgmStepper>(f, x0, mu);
}
std::unique_ptr<Stepper> constant_momentum_stepper(const Oracle& f, const Vec& x0) {
  return std::make_unique<ConstantMomentumStepper>(f, x0);
}

}  // namespace detail

namespace {

Trace run_stepper(detail::Stepper& s, const Oracle& f, int N, Trace t, const char* who) {
  Stopwatch clock;
  Record r0 = make_record(0, s.x(), f);
  s.fill(r0);
  r0.y = Vec();
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  for (int k = 1; k <= N; ++k) {
    s.step();
    guard_finite(s.x(), t, who);
    Record r = make_record(k, s.x(), f);
    s.fill(r);
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
  }
  return t;
}

double fgm_bound(double L, double q, int N, double R) {
  if (N < 1) return kNaN;
  double b = 2.0 / (double(N) * N);
  if (q > 0) b = std::min(b, std::pow(1.0 - std::sqrt(q), N));
  return b * L * R * R;
}

}  // namespace

Trace fgm(const Oracle& f, const Vec& x0, int N, int form, double mu) {
  require(form >= 1 && form <= 3, "fgm: form must be I, II or III");
  require(N >= 0, "fgm: N must be >= 0");
  require(mu >= 0 && mu < f.params.L, "fgm: need 0 <= mu < L");
  Trace t;
  t.method = "fgm";
  t.tag["form"] = form == 1 ? "I" : form == 2 ? "II" : "III";
  base_meta(t, f, N);
  t.num["mu_method"] = mu;
  const double L = f.params.L, q = mu / L;
  const double R = dist0(f.optimum, x0);

  if (form == 1) {
    auto s = detail::fgm_stepper(f, x0, mu);
    t = run_stepper(*s, f, N, std::move(t), "fgm");
  } else {
    Stopwatch clock;
    auto A = fgm_A(N + 1, q);
    std::int64_t calls = 0;
    Record r0 = make_record(0, x0, f);
    r0.z = x0;
    r0.A = 0.0;
    r0.Lk = L;
    r0.wall_ns = clock.ns();
    t.records.push_back(r0);
    Vec x = x0, y = x0, z = x0;
    for (int k = 0; k < N; ++k) {
      if (form == 3) y = x + fgm_coef(A[k], A[k + 1], q).tau * (z - x);
      Vec g = f.gradient(y);
      ++calls;
      Vec xn, zn, yn;
      if (form == 2) {
        xn = y - g / L;
        const double beta = (A[k + 2] - A[k + 1]) * (A[k + 1] * (1.0 - q) - A[k] - 1.0) /
                            (A[k + 2] * (2.0 * q * A[k + 1] + 1.0) - q * A[k + 1] * A[k + 1]);
        yn = xn + beta * (xn - x);
        zn = xn + (yn - xn) / fgm_coef(A[k + 1], A[k + 2], q).tau;
      } else {
        auto c = fgm_coef(A[k], A[k + 1], q);
        zn = (1.0 - q * c.delta) * z + q * c.delta * y - (c.delta / L) * g;
        xn = (A[k] / A[k + 1]) * x + (1.0 - A[k] / A[k + 1]) * zn;
      }
      guard_finite(xn, t, "fgm");
      Record r = make_record(k + 1, xn, f);
      r.y = y;
      r.z = zn;
      r.A = A[k + 1];
      r.Lk = L;
      r.grad_calls = calls;
      r.wall_ns = clock.ns();
      t.records.push_back(std::move(r));
      x = xn;
      z = zn;
      if (form == 2) y = yn;
    }
  }
  t.num["bound"] = fgm_bound(L, q, N, R);
  t.tag["bound_on"] = "f_gap";
  return t;
}

Trace constant_momentum(const Oracle& f, const Vec& x0, int N, int form) {
  require(form == 1 || form == 2, "constant_momentum: form must be I or II");
  require(N >= 0, "constant_momentum: N must be >= 0");
  if (!(f.params.mu > 0)) throw InvalidArgument("constant_momentum: requires mu > 0");
  Trace t;
  t.method = "constant_momentum";
  t.tag["form"] = form == 1 ? "I" : "II";
  base_meta(t, f, N);
  const double L = f.params.L, mu = f.params.mu, sq = std::sqrt(mu / L);

  if (form == 1) {
    auto s = detail::constant_momentum_stepper(f, x0);
    t = run_stepper(*s, f, N, std::move(t), "constant_momentum");
  } else {
    Stopwatch clock;
    const double beta = (1.0 - sq) / (1.0 + sq);
    const double c = sq / (1.0 + sq);
    std::int64_t calls = 0;
    Record r0 = make_record(0, x0, f);
    r0.z = x0;
    r0.A = 1.0;
    r0.wall_ns = clock.ns();
    t.records.push_back(r0);
    Vec x = x0, y = x0;
    for (int k = 0; k < N; ++k) {
      Vec g = f.gradient(y);
      ++calls;
      Vec xn = y - g / L;
      Vec yn = xn + beta * (xn - x);
      guard_finite(xn, t, "constant_momentum");
      Record r = make_record(k + 1, xn, f);
      r.y = y;
      r.z = xn + (yn - xn) / c;
      r.A = std::pow(1.0 - sq, -(k + 1));
      r.grad_calls = calls;
      r.wall_ns = clock.ns();
      t.records.push_back(std::move(r));
      x = xn;
      y = yn;
    }
  }
  double R = dist0(f.optimum, x0);
  if (f.optimum) {
    double gap0 = f.value(x0) - f.optimum->f;
    t.num["bound"] = std::pow(1.0 - sq, N) * (gap0 + 0.5 * mu * R * R);
    t.tag["bound_on"] = "f_gap";
  }
  return t;
}

// ---------------------------------------------------------------- ITEM / TMM

Trace item(const Oracle& f, const Vec& x0, int N) {
  require(N >= 0, "item: N must be >= 0");
  require(f.params.valid(), "item: need 0 <= mu < L");
  Stopwatch clock;
  Trace t;
  t.method = "item";
  base_meta(t, f, N);
  const double L = f.params.L, q = f.params.q();
  auto A = item_A(N, q);

  std::int64_t calls = 0;
  Record r0 = make_record(0, x0, f);
  r0.z = x0;
  r0.A = 0.0;
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  Vec x = x0, z = x0;
  for (int k = 0; k < N; ++k) {
    // A_0 = 0 gives tau_0 = 1, handled without the ratio
    const double tau = A[k] == 0.0 ? 1.0 : 1.0 - A[k] / ((1.0 - q) * A[k + 1]);
    const double delta = 0.5 * ((1.0 - q) * (1.0 - q) * A[k + 1] - (1.0 + q) * A[k]) / (1.0 + q + q * A[k]);
    Vec y = x + tau * (z - x);
    Vec g = f.gradient(y);
    ++calls;
    x = y - g / L;
    z = (1.0 - q * delta) * z + q * delta * y - (delta / L) * g;
    guard_finite(z, t, "item");
    Record r = make_record(k + 1, x, f);
    r.y = y;
    r.z = z;
    r.A = A[k + 1];
    r.grad_calls = calls;
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
  }
  double R = dist0(f.optimum, x0);
  t.num["bound"] = R * R / (1.0 + q * A[N]);
  t.tag["bound_on"] = "z_dist_sq";
  return t;
}

Trace tmm(const Oracle& f, const Vec& x0, int N) {
  if (!(f.params.mu > 0)) throw InvalidArgument("tmm: requires mu > 0");
  require(f.params.valid(), "tmm: need mu < L");
  require(N >= 0, "tmm: N must be >= 0");
  Stopwatch clock;
  Trace t;
  t.method = "tmm";
  base_meta(t, f, N);
  const double L = f.params.L, mu = f.params.mu, q = mu / L, sq = std::sqrt(q);
  const double beta = (1.0 - sq) / (1.0 + sq);

  Record r0 = make_record(0, x0, f);
  r0.y = x0;  // y_{-1}
  r0.z = x0;
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  if (N == 0) return t;

  Vec y_prev = x0, z = x0;
  Vec g_prev = f.gradient(y_prev);
  std::int64_t calls = 1;
  for (int k = 0; k < N; ++k) {
    Vec y = beta * (y_prev - g_prev / L) + (1.0 - beta) * z;
    Vec g = f.gradient(y);
    ++calls;
    z = sq * (y - g / mu) + (1.0 - sq) * z;
    guard_finite(z, t, "tmm");
    Record r = make_record(k + 1, Vec(y - g / L), f);
    r.y = y;
    r.z = z;
    r.grad_calls = calls;
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
    y_prev = y;
    g_prev = g;
  }
  if (f.optimum) {
    const Vec& xs = f.optimum->x;
    double fs = f.optimum->f;
    Vec g0 = f.gradient(x0);
    double V0 = f.value(x0) - fs - g0.squaredNorm() / (2 * L) -
                mu / (2 * (1 - q)) * (x0 - xs - g0 / L).squaredNorm() + mu / (1 - q) * (x0 - xs).squaredNorm();
    t.num["bound"] = std::pow(1.0 - sq, 2.0 * N) * V0 * (1.0 - q) / mu;
    t.tag["bound_on"] = "z_dist_sq";
  }
  return t;
}

// ---------------------------------------------------------------- Bregman AGM

Dgf parse_dgf(const std::string& s) {
  if (s == "euclidean") return Dgf::euclidean;
  if (s == "entropy") return Dgf::entropy;
  throw InvalidArgument("unknown distance-generating function: " + s);
}

double bregman_divergence(Dgf w, const Vec& x, const Vec& z) {
  if (w == Dgf::euclidean) return 0.5 * (x - z).squaredNorm();
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] > 0) s += x[i] * std::log(x[i] / z[i]);
    s += z[i] - x[i];
  }
  return s;
}

namespace detail {

class BregmanStepper : public Stepper {
 public:
  BregmanStepper(const CompositeProblem& p, Dgf w, const Vec& x0) : p_(p), w_(w), x_(x0), z_(x0) {
    if (w == Dgf::entropy) {
      require(p.h.kind == "simplex", "bregman_agm: entropy mode needs the simplex indicator as h");
      require(x0.minCoeff() > 0, "bregman_agm: entropy mode needs a strictly positive x0");
      require(std::abs(x0.sum() - 1.0) <= 1e-12, "bregman_agm: x0 must lie on the simplex");
    } else {
      require(p.feasible(x0), "bregman_agm: x0 must lie in dom h");
    }
  }
  void step() override {
    const double L = p_.f.params.L;
    const double a = 0.5 * (1.0 + std::sqrt(4.0 * A_ + 1.0));
    const double An = A_ + a;
    const double w = A_ / An;
    y_ = w * x_ + (1.0 - w) * z_;
    Vec g = p_.f.gradient(y_);
    ++grad_calls_;
    if (w_ == Dgf::euclidean) {
      z_ = p_.h.prox(z_ - (a / L) * g, a / L);
      ++prox_calls_;
    } else {
      // z+ proportional to z * exp(-(a/L) g), in log space
      Vec lz = z_.array().log().matrix() - (a / L) * g;
      lz.array() -= lz.maxCoeff();
      Vec e = lz.array().exp().matrix();
      z_ = e / e.sum();
    }
    x_ = w * x_ + (1.0 - w) * z_;
    A_ = An;
  }
  const Vec& x() const override { return x_; }
  void set_x(const Vec& v) override { x_ = v; }
  void fill(Record& r) const override {
    r.y = y_;
    r.z = z_;
    r.A = A_;
    r.Lk = p_.f.params.L;
    r.grad_calls = grad_calls_;
    r.prox_calls = prox_calls_;
  }

 private:
  const CompositeProblem& p_;
  Dgf w_;
  Vec x_, z_, y_;
  double A_ = 0.0;
  std::int64_t grad_calls_ = 0, prox_calls_ = 0;
};

std::unique_ptr<Stepper> bregman_stepper(const CompositeProblem& p, Dgf w, const Vec& x0) {
  return std::make_unique<BregmanStepper>(p, w, x0);
}

}  // namespace detail

namespace {

Trace run_composite_stepper(detail::Stepper& s, const CompositeProblem& p, int N, Trace t, const char* who) {
  Stopwatch clock;
  Record r0 = make_record(0, s.x(), p);
  s.fill(r0);
  r0.y = Vec();
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  for (int k = 1; k <= N; ++k) {
    s.step();
    guard_finite(s.x(), t, who);
    Record r = make_record(k, s.x(), p);
    s.fill(r);
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
  }
  return t;
}

}  // namespace

Trace bregman_agm(const CompositeProblem& p, Dgf w, const Vec& x0, int N) {
  require(N >= 0, "bregman_agm: N must be >= 0");
  auto s = detail::bregman_stepper(p, w, x0);
  Trace t;
  t.method = "bregman_agm";
  t.tag["dgf"] = w == Dgf::euclidean ? "euclidean" : "entropy";
  base_meta(t, p.f, N);
  t = run_composite_stepper(*s, p, N, std::move(t), "bregman_agm");
  if (p.optimum && N >= 1) {
    t.num["bound"] = 4.0 * p.f.params.L * bregman_divergence(w, p.optimum->x, x0) / (double(N) * N);
    t.tag["bound_on"] = "f_gap";
  }
  return t;
}

// ---------------------------------------------------------------- monotone wrapper

Trace monotone_wrap(const std::string& method, const CompositeProblem& p, const Vec& x0, int N,
                    const MonotoneOptions& opt) {
  require(N >= 0, "monotone_wrap: N must be >= 0");
  if (method == "ogm" || method == "item" || method == "tmm")
    throw InvalidArgument("monotone_wrap: " + method + " has no monotone variant");

  std::unique_ptr<detail::Stepper> s;
  const double R = dist0(p.optimum, x0);
  double bound = kNaN;
  if (method == "fgm" || method == "constant_momentum") {
    require(p.h.kind == "zero", "monotone_wrap: " + method + " needs a smooth problem");
    if (method == "fgm") {
      s = detail::fgm_stepper(p.f, x0, opt.mu);
      if (N >= 1) bound = fgm_bound(p.f.params.L, opt.mu / p.f.params.L, N, R);
    } else {
      s = detail::constant_momentum_stepper(p.f, x0);
      if (p.optimum) {
        double sq = std::sqrt(p.f.params.q());
        bound = std::pow(1.0 - sq, N) * (p.F(x0) - p.optimum->f + 0.5 * p.f.params.mu * R * R);
      }
    }
  } else if (method == "fista" || method == "prox_agm") {
    BacktrackOptions bt = opt.backtrack;
    bt.mu = opt.mu;
    s = method == "fista" ? detail::fista_stepper(p, x0, bt) : detail::prox_agm_stepper(p, x0, bt);
    double L0 = std::isnan(bt.L0) ? p.f.params.L : bt.L0;
    if (N >= 1) bound = composite_bound(bt.mu, p.f.params.L, L0, bt.alpha, N, R);
  } else if (method == "bregman_agm") {
    s = detail::bregman_stepper(p, opt.dgf, x0);
    if (p.optimum && N >= 1)
      bound = 4.0 * p.f.params.L * bregman_divergence(opt.dgf, p.optimum->x, x0) / (double(N) * N);
  } else {
    throw InvalidArgument("monotone_wrap: unsupported method " + method);
  }

  Stopwatch clock;
  Trace t;
  t.method = "monotone";
  t.tag["inner"] = method;
  if (method == "bregman_agm") t.tag["dgf"] = opt.dgf == Dgf::euclidean ? "euclidean" : "entropy";
  base_meta(t, p.f, N);
  t.num["mu_method"] = opt.mu;

  Vec best = x0;
  double Fbest = p.F(x0);
  int kept = 0;
  Record r0 = make_record(0, best, p);
  s->fill(r0);
  r0.y = Vec();
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  for (int k = 1; k <= N; ++k) {
    s->set_x(best);
    s->step();
    guard_finite(s->x(), t, "monotone_wrap");
    double Fn = p.F(s->x());
    if (Fn <= Fbest) {
      best = s->x();
      Fbest = Fn;
    } else {
      ++kept;
    }
    Record r = make_record(k, best, p);
    s->fill(r);
    r.flagged = Fn > r.f;
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
  }
  t.num["kept_previous"] = kept;
  if (!std::isnan(bound)) {
    t.num["bound"] = bound;
    t.tag["bound_on"] = "f_gap";
  }
  return t;
}

}  // namespace accel
