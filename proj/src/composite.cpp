#include "accel/composite.hpp"

#include "accel/record.hpp"
#include "stepper.hpp"

#include <algorithm>

namespace accel {

BacktrackMode parse_backtrack_mode(const std::string& s) {
  if (s == "monotone") return BacktrackMode::monotone;
  if (s == "reset") return BacktrackMode::reset;
  if (s == "decrease") return BacktrackMode::decrease;
  throw InvalidArgument("unknown backtracking mode: " + s);
}

std::string to_string(BacktrackMode m) {
  switch (m) {
    case BacktrackMode::monotone: return "monotone";
    case BacktrackMode::reset: return "reset";
    case BacktrackMode::decrease: return "decrease";
  }
  return "?";
}

double composite_bound(double mu, double L, double L0, double alpha, int N, double R) {
  if (N < 1 || !std::isfinite(R)) return kNaN;
  const double ell = std::max(alpha * L, L0);
  double b = 2.0 / (double(N) * N);
  if (mu > 0) b = std::min(b, std::pow(1.0 - std::sqrt(mu / ell), N));
  return b * ell * R * R;
}

namespace detail {

namespace {

// quadratic upper model check with a few ulps of room so exact L is never rejected
bool sufficient_decrease(double fy, double fx, const Vec& g, const Vec& d, double Lt) {
  const double lin = g.dot(d);
  const double quad = 0.5 * Lt * d.squaredNorm();
  const double room = 8.0 * std::numeric_limits<double>::epsilon() *
                      (std::abs(fy) + std::abs(lin) + quad + std::abs(fx));
  return fx <= fy + lin + quad + room;
}

}  // namespace

// shared state for the two backtracking schemes; `prox_on_z` picks the variant
class BacktrackStepper : public Stepper {
 public:
  BacktrackStepper(const CompositeProblem& p, const Vec& x0, const BacktrackOptions& opt, bool prox_on_z)
      : p_(p), opt_(opt), x_(x0), z_(x0), prox_on_z_(prox_on_z) {
    L0_ = std::isnan(opt.L0) ? p.f.params.L : opt.L0;
    beta_ = std::isnan(opt.beta) ? 1.0 / opt.alpha : opt.beta;
    require(L0_ > 0 && std::isfinite(L0_), "backtracking: L0 must be positive");
    require(opt.alpha > 1, "backtracking: alpha must exceed 1");
    require(beta_ > 0 && beta_ <= 1, "backtracking: beta must lie in (0,1]");
    require(opt.mu >= 0, "backtracking: mu must be >= 0");
    require(opt.mu < L0_, "backtracking: mu must be below L0");
    require(opt.max_doublings >= 1, "backtracking: max_doublings must be >= 1");
    if (prox_on_z) require(p.feasible(x0), "prox_agm: x0 must lie in dom h");
    Lt_ = L0_;
  }

  void step() override {
    const double mu = opt_.mu;
    double Lt = Lt_;
    if (started_) {
      if (opt_.mode == BacktrackMode::reset) Lt = L0_;
      else if (opt_.mode == BacktrackMode::decrease) Lt = std::max(beta_ * Lt_, L0_);
    }
    started_ = true;
    for (int trial = 0;; ++trial) {
      if (trial > opt_.max_doublings || !std::isfinite(Lt))
        throw RunawayL("backtracking: smoothness estimate kept growing (" + std::to_string(Lt) + ")");
      const double s = Lt * B_;
      const double Bn = (2.0 * s + 1.0 + std::sqrt(4.0 * s + 4.0 * mu * Lt * B_ * B_ + 1.0)) / (2.0 * (Lt - mu));
      const double tau = B_ == 0.0 ? 1.0 : (Bn - B_) * (1.0 + mu * B_) / (Bn + 2.0 * mu * B_ * Bn - mu * B_ * B_);
      const double delta = Lt * (Bn - B_) / (1.0 + mu * Bn);
      const double q = mu / Lt;
      Vec y = x_ + tau * (z_ - x_);
      Vec g = p_.f.gradient(y);
      ++grad_calls_;
      Vec xn, zn;
      if (!prox_on_z_) {
        xn = p_.h.prox(y - g / Lt, 1.0 / Lt);
        ++prox_calls_;
        zn = (1.0 - q * delta) * z_ + q * delta * y + delta * (xn - y);
      } else {
        zn = p_.h.prox((1.0 - q * delta) * z_ + q * delta * y - (delta / Lt) * g, delta / Lt);
        ++prox_calls_;
        xn = (B_ / Bn) * x_ + (1.0 - B_ / Bn) * zn;
      }
      const double fy = p_.f.value(y), fx = p_.f.value(xn);
      if (std::isfinite(fx) && sufficient_decrease(fy, fx, g, xn - y, Lt)) {
        x_ = std::move(xn);
        z_ = std::move(zn);
        y_ = std::move(y);
        B_ = Bn;
        Lt_ = Lt;
        return;
      }
      ++wasted_;
      Lt *= opt_.alpha;
    }
  }
  const Vec& x() const override { return x_; }
  void set_x(const Vec& v) override { x_ = v; }
  void fill(Record& r) const override {
    r.y = y_;
    r.z = z_;
    r.A = B_;
    r.Lk = Lt_;
    r.grad_calls = grad_calls_;
    r.prox_calls = prox_calls_;
  }
  std::int64_t wasted() const { return wasted_; }
  double L0() const { return L0_; }

 private:
  const CompositeProblem& p_;
  BacktrackOptions opt_;
  Vec x_, z_, y_;
  bool prox_on_z_;
  double L0_ = 1.0, beta_ = 0.5, Lt_ = 1.0, B_ = 0.0;
  bool started_ = false;
  std::int64_t grad_calls_ = 0, prox_calls_ = 0, wasted_ = 0;
};

std::unique_ptr<Stepper> fista_stepper(const CompositeProblem& p, const Vec& x0, const BacktrackOptions& opt) {
  return std::make_unique<BacktrackStepper>(p, x0, opt, false);
}
std::unique_ptr<Stepper> prox_agm_stepper(const CompositeProblem& p, const Vec& x0, const BacktrackOptions& opt) {
  return std::make_unique<BacktrackStepper>(p, x0, opt, true);
}

}  // namespace detail

namespace {

Trace run_backtracking(const char* name, const CompositeProblem& p, const Vec& x0, int N,
                       const BacktrackOptions& opt, bool prox_on_z) {
  require(N >= 0, std::string(name) + ": N must be >= 0");
  detail::BacktrackStepper s(p, x0, opt, prox_on_z);
  Stopwatch clock;
  Trace t;
  t.method = name;
  t.tag["mode"] = to_string(opt.mode);
  t.num["L"] = p.f.params.L;
  t.num["mu"] = p.f.params.mu;
  t.num["mu_method"] = opt.mu;
  t.num["L0"] = s.L0();
  t.num["alpha"] = opt.alpha;
  t.num["N"] = N;

  Record r0 = make_record(0, x0, p);
  s.fill(r0);
  r0.y = Vec();
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  for (int k = 1; k <= N; ++k) {
    try {
      s.step();
    } catch (RunawayL&) {
      t.num["wasted"] = double(s.wasted());
      throw;
    }
    guard_finite(s.x(), t, name);
    Record r = make_record(k, s.x(), p);
    s.fill(r);
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
  }
  t.num["wasted"] = double(s.wasted());
  const double R = p.optimum ? (x0 - p.optimum->x).norm() : kNaN;
  double b = composite_bound(opt.mu, p.f.params.L, s.L0(), opt.alpha, N, R);
  if (!std::isnan(b)) {
    t.num["bound"] = b;
    t.tag["bound_on"] = "f_gap";
  }
  return t;
}

}  // namespace

Trace fista(const CompositeProblem& p, const Vec& x0, int N, const BacktrackOptions& opt) {
  return run_backtracking("fista", p, x0, N, opt, false);
}

Trace prox_agm(const CompositeProblem& p, const Vec& x0, int N, const BacktrackOptions& opt) {
  return run_backtracking("prox_agm", p, x0, N, opt, true);
}

}  // namespace accel
