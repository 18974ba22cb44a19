#include "accel/prox_outer.hpp"

#include "accel/record.hpp"
#include "numeric.hpp"

#include <algorithm>
#include <limits>
#include <optional>

namespace accel {

bool check_relative_error(const InexactProxCertificate& c) {
  const auto n = c.x_next.size();
  require(c.y.size() == n && c.g.size() == n && c.e.size() == n, "check_relative_error: dimension mismatch");
  require(c.delta >= 0, "check_relative_error: delta must be >= 0");
  Vec e = c.x_next - c.y + c.lambda * c.g;
  if ((e - c.e).norm() > 1e-10 * (1.0 + e.norm()))
    throw InconsistentCertificate("check_relative_error: stored residual does not match x - y + lambda g");
  const double rhs = c.delta * (c.x_next - c.y).norm();
  const double lhs = c.e.norm();
  return tolerance().ok(rhs - lhs, std::max(rhs, lhs));
}

SubproblemSolver exact_prox_solver(const Oracle& f) {
  return overshoot_solver(f, 1.0);
}

SubproblemSolver overshoot_solver(const Oracle& f, double s) {
  if (!f.has_prox()) throw Unsupported("prox solver: oracle has no proximal operator");
  return [&f, s](const Vec& y, double lambda) {
    ProxStep st;
    Vec p = f.prox(y, lambda);
    st.prox_calls = 1;
    st.x_next = s == 1.0 ? p : Vec(y + s * (p - y));
    if (f.has_gradient()) {
      st.g = f.gradient(st.x_next);
      st.grad_calls = 1;
    } else {
      st.g = (y - st.x_next) / lambda;  // exact only for s = 1
    }
    st.e = st.x_next - y + lambda * st.g;
    return st;
  };
}

double step_at(const std::vector<double>& lambdas, int i) {
  require(!lambdas.empty(), "step sequence is empty");
  if (lambdas.size() == 1) return lambdas[0];
  require(i < static_cast<int>(lambdas.size()), "step sequence shorter than the budget");
  return lambdas[i];
}

std::vector<double> geometric_steps(double lambda0, double ratio, int n) {
  std::vector<double> out(std::max(n, 1));
  double v = lambda0;
  for (auto& l : out) {
    l = v;
    v *= ratio;
  }
  return out;
}

namespace {

void check_steps(const std::vector<double>& lambdas, int N, const char* who) {
  for (int i = 0; i < N; ++i) {
    double l = step_at(lambdas, i);
    require(l >= 0 && std::isfinite(l), std::string(who) + ": steps must be finite and >= 0");
  }
}

}  // namespace

Trace ppa(const Oracle& f, const std::vector<double>& lambdas, const Vec& x0, int N) {
  if (!f.has_prox()) throw Unsupported("ppa: oracle has no proximal operator");
  require(N >= 0, "ppa: N must be >= 0");
  check_steps(lambdas, N, "ppa");
  Stopwatch clock;
  Trace t;
  t.method = "ppa";
  t.num["L"] = f.params.L;
  t.num["mu"] = f.params.mu;
  t.num["N"] = N;
  const double mu = f.params.mu;

  double A = 0.0, sum = 0.0, prod = 1.0;
  Vec x = x0;
  Record r0 = make_record(0, x, f);
  r0.A = 0.0;
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  for (int k = 0; k < N; ++k) {
    const double lam = step_at(lambdas, k);
    x = f.prox(x, lam);
    guard_finite(x, t, "ppa");
    A = A * (1.0 + lam * mu) + lam;
    sum += lam;
    prod *= 1.0 + lam * mu;
    Record r = make_record(k + 1, x, f);
    r.A = A;
    r.prox_calls = k + 1;
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
  }
  if (f.optimum && N >= 1) {
    const double R2 = (x0 - f.optimum->x).squaredNorm();
    t.num["bound"] = mu > 0 ? mu * R2 / (2.0 * (prod - 1.0)) : R2 / (2.0 * sum);
    t.tag["bound_on"] = "f_gap";
  }
  return t;
}

double accel_ppa_bound(const std::vector<double>& lambdas, double mu, int k, double R) {
  if (k < 1 || !std::isfinite(R)) return kNaN;
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += std::sqrt(step_at(lambdas, i));
  double b = 4.0 / (s * s);
  if (mu > 0) {
    double p = 1.0;
    for (int i = 1; i < k; ++i) {
      const double lm = step_at(lambdas, i) * mu;
      p *= 1.0 - std::sqrt(lm / (1.0 + lm));
    }
    b = std::min(b, p / step_at(lambdas, 0));
  }
  return 0.5 * b * R * R;
}

namespace {

// nullopt from the solver ends the run (budget exhausted)
using BudgetedSolver = std::function<std::optional<ProxStep>(const Vec& y, double lambda)>;

struct OuterRun {
  Trace trace;
  int outer = 0;
  std::int64_t grad_calls = 0, prox_calls = 0, inner_iters = 0;
};

void accel_outer(OuterRun& run, const Oracle& f, const BudgetedSolver& solver, const std::vector<double>& lambdas,
                 const Vec& x0, int N, const AccelPpaOptions& opt, bool stop_when_stationary) {
  Stopwatch clock;
  Trace& t = run.trace;
  const double mu = opt.mu;
  double A = 0.0;
  Vec x = x0, z = x0;
  Record r0 = make_record(0, x, f);
  r0.z = z;
  r0.A = 0.0;
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  for (int k = 0; k < N; ++k) {
    const double lam = step_at(lambdas, k);
    const double lm = lam * mu;
    const double An = A + 0.5 * (lam + 2.0 * A * lm +
                                 std::sqrt(4.0 * A * A * lm * (lm + 1.0) + 4.0 * A * lam * (lm + 1.0) + lam * lam));
    const double coef = An == 0.0 ? 1.0 : (An - A) * (A * mu + 1.0) / (An + 2.0 * mu * A * An - mu * A * A);
    Vec y = x + coef * (z - x);
    std::optional<ProxStep> st;
    try {
      st = solver(y, lam);
    } catch (ContractViolation&) {
      throw;
    } catch (Error& err) {
      throw InnerSolveError(std::string("inner solve failed: ") + err.what(), std::move(t));
    }
    if (!st) break;
    run.grad_calls += st->grad_calls;
    run.prox_calls += st->prox_calls;
    run.inner_iters += st->inner_iters;
    InexactProxCertificate cert{st->e, st->x_next, y, lam, st->g, opt.delta};
    bool ok;
    try {
      ok = check_relative_error(cert);
    } catch (InconsistentCertificate& err) {
      throw InnerSolveError(err.what(), std::move(t));
    }
    if (!ok) throw InnerSolveError("inner solve returned a point outside the error criterion", std::move(t));
    const double w = (An - A) / (1.0 + mu * An);
    z = z + mu * w * (st->x_next - z) - w * st->g;
    x = st->x_next;
    A = An;
    guard_finite(z, t, "accel_inexact_ppa");
    Record r = make_record(k + 1, x, f);
    r.y = y;
    r.z = z;
    r.A = A;
    r.grad_calls = run.grad_calls;
    r.prox_calls = run.prox_calls;
    r.inner_iters = run.inner_iters;
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
    ++run.outer;
    if (stop_when_stationary && st->inner_iters == 0) break;
  }
}

}  // namespace

Trace accel_inexact_ppa(const Oracle& f, const SubproblemSolver& solver, const std::vector<double>& lambdas,
                        const Vec& x0, int N, const AccelPpaOptions& opt) {
  require(N >= 0, "accel_inexact_ppa: N must be >= 0");
  require(opt.mu >= 0, "accel_inexact_ppa: mu must be >= 0");
  require(opt.delta >= 0, "accel_inexact_ppa: delta must be >= 0");
  check_steps(lambdas, N, "accel_inexact_ppa");
  if (!opt.allow_out_of_range) {
    for (int i = 0; i < N; ++i) {
      const double cap = opt.mu > 0 ? std::sqrt(1.0 + step_at(lambdas, i) * opt.mu) : 1.0;
      require(opt.delta <= cap, "accel_inexact_ppa: delta outside the certified range");
    }
  }
  OuterRun run;
  run.trace.method = "accel_ppa";
  run.trace.num["L"] = f.params.L;
  run.trace.num["mu"] = f.params.mu;
  run.trace.num["mu_method"] = opt.mu;
  run.trace.num["delta"] = opt.delta;
  run.trace.num["N"] = N;
  BudgetedSolver wrapped = [&](const Vec& y, double lam) -> std::optional<ProxStep> { return solver(y, lam); };
  accel_outer(run, f, wrapped, lambdas, x0, N, opt, false);
  if (f.optimum && N >= 1) {
    run.trace.num["bound"] = accel_ppa_bound(lambdas, opt.mu, N, (x0 - f.optimum->x).norm());
    run.trace.tag["bound_on"] = "f_gap";
  }
  return std::move(run.trace);
}

// ---------------------------------------------------------------- Catalyst

InnerMethod parse_inner(const std::string& s) {
  if (s == "gd") return InnerMethod::gd;
  if (s == "gd_linesearch") return InnerMethod::gd_linesearch;
  if (s == "const_momentum" || s == "constant_momentum") return InnerMethod::const_momentum;
  throw InvalidArgument("unknown inner solver: " + s);
}

std::string to_string(InnerMethod m) {
  switch (m) {
    case InnerMethod::gd: return "gd";
    case InnerMethod::gd_linesearch: return "gd_linesearch";
    case InnerMethod::const_momentum: return "const_momentum";
  }
  return "?";
}

InnerContract inner_contract(InnerMethod m, double lambda, double L) {
  const double r = lambda * L;
  switch (m) {
    case InnerMethod::gd: return {1.0, 1.0 / (1.0 + r)};
    case InnerMethod::gd_linesearch: return {r + 1.0, 2.0 / (2.0 + r)};
    case InnerMethod::const_momentum: return {r + 1.0, std::sqrt(1.0 / (1.0 + r))};
  }
  return {};
}

double catalyst_burden(const InnerContract& c, double lambda, double L) {
  require(c.tau > 0 && c.tau <= 1, "catalyst_burden: tau must lie in (0,1]");
  if (c.tau == 1.0) return 1.0;
  return std::log(c.C * (lambda * L + 2.0)) / std::log(1.0 / (1.0 - c.tau)) + 1.0;
}

double lambda_gd_suboptimal(double L, double mu) {
  require(L > 2.0 * mu && mu >= 0, "lambda_gd_suboptimal: needs L > 2 mu");
  return 1.0 / (L - 2.0 * mu);
}

double lambda_gd_optimal(double L, double mu) {
  require(L > 3.0 * mu && mu >= 0, "lambda_gd_optimal: needs L > 3 mu");
  return 2.0 / (L - 3.0 * mu);
}

namespace {

// One warm-started inner run on Phi(w) = f(w) + ||w - y||^2 / (2 lambda).
// Stops at the first i with lambda ||grad Phi(w_i)|| <= ||w_i - w_0||.
struct InnerRun {
  bool done = false;
  bool stalled = false;  // steps no longer move w beyond rounding
  int iters = 0;
  Vec w;
  Vec grad_f;  // grad f(w)
  std::int64_t grads = 0;
};

InnerRun run_inner(const Oracle& f, InnerMethod m, const Vec& y, double lambda, int max_iters) {
  const double L = f.params.L;
  const double Lphi = L + 1.0 / lambda;
  const double muphi = 1.0 / lambda + f.params.mu;
  InnerRun out;
  Vec w = y, w_prev = y, v = y;  // v: extrapolated point for the momentum solver
  auto grad_phi = [&](const Vec& p, Vec& gf) {
    gf = f.gradient(p);
    ++out.grads;
    return Vec(gf + (p - y) / lambda);
  };
  auto phi = [&](const Vec& p) { return f.value(p) + (p - y).squaredNorm() / (2.0 * lambda); };
  const double sq = std::sqrt(muphi / Lphi);
  const double beta = (1.0 - sq) / (1.0 + sq);
  for (int i = 0;; ++i) {
    Vec gf;
    Vec g = grad_phi(w, gf);
    if (lambda * g.norm() <= (w - y).norm()) {
      out.done = true;
      out.iters = i;
      out.w = w;
      out.grad_f = gf;
      return out;
    }
    if (i >= max_iters) {
      out.iters = i;
      out.w = w;
      out.grad_f = gf;
      return out;
    }
    const Vec before = w;
    switch (m) {
      case InnerMethod::gd: w = w - g / Lphi; break;
      case InnerMethod::gd_linesearch: {
        double s = detail::golden_section([&](double a) { return phi(w - a * g); }, 1.0 / Lphi, 1.0 / muphi, 60);
        w = w - s * g;
        break;
      }
      case InnerMethod::const_momentum: {
        Vec gv;
        Vec gvphi = i == 0 ? g : grad_phi(v, gv);
        Vec wn = v - gvphi / Lphi;
        v = wn + beta * (wn - w);
        w = std::move(wn);
        break;
      }
    }
    if ((w - before).norm() <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + before.norm())) {
      out.stalled = true;
      out.iters = i + 1;
      out.w = w;
      return out;
    }
  }
}

}  // namespace

Trace catalyst(const Oracle& f, const Vec& x0, const CatalystOptions& opt) {
  require(opt.budget >= 0, "catalyst: budget must be >= 0");
  const double L = f.params.L;
  const double lambda = std::isnan(opt.lambda) ? 1.0 / L : opt.lambda;
  require(lambda > 0 && std::isfinite(lambda), "catalyst: lambda must be positive");
  const double mu = opt.strongly_convex ? f.params.mu : 0.0;
  if (opt.strongly_convex) require(mu > 0, "catalyst: strongly convex mode needs mu > 0");
  const InnerContract contract = inner_contract(opt.inner, lambda, L);
  const double B = catalyst_burden(contract, lambda, L);
  const int cap = 2 * static_cast<int>(std::ceil(B));

  OuterRun run;
  Trace& t = run.trace;
  t.method = "catalyst";
  t.tag["inner"] = to_string(opt.inner);
  t.tag["mode"] = opt.strongly_convex ? "strongly_convex" : "convex";
  t.num["L"] = L;
  t.num["mu"] = f.params.mu;
  t.num["mu_method"] = mu;
  t.num["lambda"] = lambda;
  t.num["budget"] = opt.budget;
  t.num["B"] = B;
  t.num["C_M"] = contract.C;
  t.num["tau_M"] = contract.tau;
  t.num["delta"] = 1.0;

  std::int64_t used = 0, useless = 0;
  int max_inner = 0;
  bool stalled = false;
  BudgetedSolver solver = [&](const Vec& y, double lam) -> std::optional<ProxStep> {
    const std::int64_t remaining = opt.budget - used;
    if (remaining <= 0) return std::nullopt;
    const int limit = static_cast<int>(std::min<std::int64_t>(remaining, cap));
    InnerRun in = run_inner(f, opt.inner, y, lam, limit);
    if (in.stalled) {
      // y is the prox point up to rounding; nothing left to gain
      stalled = true;
      useless = in.iters;
      used += in.iters;
      run.grad_calls += in.grads;
      return std::nullopt;
    }
    if (!in.done) {
      if (remaining > cap)
        throw ContractViolation("catalyst: inner solver needed more than " + std::to_string(cap) +
                                " iterations (burden " + std::to_string(B) + ")");
      useless = in.iters;
      used += in.iters;
      run.grad_calls += in.grads;
      return std::nullopt;
    }
    used += in.iters;
    max_inner = std::max(max_inner, in.iters);
    ProxStep st;
    st.x_next = in.w;
    st.g = in.grad_f;
    st.e = st.x_next - y + lam * st.g;
    st.grad_calls = in.grads;
    st.inner_iters = in.iters;
    return st;
  };
  AccelPpaOptions po;
  po.mu = mu;
  po.delta = 1.0;
  accel_outer(run, f, solver, {lambda}, x0, std::numeric_limits<int>::max(), po, true);

  t.num["N_outer"] = run.outer;
  t.num["N_total"] = double(used);
  t.num["N_useless"] = double(useless);
  t.num["max_inner"] = max_inner;
  if (stalled) t.tag["stop"] = "precision";
  t.num["N"] = run.outer;
  t.num["grad_calls"] = double(run.grad_calls);
  if (f.optimum && run.outer >= 1) {
    const double R = (x0 - f.optimum->x).norm();
    t.num["bound"] = mu > 0 ? accel_ppa_bound({lambda}, mu, run.outer, R)
                            : 2.0 * R * R / (lambda * double(run.outer) * run.outer);
    t.tag["bound_on"] = "f_gap";
  }
  return std::move(run.trace);
}

}  // namespace accel
