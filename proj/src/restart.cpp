#include "accel/restart.hpp"

#include "accel/record.hpp"
#include "stepper.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>

namespace accel {

double restart_constant() { return 4.0 * std::exp(2.0 / std::exp(1.0)); }

double schedule_scale(const HebParams& heb, double L, double f0_gap) {
  const double tau = heb.tau();
  return std::exp(1.0 - tau) * std::sqrt(restart_constant() * heb.kappa(L)) * std::pow(f0_gap, -tau / 2.0);
}

std::vector<int> geometric_schedule(double C, double tau, int N) {
  require(C > 0 && std::isfinite(C), "geometric_schedule: scale must be positive");
  require(tau >= 0, "geometric_schedule: tau must be >= 0");
  std::vector<int> ks;
  long long sum = 0;
  for (int i = 1; sum < N; ++i) {
    const double raw = std::ceil(C * std::exp(tau * i));
    long long k = raw >= double(N) ? N : static_cast<long long>(raw);
    k = std::max<long long>(k, 1);
    k = std::min<long long>(k, N - sum);
    ks.push_back(static_cast<int>(k));
    sum += k;
  }
  return ks;
}

double scheduled_bound(const HebParams& heb, double L, double f0, double N) {
  const double tau = heb.tau();
  const double ck = std::sqrt(restart_constant() * heb.kappa(L));
  if (tau == 0.0) return std::exp(-2.0 * N / (std::exp(1.0) * ck)) * f0;
  return f0 / std::pow(tau / std::exp(1.0) * std::pow(f0, tau / 2.0) / ck * N + 1.0, 2.0 / tau);
}

double grid_bound(const HebParams& heb, double L, double f0, double N) {
  const double tau = heb.tau();
  const double ck = std::sqrt(restart_constant() * heb.kappa(L));
  if (tau == 0.0) return std::exp(-N / (std::exp(1.0) * ck)) * f0;
  return f0 / std::pow(tau / std::exp(1.0) / ck * std::pow(f0, tau / 2.0) * (N - 1.0) / 4.0 + 1.0, 2.0 / tau);
}

RestartInner parse_restart_inner(const std::string& s) {
  if (s == "gd") return RestartInner::gd;
  if (s == "fgm") return RestartInner::fgm;
  throw InvalidArgument("restart: inner method must be gd or fgm, got " + s);
}

int fixed_restart_period(double L, double mu) {
  require(mu > 0 && L > 0, "fixed_restart_period: needs mu > 0");
  return static_cast<int>(std::ceil(8.0 * L / mu));
}

namespace {

class GdStepper : public detail::Stepper {
 public:
  GdStepper(const Oracle& f, const Vec& x0) : f_(f), x_(x0) {}
  void step() override {
    y_ = x_;
    x_ = x_ - f_.gradient(x_) / f_.params.L;
    ++calls_;
  }
  const Vec& x() const override { return x_; }
  void set_x(const Vec& v) override { x_ = v; }
  void fill(Record& r) const override {
    r.y = y_;
    r.Lk = f_.params.L;
    r.grad_calls = calls_;
  }

 private:
  const Oracle& f_;
  Vec x_, y_;
  std::int64_t calls_ = 0;
};

std::unique_ptr<detail::Stepper> make_inner(RestartInner m, const Oracle& f, const Vec& x0) {
  if (m == RestartInner::gd) return std::make_unique<GdStepper>(f, x0);
  return detail::fgm_stepper(f, x0, 0.0);
}

Oracle with_smoothness(const Oracle& f, double L) {
  require(L > 0 && std::isfinite(L), "restart: L must be positive");
  Oracle g = f;
  g.params = {0.0, L};
  return g;
}

// Runs the epochs; `on_step(k, x, epoch_end)` sees every inner iterate.
// The final epoch hands back the better of its start and end.
template <class OnStep>
Vec drive_schedule(const Oracle& g, const std::vector<int>& schedule, const Vec& x0, std::int64_t& calls,
                   OnStep&& on_step) {
  Vec start = x0;
  int k = 0;
  for (std::size_t e = 0; e < schedule.size(); ++e) {
    auto s = detail::fgm_stepper(g, start, 0.0);
    for (int j = 0; j < schedule[e]; ++j) {
      s->step();
      ++calls;
      ++k;
      const bool last_epoch = e + 1 == schedule.size();
      const bool end = j + 1 == schedule[e];
      if (end && last_epoch && g.value(start) < g.value(s->x())) {
        on_step(k, start, true);
        return start;
      }
      on_step(k, s->x(), end);
    }
    start = s->x();
  }
  return start;
}

}  // namespace

Trace fixed_restart(const Oracle& f, RestartInner inner, int k, const Vec& x0, int epochs) {
  require(k >= 1, "fixed_restart: k must be >= 1");
  require(epochs >= 0, "fixed_restart: epochs must be >= 0");
  Stopwatch clock;
  Trace t;
  t.method = "restart_fixed";
  t.tag["inner"] = inner == RestartInner::gd ? "gd" : "fgm";
  t.num["L"] = f.params.L;
  t.num["mu"] = f.params.mu;
  t.num["k"] = k;
  t.num["epochs"] = epochs;
  t.num["N"] = double(k) * epochs;

  Record r0 = make_record(0, x0, f);
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  Vec start = x0;
  std::int64_t calls = 0;
  int row = 0;
  for (int e = 0; e < epochs; ++e) {
    auto s = make_inner(inner, f, start);
    for (int j = 0; j < k; ++j) {
      s->step();
      ++calls;
      guard_finite(s->x(), t, "fixed_restart");
      Record r = make_record(++row, s->x(), f);
      s->fill(r);
      r.grad_calls = calls;
      r.flagged = j + 1 == k;
      r.wall_ns = clock.ns();
      t.records.push_back(std::move(r));
    }
    start = s->x();
  }
  if (f.optimum && f.params.mu > 0 && k >= fixed_restart_period(f.params.L, f.params.mu)) {
    t.num["bound"] = std::pow(0.5, epochs) * (f.value(x0) - f.optimum->f);
    t.tag["bound_on"] = "f_gap";
  }
  return t;
}

Trace run_schedule(const Oracle& f, double L, const std::vector<int>& schedule, const Vec& x0,
                   const std::string& label) {
  Oracle g = with_smoothness(f, L);
  Stopwatch clock;
  Trace t;
  t.method = label;
  t.num["L"] = L;
  t.num["mu"] = f.params.mu;
  t.num["epochs"] = double(schedule.size());
  t.num["N"] = std::accumulate(schedule.begin(), schedule.end(), 0.0);
  Record r0 = make_record(0, x0, f);
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  std::int64_t calls = 0;
  drive_schedule(g, schedule, x0, calls, [&](int k, const Vec& x, bool end) {
    guard_finite(x, t, label);
    Record r = make_record(k, x, f);
    r.Lk = L;
    r.grad_calls = calls;
    r.flagged = end;
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
  });
  return t;
}

Trace scheduled_restart(const Oracle& f, const HebParams& heb, double L, const Vec& x0, double f0_gap, int N) {
  require(heb.r >= 2.0, "scheduled_restart: needs r >= 2 (tau >= 0)");
  require(heb.mu > 0, "scheduled_restart: needs a positive growth constant");
  require(f0_gap > 0 && std::isfinite(f0_gap), "scheduled_restart: needs a positive initial gap bound");
  require(N >= 1, "scheduled_restart: N must be >= 1");
  const double C = schedule_scale(heb, L, f0_gap);
  auto schedule = geometric_schedule(C, heb.tau(), N);
  Trace t = run_schedule(f, L, schedule, x0, "restart_scheduled");
  t.num["C_star"] = C;
  t.num["tau"] = heb.tau();
  t.num["kappa"] = heb.kappa(L);
  t.num["f0_gap"] = f0_gap;
  const double b = scheduled_bound(heb, L, f0_gap, N);
  t.num["bound_valid"] = N >= 2.0 * C;
  if (N >= 2.0 * C) {
    t.num["bound"] = b;
    t.tag["bound_on"] = "f_gap";
  } else {
    t.num["bound_unchecked"] = b;
  }
  return t;
}

std::vector<int> grid_schedule(int p, int q, int N) {
  const double C = std::ldexp(1.0, p);
  return geometric_schedule(C, q == 0 ? 0.0 : std::ldexp(1.0, -q), N);
}

std::vector<GridCell> grid_cells(const Oracle& f, double L, const Vec& x0, int N, Exec exec) {
  require(N >= 4, "grid_restart: N must be >= 4");
  const int pmax = static_cast<int>(std::floor(std::log2(double(N))));
  const int qmax = static_cast<int>(std::ceil(std::log2(double(N))));
  std::vector<GridCell> cells;
  for (int p = 1; p <= pmax; ++p)
    for (int q = 0; q <= qmax; ++q) cells.push_back(GridCell{p, q});
  Oracle g = with_smoothness(f, L);
  const int n = static_cast<int>(cells.size());
  auto run_cell = [&](GridCell& c) {
    auto schedule = grid_schedule(c.p, c.q, N);
    std::int64_t calls = 0;
    Vec x = drive_schedule(g, schedule, x0, calls, [](int, const Vec&, bool) {});
    c.final_f = f.value(x);
    c.final_gap = f.optimum ? c.final_f - f.optimum->f : kNaN;
    c.iterations = static_cast<int>(calls);
    c.epochs = static_cast<int>(schedule.size());
  };
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) run_cell(cells[i]);
  } else {
    for (int i = 0; i < n; ++i) run_cell(cells[i]);
  }
  return cells;
}

GridResult grid_restart(const Oracle& f, double L, const Vec& x0, int N, Exec exec) {
  GridResult out;
  out.cells = grid_cells(f, L, x0, N, exec);
  std::size_t best = 0;
  for (std::size_t i = 1; i < out.cells.size(); ++i) {
    const double a = out.cells[i].final_f, b = out.cells[best].final_f;
    if (a < b || (std::isnan(b) && !std::isnan(a))) best = i;
  }
  out.p = out.cells[best].p;
  out.q = out.cells[best].q;
  out.best = run_schedule(f, L, grid_schedule(out.p, out.q, N), x0, "restart_grid");
  out.best.num["p"] = out.p;
  out.best.num["q"] = out.q;
  out.best.num["cells"] = double(out.cells.size());
  std::int64_t total = 0;
  for (const auto& c : out.cells) total += c.iterations;
  out.best.num["grid_iterations"] = double(total);
  return out;
}

std::string grid_table_json(const GridResult& g) {
  nlohmann::json j;
  j["best"] = {{"p", g.p}, {"q", g.q}};
  auto& rows = j["cells"] = nlohmann::json::array();
  for (const auto& c : g.cells) {
    nlohmann::json r = {{"p", c.p}, {"q", c.q}, {"iterations", c.iterations}, {"epochs", c.epochs}};
    r["final_gap"] = std::isfinite(c.final_gap) ? nlohmann::json(c.final_gap) : nlohmann::json(nullptr);
    r["final_f"] = std::isfinite(c.final_f) ? nlohmann::json(c.final_f) : nlohmann::json(nullptr);
    rows.push_back(r);
  }
  return j.dump(2);
}

}  // namespace accel
