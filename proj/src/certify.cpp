#include "accel/certify.hpp"

#include "accel/momentum.hpp"
#include "numeric.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>

namespace accel {

void MarginReport::add(Margin m) {
  if (!m.ok()) ++failures;
  if (m.slack < min_slack || worst < 0) {
    min_slack = m.slack;
    worst = static_cast<int>(margins.size());
  }
  margins.push_back(std::move(m));
}

void MarginReport::merge(const MarginReport& other) {
  for (const auto& m : other.margins) add(m);
}

std::vector<Margin> MarginReport::failing() const {
  std::vector<Margin> out;
  for (const auto& m : margins)
    if (!m.ok()) out.push_back(m);
  return out;
}

// ---------------------------------------------------------------- interpolation

namespace {

void check_class_args(double mu, double L, const char* who) {
  require(L > 0 && std::isfinite(L), std::string(who) + ": L must be positive");
  require(mu >= 0, std::string(who) + ": mu must be >= 0");
  require(mu < L, std::string(who) + ": needs mu < L");
}

}  // namespace

double interpolation_slack(const Triplet& ti, const Triplet& tj, double mu, double L, double* scale) {
  const Vec dx = ti.x - tj.x;
  const Vec dg = ti.g - tj.g;
  const double lin = tj.g.dot(dx);
  const double t1 = dg.squaredNorm() / (2.0 * L);
  const double t2 = mu > 0 ? mu / (2.0 * (1.0 - mu / L)) * (dx - dg / L).squaredNorm() : 0.0;
  if (scale) *scale = std::abs(ti.f) + std::abs(tj.f) + std::abs(lin) + t1 + t2;
  return ti.f - tj.f - lin - t1 - t2;
}

MarginReport check_interpolation(const std::vector<Triplet>& s, double mu, double L, Exec exec) {
  check_class_args(mu, L, "check_interpolation");
  const int n = static_cast<int>(s.size());
  for (int i = 1; i < n; ++i) require(s[i].x.size() == s[0].x.size(), "check_interpolation: dimension mismatch");
  std::vector<Margin> all(static_cast<std::size_t>(n) * n);
  auto row = [&](int i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Margin& m = all[static_cast<std::size_t>(i) * n + j];
      m.i = i;
      m.j = j;
      m.slack = interpolation_slack(s[i], s[j], mu, L, &m.scale);
    }
  };
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) row(i);
  } else {
    for (int i = 0; i < n; ++i) row(i);
  }
  MarginReport rep;
  rep.margins.reserve(all.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) rep.add(std::move(all[static_cast<std::size_t>(i) * n + j]));
  return rep;
}

double min_interpolation_slack(const std::vector<Triplet>& s, double mu, double L, Exec exec) {
  check_class_args(mu, L, "min_interpolation_slack");
  const int n = static_cast<int>(s.size());
  double best = kInf;
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(static) reduction(min : best)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) best = std::min(best, interpolation_slack(s[i], s[j], mu, L));
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) best = std::min(best, interpolation_slack(s[i], s[j], mu, L));
  }
  return best;
}

std::vector<Triplet> harvest_triplets(const Trace& t, const Oracle& f) {
  std::vector<Triplet> out;
  auto take = [&](const Vec& x) {
    if (x.size() == 0) return;
    if (f.domain && !f.domain(x)) return;
    out.push_back(Triplet{x, f.gradient(x), f.value(x)});
  };
  for (const auto& r : t.records) {
    take(r.x);
    take(r.y);
    take(r.z);
  }
  return out;
}

// ---------------------------------------------------------------- class inequalities

namespace {

void add_margin(MarginReport& rep, int k, const std::string& label, double slack, double scale) {
  Margin m;
  m.i = k;
  m.j = -1;
  m.slack = slack;
  m.scale = scale;
  m.label = label;
  rep.add(std::move(m));
}

// h(lam x + (1-lam) y) <= lam h(x) + (1-lam) h(y) - lam(1-lam) c/2 |x-y|^2 ; c may be negative
void chord_margin(MarginReport& rep, int k, const std::string& label, const std::function<double(const Vec&)>& h,
                  const Vec& x, const Vec& y, double hx, double hy, double c, double sign, int grid) {
  const double d2 = (x - y).squaredNorm();
  for (int g = 0; g < grid; ++g) {
    const double lam = grid == 1 ? 0.5 : double(g) / (grid - 1);
    const Vec p = lam * x + (1.0 - lam) * y;
    const double hp = h(p);
    const double rhs = lam * hx + (1.0 - lam) * hy - lam * (1.0 - lam) * 0.5 * c * d2;
    const double slack = sign * (rhs - hp);
    add_margin(rep, k, label, slack, std::abs(hp) + std::abs(hx) + std::abs(hy) + std::abs(c) * d2);
  }
}

}  // namespace

MarginReport check_class_inequalities(const Oracle& f, double mu, double L, const ClassCheckOptions& opt) {
  check_class_args(mu, L, "check_class_inequalities");
  require(opt.samples >= 0, "check_class_inequalities: samples must be >= 0");
  require(opt.lambda_grid >= 1, "check_class_inequalities: lambda grid must be >= 1");
  for (int w : opt.which) require(w >= 1 && w <= 7, "check_class_inequalities: inequalities are numbered 1..7");
  auto wants = [&](int w) { return std::find(opt.which.begin(), opt.which.end(), w) != opt.which.end(); };
  if (!f.full_domain() && (wants(3) || wants(4)))
    throw Unsupported("check_class_inequalities: (iii) and (iv) need a full-domain oracle");

  std::mt19937_64 rng(opt.seed);
  const int d = f.dim;
  const Vec centre = f.optimum ? f.optimum->x : Vec::Zero(d);
  auto sample = [&]() {
    for (int tries = 0; tries < 1000; ++tries) {
      Vec v = centre + random_vector(d, rng, opt.scale);
      if (!f.domain || f.domain(v)) return v;
    }
    throw Unsupported("check_class_inequalities: could not sample inside the domain");
  };

  MarginReport rep;
  const bool strong = mu > 0;
  for (int k = 0; k < opt.samples; ++k) {
    const Vec x = sample(), y = sample();
    const Vec gx = f.gradient(x), gy = f.gradient(y);
    const double fx = f.value(x), fy = f.value(y);
    const Vec dx = x - y, dg = gx - gy;
    const double ndx = dx.norm(), ndg = dg.norm(), ip = dg.dot(dx);
    const double lin = gy.dot(x - y);
    const double base = std::abs(fx) + std::abs(fy) + std::abs(lin);

    if (wants(1)) {
      add_margin(rep, k, "i", L * ndx - ndg, L * ndx + ndg);
      if (strong) add_margin(rep, k, "i_lo", ndg - mu * ndx, mu * ndx + ndg);
    }
    if (wants(2)) {
      const double q = 0.5 * L * ndx * ndx;
      add_margin(rep, k, "ii", fy + lin + q - fx, base + q);
      if (strong) {
        const double qm = 0.5 * mu * ndx * ndx;
        add_margin(rep, k, "ii_lo", fx - fy - lin - qm, base + qm);
      }
    }
    if (wants(3)) {
      const double q = ndg * ndg / (2.0 * L);
      add_margin(rep, k, "iii", fx - fy - lin - q, base + q);
      if (strong) {
        const double qm = ndg * ndg / (2.0 * mu);
        add_margin(rep, k, "iii_hi", fy + lin + qm - fx, base + qm);
      }
    }
    if (wants(4)) {
      const double q = ndg * ndg / L;
      add_margin(rep, k, "iv", ip - q, std::abs(ip) + q);
      if (strong) add_margin(rep, k, "iv_hi", ndg * ndg / mu - ip, std::abs(ip) + ndg * ndg / mu);
    }
    if (wants(5)) {
      const double q = L * ndx * ndx;
      add_margin(rep, k, "v", q - ip, std::abs(ip) + q);
      if (strong) add_margin(rep, k, "v_lo", ip - mu * ndx * ndx, std::abs(ip) + mu * ndx * ndx);
    }
    if (!strong) {
      if (wants(6)) {
        // L/2 |.|^2 - f is convex
        auto h = [&](const Vec& v) { return 0.5 * L * v.squaredNorm() - f.value(v); };
        chord_margin(rep, k, "vi", h, x, y, h(x), h(y), 0.0, 1.0, opt.lambda_grid);
      }
      if (wants(7)) chord_margin(rep, k, "vii", f.value, x, y, fx, fy, L, -1.0, opt.lambda_grid);
    } else {
      if (wants(6)) {
        chord_margin(rep, k, "vi", f.value, x, y, fx, fy, mu, 1.0, opt.lambda_grid);
        chord_margin(rep, k, "vi_lo", f.value, x, y, fx, fy, L, -1.0, opt.lambda_grid);
      }
      if (wants(7)) {
        // f - mu/2|.|^2 and L/2|.|^2 - f: convex and (L - mu)-smooth
        const double Lm = L - mu;
        auto first_order = [&](const std::string& lab, double hx, double hy, const Vec& ghy) {
          const double l = ghy.dot(x - y);
          const double q = 0.5 * Lm * ndx * ndx;
          const double sc = std::abs(hx) + std::abs(hy) + std::abs(l) + q;
          add_margin(rep, k, lab + "_cvx", hx - hy - l, sc);
          add_margin(rep, k, lab + "_smooth", hy + l + q - hx, sc);
        };
        first_order("vii_a", fx - 0.5 * mu * x.squaredNorm(), fy - 0.5 * mu * y.squaredNorm(), gy - mu * y);
        first_order("vii_b", 0.5 * L * x.squaredNorm() - fx, 0.5 * L * y.squaredNorm() - fy, L * y - gy);
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------- potentials

namespace {

const std::vector<std::string>& certified_methods() {
  static const std::vector<std::string> m = {"gd",          "fgm", "constant_momentum", "ogm",      "item",
                                             "tmm",         "fista", "prox_agm",        "bregman_agm", "ppa",
                                             "accel_ppa", "catalyst", "monotone"};
  return m;
}

struct Pot {
  double value;
  double scale;
};

double need(const Trace& t, const char* key) {
  const double v = t.meta(key);
  if (std::isnan(v)) throw InvalidArgument(std::string("check_potential: trace lacks ") + key);
  return v;
}

const Vec& need_vec(const Record& r, const Vec& v, const char* what) {
  if (v.size() == 0)
    throw InvalidArgument("check_potential: row " + std::to_string(r.k) + " lacks " + what);
  return v;
}

double need_A(const Record& r) {
  if (std::isnan(r.A)) throw InvalidArgument("check_potential: row " + std::to_string(r.k) + " lacks A");
  return r.A;
}

// A (F(x) - F*) + w |v - x*|^2
Pot weighted(double A, double F, double Fs, double w, const Vec& v, const Vec& xs) {
  const double gap = F - Fs;
  const double d2 = (v - xs).squaredNorm();
  return {A * gap + w * d2, std::abs(A) * (std::abs(F) + std::abs(Fs)) + std::abs(w) * d2};
}

std::vector<Pot> potentials(const Trace& t, const CompositeProblem& p, const std::string& method);

std::vector<Pot> gd_pots(const Trace& t, const CompositeProblem& p) {
  const double L = need(t, "L"), mu = t.meta("mu", 0.0), gamma = need(t, "gamma");
  const Vec& xs = p.optimum->x;
  const double Fs = p.optimum->f;
  std::vector<Pot> out;
  const bool strong = mu > 0 && mu < L && std::abs(gamma * L - 1.0) <= 1e-12;
  double A = 0.0;
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    const auto& r = t.records[k];
    if (strong) {
      out.push_back(weighted(A, p.F(r.x), Fs, 0.5 * (L + mu * A), r.x, xs));
      A = (A + 1.0) / (1.0 - mu / L);
    } else {
      out.push_back(weighted(double(k), p.F(r.x), Fs, 0.5 / gamma, r.x, xs));
    }
  }
  return out;
}

// A (F(x) - F*) + (c + m A)/2 |z - x*|^2
std::vector<Pot> az_pots(const Trace& t, const CompositeProblem& p, double c, double m, bool use_z) {
  const Vec& xs = p.optimum->x;
  const double Fs = p.optimum->f;
  std::vector<Pot> out;
  for (const auto& r : t.records) {
    const double A = need_A(r);
    const Vec& v = use_z ? need_vec(r, r.z, "z") : r.x;
    out.push_back(weighted(A, p.F(r.x), Fs, 0.5 * (c + m * A), v, xs));
  }
  return out;
}

std::vector<Pot> const_momentum_pots(const Trace& t, const CompositeProblem& p) {
  const double mu = need(t, "mu");
  const Vec& xs = p.optimum->x;
  const double Fs = p.optimum->f;
  std::vector<Pot> out;
  for (const auto& r : t.records) {
    const double A = need_A(r);
    out.push_back(weighted(A, p.F(r.x), Fs, 0.5 * mu * A, need_vec(r, r.z, "z"), xs));
  }
  return out;
}

// f(y) - f* - |g|^2/(2L) - c |y - g/L - x*|^2
Pot shifted_gap(const Oracle& f, const Vec& y, double fs, double L, double c, const Vec& xs) {
  const Vec g = f.gradient(y);
  const double fy = f.value(y);
  const double g2 = g.squaredNorm() / (2.0 * L);
  const double e2 = c * (y - g / L - xs).squaredNorm();
  return {fy - fs - g2 - e2, std::abs(fy) + std::abs(fs) + g2 + e2};
}

std::vector<Pot> ogm_pots(const Trace& t, const CompositeProblem& p) {
  const double L = need(t, "L");
  const Vec& xs = p.optimum->x;
  const double fs = p.optimum->f;
  const auto& rs = t.records;
  std::vector<Pot> out;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const Vec& z = need_vec(rs[k], rs[k].z, "z");
    const double dz = 0.5 * L * (z - xs).squaredNorm();
    if (k == 0) {
      out.push_back({dz, dz});
      continue;
    }
    const double th = need_A(rs[k - 1]);
    Pot s = shifted_gap(p.f, need_vec(rs[k], rs[k].y, "y"), fs, L, 0.0, xs);
    out.push_back({2.0 * th * th * s.value + dz, 2.0 * th * th * s.scale + dz});
  }
  // last step: bound on f(y_N) itself
  const int N = static_cast<int>(t.meta("N", -1));
  if (N >= 1 && static_cast<int>(rs.size()) == N + 1) {
    const auto& r = rs.back();
    const double th = need_A(r);
    const Vec g = p.f.gradient(r.x);
    const double gap = p.f.value(r.x) - fs;
    const double d2 = 0.5 * L * (r.z - (th / L) * g - xs).squaredNorm();
    out.push_back({th * th * gap + d2, th * th * (std::abs(p.f.value(r.x)) + std::abs(fs)) + d2});
  }
  return out;
}

std::vector<Pot> item_pots(const Trace& t, const CompositeProblem& p) {
  const double L = need(t, "L"), mu = need(t, "mu"), q = mu / L;
  const Vec& xs = p.optimum->x;
  const double fs = p.optimum->f;
  std::vector<Pot> out;
  for (const auto& r : t.records) {
    const double A = need_A(r);
    const double dz = (L + mu * A) / (1.0 - q) * (need_vec(r, r.z, "z") - xs).squaredNorm();
    if (A == 0.0) {
      out.push_back({dz, dz});
      continue;
    }
    Pot s = shifted_gap(p.f, need_vec(r, r.y, "y"), fs, L, mu / (2.0 * (1.0 - q)), xs);
    out.push_back({A * s.value + dz, A * s.scale + dz});
  }
  return out;
}

std::vector<Pot> tmm_pots(const Trace& t, const CompositeProblem& p) {
  const double L = need(t, "L"), mu = need(t, "mu"), q = mu / L;
  require(mu > 0, "check_potential: tmm needs mu > 0");
  const double rho = 1.0 - std::sqrt(q);
  const Vec& xs = p.optimum->x;
  const double fs = p.optimum->f;
  std::vector<Pot> out;
  double w = 1.0;  // rho^{-2k}
  for (const auto& r : t.records) {
    Pot s = shifted_gap(p.f, need_vec(r, r.y, "y"), fs, L, mu / (2.0 * (1.0 - q)), xs);
    const double dz = mu / (1.0 - q) * (need_vec(r, r.z, "z") - xs).squaredNorm();
    out.push_back({w * (s.value + dz), w * (s.scale + dz)});
    w /= rho * rho;
  }
  return out;
}

std::vector<Pot> bregman_pots(const Trace& t, const CompositeProblem& p) {
  const double L = need(t, "L");
  const Dgf w = parse_dgf(t.text("dgf", "euclidean"));
  const Vec& xs = p.optimum->x;
  const double Fs = p.optimum->f;
  std::vector<Pot> out;
  for (const auto& r : t.records) {
    const double A = need_A(r);
    const double F = p.F(r.x);
    const double D = L * bregman_divergence(w, xs, need_vec(r, r.z, "z"));
    out.push_back({A * (F - Fs) + D, A * (std::abs(F) + std::abs(Fs)) + std::abs(D)});
  }
  return out;
}

std::vector<Pot> potentials(const Trace& t, const CompositeProblem& p, const std::string& method) {
  if (!p.optimum) throw InvalidArgument("check_potential: needs a known optimum");
  if (method == "gd") return gd_pots(t, p);
  if (method == "fgm") {
    const double L = need(t, "L");
    return az_pots(t, p, L, t.meta("mu_method", 0.0), true);
  }
  if (method == "constant_momentum") return const_momentum_pots(t, p);
  if (method == "ogm") return ogm_pots(t, p);
  if (method == "item") return item_pots(t, p);
  if (method == "tmm") return tmm_pots(t, p);
  if (method == "fista" || method == "prox_agm") return az_pots(t, p, 1.0, t.meta("mu_method", 0.0), true);
  if (method == "bregman_agm") return bregman_pots(t, p);
  if (method == "ppa") return az_pots(t, p, 1.0, t.meta("mu", 0.0), false);
  if (method == "accel_ppa" || method == "catalyst") return az_pots(t, p, 1.0, t.meta("mu_method", 0.0), true);
  if (method == "monotone") {
    const std::string inner = t.text("inner");
    if (inner == "monotone" || !has_certificate(inner))
      throw InvalidArgument("check_potential: monotone trace with unknown inner method '" + inner + "'");
    return potentials(t, p, inner);
  }
  throw InvalidArgument("check_potential: no certificate registered for " + method);
}

}  // namespace

bool has_certificate(const std::string& method) {
  const auto& m = certified_methods();
  return std::find(m.begin(), m.end(), method) != m.end();
}

std::vector<double> potential_sequence(const Trace& t, const CompositeProblem& p) {
  auto pots = potentials(t, p, t.method);
  std::vector<double> out;
  out.reserve(pots.size());
  for (const auto& v : pots) out.push_back(v.value);
  return out;
}

MarginReport check_potential(const Trace& t, const CompositeProblem& p) {
  if (!has_certificate(t.method)) throw InvalidArgument("check_potential: no certificate registered for " + t.method);
  auto pots = potentials(t, p, t.method);
  MarginReport rep;
  for (std::size_t k = 0; k + 1 < pots.size(); ++k) {
    Margin m;
    m.i = static_cast<int>(k);
    m.slack = pots[k].value - pots[k + 1].value;
    m.scale = std::max(pots[k].scale, pots[k + 1].scale);
    m.label = k + 1 == t.records.size() ? "final" : "step";
    rep.add(std::move(m));
  }
  if (t.method == "monotone") {
    for (std::size_t k = 0; k + 1 < t.records.size(); ++k) {
      Margin m;
      m.i = static_cast<int>(k);
      const double a = p.F(t.records[k].x), b = p.F(t.records[k + 1].x);
      m.slack = a - b;
      m.scale = std::abs(a) + std::abs(b);
      m.label = "monotone";
      rep.add(std::move(m));
    }
  }
  return rep;
}

MarginReport check_potential(const Trace& t, const Oracle& f) { return check_potential(t, smooth_problem(f)); }

// ---------------------------------------------------------------- LMI

LmiResult lmi_gd_distance(double tau, double gamma, double mu, double L, int grid) {
  LmiResult res;
  if (!(L > 0) || !(mu >= 0) || !(mu < L) || grid < 2) return res;
  const double a = mu * L / (L - mu);
  const double b = (L + mu) / (2.0 * (L - mu));
  const double c = 1.0 / (L - mu);
  const double g2 = gamma * gamma;
  auto tau_min = [&](double lam) {
    const double m22 = c * lam - g2;
    if (!(m22 > 0)) return kInf;
    const double off = gamma - b * lam;
    return 1.0 - a * lam + off * off / m22;
  };
  auto psd = [&](double lam) {
    const double m11 = tau - 1.0 + a * lam;
    const double m12 = gamma - b * lam;
    const double m22 = c * lam - g2;
    const double det = m11 * m22 - m12 * m12;
    const Tolerance& tol = tolerance();
    const double mag = std::max({std::abs(m11), std::abs(m22), std::abs(m12)});
    const bool ok = tol.ok(m11, std::abs(tau) + 1.0 + std::abs(a * lam)) && tol.ok(m22, g2 + std::abs(c * lam)) &&
                    tol.ok(det, mag * mag);
    return std::pair<bool, double>(ok, det);
  };

  // lambda = 0 only certifies the stationary map
  double best_lam = 0.0, best_tau = gamma == 0.0 ? 1.0 : kInf;
  const double lo = std::log(1e-8 / L), hi = std::log(1e4 / L);
  std::vector<double> lams(grid);
  int best_i = -1;
  for (int i = 0; i < grid; ++i) {
    lams[i] = std::exp(lo + (hi - lo) * i / (grid - 1));
    const double tm = tau_min(lams[i]);
    if (tm < best_tau) {
      best_tau = tm;
      best_lam = lams[i];
      best_i = i;
    }
  }
  if (best_i >= 0) {
    // tau_min is convex in lambda on its domain, so refine between the neighbours
    double left = best_i > 0 ? lams[best_i - 1] : lams[0];
    double right = best_i + 1 < grid ? lams[best_i + 1] : lams[grid - 1];
    left = std::max(left, g2 / c);
    const double lam = detail::golden_section(tau_min, left, right, 200);
    if (tau_min(lam) <= best_tau) {
      best_tau = tau_min(lam);
      best_lam = lam;
    }
  }
  res.tau_min = best_tau;
  if (!std::isfinite(best_tau)) return res;
  auto [ok, det] = psd(best_lam);
  res.det = det;
  res.feasible = ok;
  if (ok) res.lambda = best_lam;
  return res;
}

std::string margins_csv(const MarginReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "i,j,label,slack,scale,ok\n";
  for (const auto& m : r.margins)
    os << m.i << ',' << m.j << ',' << m.label << ',' << m.slack << ',' << m.scale << ',' << (m.ok() ? 1 : 0)
       << '\n';
  return os.str();
}

}  // namespace accel
