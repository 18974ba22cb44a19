#include "accel/extrapolation.hpp"

#include "accel/record.hpp"
#include "numeric.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>

namespace accel {

void PairBuffer::push(const Vec& x, const Vec& g) {
  require(x.size() == g.size(), "PairBuffer: x and g dimensions differ");
  if (!xs_.empty()) require(x.size() == xs_.front().size(), "PairBuffer: dimension mismatch");
  xs_.push_back(x);
  gs_.push_back(g);
  if (capacity_ > 0 && size() > capacity_) {
    xs_.pop_front();
    gs_.pop_front();
  }
}

Mat PairBuffer::X() const {
  Mat M(xs_.empty() ? 0 : xs_.front().size(), size());
  for (int i = 0; i < size(); ++i) M.col(i) = xs_[i];
  return M;
}

Mat PairBuffer::G() const {
  Mat M(gs_.empty() ? 0 : gs_.front().size(), size());
  for (int i = 0; i < size(); ++i) M.col(i) = gs_[i];
  return M;
}

Vec solve_gepp(Mat A, Vec b, double rel_threshold) {
  const int n = static_cast<int>(A.rows());
  require(A.cols() == n && b.size() == n, "solve_gepp: shape mismatch");
  if (!A.allFinite() || !b.allFinite()) throw SingularSystem("solve_gepp: non-finite input");
  const double scale = n ? A.cwiseAbs().maxCoeff() : 0.0;
  const double floor = rel_threshold * scale;
  for (int col = 0; col < n; ++col) {
    int piv;
    A.col(col).tail(n - col).cwiseAbs().maxCoeff(&piv);
    piv += col;
    const double p = A(piv, col);
    if (p == 0.0 || !std::isfinite(p) || std::abs(p) <= floor)
      throw SingularSystem("solve_gepp: pivot " + std::to_string(p) + " below threshold at column " +
                           std::to_string(col));
    if (piv != col) {
      A.row(piv).swap(A.row(col));
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double m = A(r, col) / A(col, col);
      if (m == 0.0) continue;
      A.row(r).tail(n - col) -= m * A.row(col).tail(n - col);
      b[r] -= m * b[col];
    }
  }
  Vec x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int j = r + 1; j < n; ++j) s -= A(r, j) * x[j];
    x[r] = s / A(r, r);
  }
  if (!x.allFinite()) throw SingularSystem("solve_gepp: non-finite solution");
  return x;
}

double spectral_norm_psd(const Mat& M, int iters, std::uint64_t seed) {
  const int n = static_cast<int>(M.rows());
  if (n == 0) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.5, 1.5);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = U(rng);
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vec w = M * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    est = v.dot(w);
    v = w / nw;
  }
  return std::max(est, v.dot(M * v));
}

namespace {

double cond_of(const Mat& K) {
  Eigen::SelfAdjointEigenSolver<Mat> es(K, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (ev.size() == 0) return kNaN;
  const double lo = ev.minCoeff(), hi = ev.maxCoeff();
  return lo > 0 ? hi / lo : kInf;
}

double min_eig(const Mat& K) {
  Eigen::SelfAdjointEigenSolver<Mat> es(K, Eigen::EigenvaluesOnly);
  return es.eigenvalues().size() ? es.eigenvalues().minCoeff() : kNaN;
}

Mat normalized_gram(const Mat& G) {
  Mat K = G.transpose() * G;
  const double nrm = spectral_norm_psd(K);
  if (nrm > 0) K /= nrm;
  return K;
}

Vec combine(const PairBuffer& buf, const Vec& c, double h) {
  Vec out = Vec::Zero(buf.x(0).size());
  for (int i = 0; i < buf.size(); ++i) out += c[i] * (buf.x(i) - h * buf.g(i));
  return out;
}

// min ||G c|| s.t. sum c = 1 through a rank-revealing least-squares solve
Vec constrained_lsq(const Mat& G) {
  const int n = static_cast<int>(G.cols());
  Vec c = Vec::Zero(n);
  c[n - 1] = 1.0;
  if (n == 1) return c;
  Mat D = G.leftCols(n - 1).colwise() - G.col(n - 1);
  Vec gam = D.completeOrthogonalDecomposition().solve(Vec(-G.col(n - 1)));
  c.head(n - 1) = gam;
  c[n - 1] = 1.0 - gam.sum();
  return c;
}

}  // namespace

ExtrapolationResult offline_na(const PairBuffer& buf) {
  require(!buf.empty(), "offline_na: buffer is empty");
  const int n = buf.size();
  Mat G = buf.G();
  Mat K = G.transpose() * G;
  ExtrapolationResult res;
  res.gram_cond = cond_of(normalized_gram(G));
  try {
    Vec z = solve_gepp(K, Vec::Ones(n), 1e-13);
    const double s = z.sum();
    if (!(std::abs(s) > 0) || !std::isfinite(s)) throw SingularSystem("offline_na: weights do not normalize");
    res.c = z / s;
    res.system_min_eig = min_eig(K);
  } catch (SingularSystem&) {
    // rank deficiency is harmless when an affine combination of the gradients vanishes
    Vec c = constrained_lsq(G);
    double gmax = 0.0;
    for (int i = 0; i < n; ++i) gmax = std::max(gmax, buf.g(i).norm());
    if ((G * c).norm() > 1e-9 * gmax) throw;
    res.c = c;
    res.degenerate = true;
    res.system_min_eig = min_eig(K);
  }
  res.x_extr = combine(buf, res.c, 0.0);
  return res;
}

ExtrapolationResult na_mixing(const PairBuffer& buf, double h) {
  auto res = offline_na(buf);
  res.x_extr = combine(buf, res.c, h);
  return res;
}

CRef parse_cref(const std::string& s) {
  if (s == "uniform") return CRef::uniform;
  if (s == "last") return CRef::last;
  throw InvalidArgument("unknown reference weights: " + s);
}

Vec make_cref(CRef kind, int n) {
  require(n >= 1, "make_cref: n must be >= 1");
  if (kind == CRef::uniform) return Vec::Constant(n, 1.0 / n);
  Vec c = Vec::Zero(n);
  c[n - 1] = 1.0;
  return c;
}

ExtrapolationResult rna(const PairBuffer& buf, double h, double lambda, const Vec& c_ref_in) {
  require(!buf.empty(), "rna: buffer is empty");
  require(lambda > 0, "rna: lambda must be positive");
  const int n = buf.size();
  Vec c_ref = c_ref_in.size() ? c_ref_in : make_cref(CRef::uniform, n);
  require(c_ref.size() == n, "rna: c_ref length differs from buffer size");
  require(std::abs(c_ref.sum() - 1.0) <= 1e-12, "rna: c_ref must sum to 1");

  Mat K = normalized_gram(buf.G());
  Mat M = K + lambda * Mat::Identity(n, n);
  ExtrapolationResult res;
  res.gram_cond = cond_of(K);
  res.system_min_eig = min_eig(M);
  Vec z = solve_gepp(M, Vec::Ones(n), 0.0);
  Vec w = solve_gepp(M, Vec(lambda * c_ref), 0.0);
  res.c = w + z * ((1.0 - w.sum()) / z.sum());
  res.x_extr = combine(buf, res.c, h);
  return res;
}

Safeguard parse_safeguard(const std::string& s) {
  if (s == "none") return Safeguard::none;
  if (s == "descent") return Safeguard::descent;
  if (s == "linesearch") return Safeguard::linesearch;
  throw InvalidArgument("unknown safeguard: " + s);
}

Trace online_rna(const Oracle& f, const Vec& x0, int N, const OnlineOptions& opt) {
  require(N >= 0, "online_rna: N must be >= 0");
  require(opt.memory >= 1, "online_rna: memory must be >= 1");
  require(opt.lambda > 0, "online_rna: lambda must be positive");
  const double L = f.params.L;
  const double h = std::isnan(opt.h) ? 1.0 / L : opt.h;
  require(h >= 0, "online_rna: mixing must be >= 0");
  Stopwatch clock;
  Trace t;
  t.method = "online_rna";
  t.num["L"] = L;
  t.num["mu"] = f.params.mu;
  t.num["N"] = N;
  t.num["h"] = h;
  t.num["lambda"] = opt.lambda;
  t.num["memory"] = opt.memory;
  t.tag["safeguard"] = opt.safeguard == Safeguard::none ? "none"
                       : opt.safeguard == Safeguard::descent ? "descent" : "linesearch";

  PairBuffer buf(opt.memory);
  std::deque<double> fvals;
  Vec x = x0;
  std::int64_t calls = 0;
  int fallbacks = 0;
  Record r0 = make_record(0, x, f);
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  for (int k = 0; k < N; ++k) {
    Vec g = f.gradient(x);
    ++calls;
    buf.push(x, g);
    fvals.push_back(f.value(x));
    if (static_cast<int>(fvals.size()) > opt.memory) fvals.pop_front();

    Vec xn;
    bool flag = false;
    try {
      auto res = rna(buf, h, opt.lambda, make_cref(opt.cref, buf.size()));
      if (opt.safeguard == Safeguard::linesearch) {
        Vec base = buf.X() * res.c, dir = buf.G() * res.c;
        double step = detail::golden_section([&](double s) { return f.value(base - s * dir); }, 0.0, 4.0 / L, 20);
        xn = base - step * dir;
      } else {
        xn = res.x_extr;
      }
      if (!xn.allFinite()) throw SingularSystem("online_rna: non-finite extrapolation");
      if (opt.safeguard == Safeguard::descent) {
        const double fmin = *std::min_element(fvals.begin(), fvals.end());
        if (!(f.value(xn) < fmin)) {
          xn = x - h * g;
          flag = true;
        }
      }
    } catch (SingularSystem&) {
      xn = x - h * g;
      flag = true;
    }
    fallbacks += flag;
    guard_finite(xn, t, "online_rna");
    x = xn;
    Record r = make_record(k + 1, x, f);
    r.y = buf.x(buf.size() - 1);
    r.flagged = flag;
    r.grad_calls = calls;
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
  }
  t.num["fallbacks"] = fallbacks;
  return t;
}

Trace prox_rna(const CompositeProblem& p, const Vec& x0, int N, const ProxRnaOptions& opt) {
  require(N >= 0, "prox_rna: N must be >= 0");
  require(opt.memory >= 1, "prox_rna: memory must be >= 1");
  require(opt.lambda > 0, "prox_rna: lambda must be positive");
  require(p.h.has_prox(), "prox_rna: h needs a proximal operator");
  const double gamma = std::isnan(opt.gamma) ? 1.0 / p.f.params.L : opt.gamma;
  require(gamma > 0, "prox_rna: gamma must be positive");
  Stopwatch clock;
  Trace t;
  t.method = "prox_rna";
  t.num["L"] = p.f.params.L;
  t.num["mu"] = p.f.params.mu;
  t.num["N"] = N;
  t.num["gamma"] = gamma;
  t.num["lambda"] = opt.lambda;
  t.num["memory"] = opt.memory;

  PairBuffer buf(opt.memory);
  std::int64_t grad_calls = 0, prox_calls = 0;
  int fallbacks = 0;
  Record r0 = make_record(0, x0, p);
  r0.z = x0;
  r0.wall_ns = clock.ns();
  t.records.push_back(r0);
  // seed pair (x0, grad f(x0)) makes the first extrapolation z_1 = x0 - gamma grad f(x0)
  if (N > 0) {
    buf.push(x0, p.f.gradient(x0));
    ++grad_calls;
  }
  for (int k = 1; k <= N; ++k) {
    Vec z;
    bool flag = false;
    try {
      z = rna(buf, gamma, opt.lambda, make_cref(opt.cref, buf.size())).x_extr;
      if (!z.allFinite()) throw SingularSystem("prox_rna: non-finite extrapolation");
    } catch (SingularSystem&) {
      const int last = buf.size() - 1;
      z = buf.x(last) - gamma * buf.g(last);
      flag = true;
    }
    fallbacks += flag;
    guard_finite(z, t, "prox_rna");
    Vec x = p.h.prox(z, gamma);
    ++prox_calls;
    Record r = make_record(k, x, p);
    r.z = z;
    r.flagged = flag;
    r.grad_calls = grad_calls;
    r.prox_calls = prox_calls;
    r.wall_ns = clock.ns();
    t.records.push_back(std::move(r));
    if (k < N) {
      Vec g = p.f.gradient(x) + (z - x) / gamma;
      ++grad_calls;
      buf.push(z, g);
    }
  }
  t.num["fallbacks"] = fallbacks;
  return t;
}

}  // namespace accel
