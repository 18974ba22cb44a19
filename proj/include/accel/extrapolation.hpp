#pragma once

#include "accel/oracles.hpp"
#include "accel/trace.hpp"

#include <deque>
#include <string>

namespace accel {

// (x_i, g_i) pairs, oldest first. capacity 0 means unbounded.
class PairBuffer {
 public:
  explicit PairBuffer(int capacity = 0) : capacity_(capacity) {
    require(capacity >= 0, "PairBuffer: capacity must be >= 0");
  }
  void push(const Vec& x, const Vec& g);
  int size() const { return static_cast<int>(xs_.size()); }
  int capacity() const { return capacity_; }
  bool empty() const { return xs_.empty(); }
  const Vec& x(int i) const { return xs_[i]; }
  const Vec& g(int i) const { return gs_[i]; }
  Mat X() const;  // d x n
  Mat G() const;  // d x n
  void clear() {
    xs_.clear();
    gs_.clear();
  }

 private:
  int capacity_;
  std::deque<Vec> xs_, gs_;
};

struct ExtrapolationResult {
  Vec c;
  Vec x_extr;
  double gram_cond = kNaN;    // cond of G^T G / ||G^T G||
  double system_min_eig = kNaN;  // smallest eigenvalue of the matrix actually solved
  bool degenerate = false;    // rank-deficient Gram resolved by an exact zero-residual fit
};

// Gaussian elimination with partial pivoting. A pivot with |p| <= rel_threshold * max|A|
// (or exactly zero / non-finite) raises SingularSystem.
Vec solve_gepp(Mat A, Vec b, double rel_threshold);
// ||M||_2 of a symmetric PSD matrix by power iteration (fixed start vector).
double spectral_norm_psd(const Mat& M, int iters = 100, std::uint64_t seed = 7);

ExtrapolationResult offline_na(const PairBuffer& buf);
ExtrapolationResult na_mixing(const PairBuffer& buf, double h);

enum class CRef { uniform, last };
CRef parse_cref(const std::string& s);
Vec make_cref(CRef kind, int n);
// c_ref empty means uniform
ExtrapolationResult rna(const PairBuffer& buf, double h, double lambda, const Vec& c_ref = Vec());

enum class Safeguard { none, descent, linesearch };
Safeguard parse_safeguard(const std::string& s);

struct OnlineOptions {
  double h = kNaN;  // NaN: 1/L
  double lambda = 1e-6;  // relative to the normalized Gram matrix
  int memory = 5;
  Safeguard safeguard = Safeguard::none;
  CRef cref = CRef::uniform;
};
// Rows: x = x_k, flagged when the extrapolation was rejected or unsolvable.
Trace online_rna(const Oracle& f, const Vec& x0, int N, const OnlineOptions& opt = {});

struct ProxRnaOptions {
  double gamma = kNaN;  // NaN: 1/L
  double lambda = 1e-6;  // relative to the normalized Gram matrix
  int memory = 5;
  CRef cref = CRef::uniform;
};
// Rows: x = x_k = prox(z_k), z = z_k.
Trace prox_rna(const CompositeProblem& p, const Vec& x0, int N, const ProxRnaOptions& opt = {});

}  // namespace accel
