#include "accel/record.hpp"

namespace accel {

void annotate(Record& r, const Oracle& f) {
  r.f = f.value(r.x);
  r.grad_norm = f.gradient(r.x).norm();
  if (f.optimum) {
    r.f_gap = r.f - f.optimum->f;
    r.dist_opt = (r.x - f.optimum->x).norm();
  }
}

void annotate(Record& r, const CompositeProblem& p) {
  r.f = p.F(r.x);
  const double L = p.f.params.L;
  Vec step = p.h.prox(r.x - p.f.gradient(r.x) / L, 1.0 / L);
  r.grad_norm = L * (r.x - step).norm();
  if (p.optimum) {
    r.f_gap = r.f - p.optimum->f;
    r.dist_opt = (r.x - p.optimum->x).norm();
  }
}

Record make_record(int k, const Vec& x, const Oracle& f) {
  Record r;
  r.k = k;
  r.x = x;
  annotate(r, f);
  return r;
}

Record make_record(int k, const Vec& x, const CompositeProblem& p) {
  Record r;
  r.k = k;
  r.x = x;
  annotate(r, p);
  return r;
}

}  // namespace accel
