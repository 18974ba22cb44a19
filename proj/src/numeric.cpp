#include "numeric.hpp"

#include <cmath>

namespace accel::detail {

double golden_section(const std::function<double(double)>& fn, double a, double b, int evals) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  if (evals <= 0) return 0.5 * (a + b);
  double best_t = a, best_f = INFINITY;
  auto probe = [&](double t) {
    double v = fn(t);
    if (std::isnan(v)) v = INFINITY;
    if (v < best_f) {
      best_f = v;
      best_t = t;
    }
    return v;
  };
  if (evals == 1) {
    probe(0.5 * (a + b));
    return best_t;
  }
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = probe(c), fd = probe(d);
  for (int used = 2; used < evals; ++used) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = probe(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = probe(d);
    }
  }
  return best_t;
}

}  // namespace accel::detail
