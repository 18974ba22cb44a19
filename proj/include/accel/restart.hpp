#pragma once

#include "accel/oracles.hpp"
#include "accel/trace.hpp"

#include <string>
#include <vector>

namespace accel {

struct HebParams {
  double r = 2.0;
  double mu = 1.0;

  double tau() const { return 1.0 - 2.0 / r; }
  double kappa(double L) const { return L / std::pow(mu, 2.0 / r); }
};

double restart_constant();  // 4 e^{2/e}
double schedule_scale(const HebParams& heb, double L, double f0_gap);  // C*
// ceil(C e^{tau i}) for i = 1.. until the sum reaches N; the last entry is cut so the sum is exactly N
std::vector<int> geometric_schedule(double C, double tau, int N);
double scheduled_bound(const HebParams& heb, double L, double f0_gap, double N);
double grid_bound(const HebParams& heb, double L, double f0_gap, double N);

enum class RestartInner { gd, fgm };
RestartInner parse_restart_inner(const std::string& s);

// Rows: one per inner iteration (x = inner iterate), flagged at epoch ends.
Trace fixed_restart(const Oracle& f, RestartInner inner, int k, const Vec& x0, int epochs);
int fixed_restart_period(double L, double mu);  // ceil(8 L / mu)

// fgm inner with step 1/L; truncated last epoch returns the better of its start and end.
Trace scheduled_restart(const Oracle& f, const HebParams& heb, double L, const Vec& x0, double f0_gap, int N);
Trace run_schedule(const Oracle& f, double L, const std::vector<int>& schedule, const Vec& x0,
                   const std::string& label);

struct GridCell {
  int p = 0;
  int q = 0;
  double final_f = kNaN;
  double final_gap = kNaN;
  int iterations = 0;
  int epochs = 0;
};
struct GridResult {
  Trace best;
  int p = 0;
  int q = 0;
  std::vector<GridCell> cells;
};
std::vector<int> grid_schedule(int p, int q, int N);
std::vector<GridCell> grid_cells(const Oracle& f, double L, const Vec& x0, int N, Exec exec);
GridResult grid_restart(const Oracle& f, double L, const Vec& x0, int N, Exec exec = Exec::openmp);
std::string grid_table_json(const GridResult& g);

}  // namespace accel
