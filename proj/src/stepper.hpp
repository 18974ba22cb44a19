#pragma once

// Step-at-a-time views of the methods whose x-sequence can be swapped out
// between iterations (needed by the monotone wrapper).

#include "accel/composite.hpp"
#include "accel/momentum.hpp"

#include <memory>

namespace accel::detail {

class Stepper {
 public:
  virtual ~Stepper() = default;
  virtual void step() = 0;
  virtual const Vec& x() const = 0;
  virtual void set_x(const Vec& v) = 0;
  // copies y (last extrapolation point), z, A, Lk and counters into r
  virtual void fill(Record& r) const = 0;
};

std::unique_ptr<Stepper> fgm_stepper(const Oracle& f, const Vec& x0, double mu);
std::unique_ptr<Stepper> constant_momentum_stepper(const Oracle& f, const Vec& x0);
std::unique_ptr<Stepper> fista_stepper(const CompositeProblem& p, const Vec& x0, const BacktrackOptions& opt);
std::unique_ptr<Stepper> prox_agm_stepper(const CompositeProblem& p, const Vec& x0, const BacktrackOptions& opt);
std::unique_ptr<Stepper> bregman_stepper(const CompositeProblem& p, Dgf w, const Vec& x0);

}  // namespace accel::detail
