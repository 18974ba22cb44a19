#pragma once

#include "accel/oracles.hpp"
#include "accel/trace.hpp"

namespace accel {

// Fill f, f_gap, grad_norm, dist_opt from the oracle. Does not touch counters.
void annotate(Record& r, const Oracle& f);
// Composite version: f holds F, grad_norm is the prox-gradient mapping norm.
void annotate(Record& r, const CompositeProblem& p);

Record make_record(int k, const Vec& x, const Oracle& f);
Record make_record(int k, const Vec& x, const CompositeProblem& p);

}  // namespace accel
