#pragma once

#include "accel/composite.hpp"
#include "accel/oracles.hpp"
#include "accel/trace.hpp"

#include <string>
#include <vector>

namespace accel {

// theta_{0..N,N}; the last entry uses the 8 theta^2 rule.
std::vector<double> theta_schedule(int N);

// A_0..A_{n}. q = 0 gives the convex recursion A_{k+1} = A_k + (1 + sqrt(4A_k + 1))/2.
std::vector<double> fgm_A(int n, double q);
std::vector<double> item_A(int n, double q);

// Rows: x = y_k (output point of the k-budget view, y_N is the method output),
// y = y_{k-1}, z = z_k, A = theta_k.
Trace ogm(const Oracle& f, const Vec& x0, int N, int form = 1);
// Rows: x = x_k, y = y_{k-1}, z = z_k (reconstructed for form II), A = A_k.
Trace fgm(const Oracle& f, const Vec& x0, int N, int form = 1, double mu = 0.0);
Trace constant_momentum(const Oracle& f, const Vec& x0, int N, int form = 1);
Trace item(const Oracle& f, const Vec& x0, int N);
Trace tmm(const Oracle& f, const Vec& x0, int N);

enum class Dgf { euclidean, entropy };
Dgf parse_dgf(const std::string& s);
// Bregman divergence D_w(x; z)
double bregman_divergence(Dgf w, const Vec& x, const Vec& z);
Trace bregman_agm(const CompositeProblem& p, Dgf w, const Vec& x0, int N);

struct MonotoneOptions {
  double mu = 0.0;           // fgm / fista / prox_agm
  BacktrackOptions backtrack;  // fista / prox_agm
  Dgf dgf = Dgf::euclidean;  // bregman_agm
};
// x~_{k+1} = argmin F over {x_{k+1}, x~_k}; rows report x~.
Trace monotone_wrap(const std::string& method, const CompositeProblem& p, const Vec& x0, int N,
                    const MonotoneOptions& opt = {});

}  // namespace accel
