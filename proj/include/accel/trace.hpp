#pragma once

#include "accel/core.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace accel {

// One row per iteration. `x` is the reported iterate; `y` is the point whose
// gradient produced this row (previous extrapolation point) and `z` the
// auxiliary sequence, both empty when the method has none.
struct Record {
  int k = 0;
  Vec x;
  Vec y;
  Vec z;
  double f = kNaN;  // objective (F = f + h for composite runs)
  double f_gap = kNaN;
  double grad_norm = kNaN;
  double dist_opt = kNaN;
  double potential = kNaN;
  double A = kNaN;   // method accumulator: A_k, B_k or theta_k
  double Lk = kNaN;  // working smoothness estimate
  std::int64_t grad_calls = 0;
  std::int64_t prox_calls = 0;
  std::int64_t inner_iters = 0;
  std::int64_t wall_ns = 0;
  bool flagged = false;  // safeguard fallback or other per-step event
};

struct Trace {
  std::string method;
  std::vector<Record> records;
  std::map<std::string, double> num;       // numeric metadata (L, mu, N, bound, ...)
  std::map<std::string, std::string> tag;  // text metadata (form, mode, ...)

  const Record& back() const { return records.back(); }
  double meta(const std::string& key, double fallback = kNaN) const {
    auto it = num.find(key);
    return it == num.end() ? fallback : it->second;
  }
  std::string text(const std::string& key, const std::string& fallback = "") const {
    auto it = tag.find(key);
    return it == tag.end() ? fallback : it->second;
  }
};

// Thrown when an iterate stops being finite; carries everything up to the
// last finite row.
struct Diverged : Error {
  Trace partial;
  Diverged(const std::string& msg, Trace t) : Error(msg), partial(std::move(t)) {}
};

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  std::int64_t ns() const {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

inline void guard_finite(const Vec& v, Trace& t, const std::string& where) {
  if (!v.allFinite()) throw Diverged(where + ": non-finite iterate", std::move(t));
}

}  // namespace accel
