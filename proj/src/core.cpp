#include "accel/core.hpp"

#include <cstdlib>
#include <mutex>

namespace accel {

namespace {
Tolerance g_tol;
std::once_flag g_tol_once;
bool g_tol_overridden = false;
}  // namespace

Tolerance parse_tolerance(const char* text) {
  Tolerance t;
  if (!text) return t;
  std::string s(text);
  auto comma = s.find(',');
  if (comma == std::string::npos) return t;
  try {
    double a = std::stod(s.substr(0, comma));
    double r = std::stod(s.substr(comma + 1));
    if (a >= 0 && r >= 0 && std::isfinite(a) && std::isfinite(r)) {
      t.atol = a;
      t.rtol = r;
    }
  } catch (...) {
  }
  return t;
}

const Tolerance& tolerance() {
  std::call_once(g_tol_once, [] {
    if (!g_tol_overridden) g_tol = parse_tolerance(std::getenv("ACCEL_TOL"));
  });
  return g_tol;
}

void set_tolerance(const Tolerance& t) {
  std::call_once(g_tol_once, [] {});
  g_tol_overridden = true;
  g_tol = t;
}

}  // namespace accel
