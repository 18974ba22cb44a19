#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace accel {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// error taxonomy
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidArgument : Error {
  using Error::Error;
};
struct Unsupported : Error {
  using Error::Error;
};
struct SingularSystem : Error {
  using Error::Error;
};
struct RunawayL : Error {
  using Error::Error;
};
struct InconsistentCertificate : Error {
  using Error::Error;
};
struct ContractViolation : Error {
  using Error::Error;
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidArgument(msg);
}

struct ClassParams {
  double mu = 0.0;
  double L = 1.0;

  double q() const { return mu / L; }
  double kappa() const { return mu > 0 ? L / mu : kInf; }
  bool valid() const { return mu >= 0 && L > 0 && mu < L && std::isfinite(L); }
};

// Global slack policy: an inequality "lhs <= rhs" passes when
// rhs - lhs >= -(atol + rtol * magnitude).
struct Tolerance {
  double atol = 1e-10;
  double rtol = 1e-9;

  double allowance(double magnitude) const { return atol + rtol * std::abs(magnitude); }
  bool ok(double slack, double magnitude) const { return slack >= -allowance(magnitude); }
};

// Reads ACCEL_TOL="atol,rtol" once; malformed values keep the defaults.
const Tolerance& tolerance();
Tolerance parse_tolerance(const char* text);
// for tests / CLI overrides
void set_tolerance(const Tolerance& t);

// serial kernels are the reference for the OpenMP ones
enum class Exec { serial, openmp };

inline bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace accel
