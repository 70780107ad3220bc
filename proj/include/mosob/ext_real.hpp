#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace mosob {

// Values in [0, +inf]; IEEE infinity is the distinguished element.
using ExtReal = double;
using Point = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf(ExtReal v) { return std::isinf(v) && v > 0; }
inline bool is_finite(ExtReal v) { return std::isfinite(v); }

// 0 * inf = 0, the measure-theoretic convention used for weights and
// modulars (a null set carrying an infinite integrand contributes nothing).
inline ExtReal mul0(double w, ExtReal v) { return (w == 0.0 || v == 0.0) ? 0.0 : w * v; }

// Ratio with 0/0 := 1 (both sides vanish at t = 0).
inline double ratio01(double num, double den) {
  if (num == 0.0 && den == 0.0) return 1.0;
  if (den == 0.0) return kInf;
  return num / den;
}

inline bool rel_close(double a, double b, double rtol, double atol = 0.0) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
}

double unit_ball_volume(int n);    // omega_n
double unit_sphere_area(int n);    // n * omega_n = |S^{n-1}|

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NormalizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GrowthConditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct KernelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  ConfigError(std::string key, std::string what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key(std::move(key)) {}
  std::string key;
};

}  // namespace mosob
