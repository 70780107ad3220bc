#pragma once

#include <functional>
#include <span>

namespace mosob {

using ScalarFn = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  int evals = 0;
};

// Adaptive Gauss-Kronrod 7/15 with global error control. A +inf sample
// makes the whole integral +inf.
QuadResult integrate(const ScalarFn& f, double a, double b, double rtol, double atol = 0.0,
                     int max_intervals = 4000);

// Same, with the interval split at the given interior breakpoints first.
QuadResult integrate(const ScalarFn& f, double a, double b, std::span<const double> breaks,
                     double rtol, double atol = 0.0);

// Integral over (0, t] for integrands regularly varying at 0. Works down the
// dyadic intervals (t/2^{k+1}, t/2^k] and closes the remainder with the
// geometric tail of the last two interval ratios.
struct TailQuad {
  double value = 0.0;
  bool finite = true;
  double ratio = 0.0;  // I_{k}/I_{k-1}; equals 2^{-(e+1)} for a power tau^e
  int levels = 0;
};
TailQuad integrate_from_zero(const ScalarFn& f, double t, double rtol,
                             std::span<const double> breaks = {});

// Golden-section maximiser of a unimodal function on [a, b].
double golden_max(const ScalarFn& f, double a, double b, double rtol, double* fmax = nullptr);

}  // namespace mosob
