#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "mosob/gyf.hpp"
#include "mosob/normalize.hpp"
#include "mosob/quadrature.hpp"
#include "mosob/report.hpp"
#include "mosob/young.hpp"

namespace mosob {

struct TableOptions {
  double t_lo = 1e-6;
  double t_hi = 1e6;
  int points = 512;
  double rtol = 1e-11;
};

enum class TailTag { FiniteLimit, Diverges };
const char* tail_name(TailTag t);

// I(t) = int_0^t g for a nonnegative g that is integrable at 0 and regularly
// varying at both ends. Tabulated on a log grid; values between nodes and
// beyond the grid are completed by exact quadrature, the inverse by a
// safeguarded Newton iteration started from log-log interpolation.
class CumulativeTable {
 public:
  // throws GrowthConditionError when the integral diverges at 0
  CumulativeTable(ScalarFn g, std::vector<double> breaks, const TableOptions& o);

  double value(double t) const;
  // inf{t : I(t) >= s}; +inf once s reaches a finite limit
  ExtReal inverse(double s) const;
  ExtReal limit() const { return limit_; }
  TailTag tail() const { return tail_; }
  // g ~ t^{-gamma} over the last two decades of the grid
  double tail_exponent() const { return gamma_; }
  const std::vector<double>& grid() const { return tau_; }
  const std::vector<double>& values() const { return I_; }

 private:
  double segment(double a, double b) const;
  double solve(double s, double lo, double hi, double guess) const;

  ScalarFn g_;
  std::vector<double> breaks_;
  TableOptions opt_;
  std::vector<double> tau_, I_;
  double head_slope_ = 1.0;  // d log I / d log t below the grid
  double gamma_ = 0.0;
  TailTag tail_ = TailTag::Diverges;
  ExtReal limit_ = kInf;
};

// Sobolev conjugate of order alpha built on a (normalized) base:
//   H(x,t) = (int_0^t (tau/base(x,tau))^{alpha/(n-alpha)} dtau)^{(n-alpha)/n}
//   phi_{n/alpha}(x,t) = base(x, H^{-1}(x,t))
// Per-x tables are built on first use and cached; x-independent bases share
// one table and radial bases are keyed by |x|.
class SobolevConjugate {
 public:
  SobolevConjugate(GyfPtr base, double alpha, TableOptions o = {}, const std::vector<Point>& prebuild = {});

  int dim() const { return base_->dim(); }
  double alpha() const { return alpha_; }
  const GyfPtr& base() const { return base_; }
  const TableOptions& options() const { return opt_; }

  double H(const Point& x, double t) const;
  ExtReal H_inverse(const Point& x, double s) const;
  ExtReal conjugate(const Point& x, double t) const;
  ExtReal limit(const Point& x) const;  // lim_{t->inf} H(x,t)
  TailTag tail(const Point& x) const;
  std::shared_ptr<const CumulativeTable> table(const Point& x) const;

 private:
  std::vector<double> key(const Point& x) const;

  GyfPtr base_;
  double alpha_;
  TableOptions opt_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<double>, std::shared_ptr<const CumulativeTable>> tables_;
};
using SobolevPtr = std::shared_ptr<const SobolevConjugate>;

// normalizes phi with the recipe first (bar for the whole space, hat for
// domains of finite measure)
SobolevPtr make_sobolev_conjugate(GyfPtr phi, double alpha, Recipe r, TableOptions o = {});
// phi_{n/alpha} as a generalized Young function
GyfPtr sobolev_conjugate_gyf(SobolevPtr sc);

// direct evaluation, no table
double H_transform(const Gyf& base, double alpha, const Point& x, double t, double rtol = 1e-11);
// the alpha = 1 transform written with n' = n/(n-1)
double H_n_transform(const Gyf& base, const Point& x, double t, double rtol = 1e-11);

// closed forms for t^{p(x)} (with the circ base) and for t^p + a t^q
ExtReal oracle_variable_exponent(int n, double p_inf, double p_x, double t);
ExtReal oracle_double_phase(int n, double p, double q, double a, double t);
// int_0^inf ds / (s^{p-1} + s^{q-1})^{1/(n-1)}, raised to 1/n'; finite for q > n
double double_phase_t_inf(int n, double p, double q);
GyfPtr oracle_variable_exponent_gyf(int n, SpatialField p);  // p must declare its limit
GyfPtr oracle_double_phase_gyf(int n, double p, double q, SpatialField a);

// psi, lambda and omega attached to a normalized base
class KernelFns {
 public:
  KernelFns(GyfPtr base, double alpha, double k, double sigma, TableOptions o = {});
  // omega_n max(2^{-n}, n/(n-alpha)), the smallest admissible sigma
  static double default_sigma(int n, double alpha);

  double k() const { return k_; }
  double sigma() const { return sigma_; }
  double alpha() const { return alpha_; }
  const GyfPtr& base() const { return base_; }

  ExtReal psi(const Point& x, double t) const;
  double psi_inverse(const Point& x, double s) const;
  ExtReal lambda(const Point& x, double delta) const;
  ExtReal omega(const Point& x, double t) const;

 private:
  std::shared_ptr<const CumulativeTable> table(const Point& x) const;
  SlicePtr psi_slice(const Point& x) const;

  GyfPtr base_;
  double alpha_, k_, sigma_, m_;
  TableOptions opt_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<double>, std::shared_ptr<const CumulativeTable>> tables_;
};

// c1 k H <= omega <= c2 k H over the sample
VerificationReport check_cistro(const KernelFns& kf, const SobolevConjugate& sc, const SampleSpec& s);

}  // namespace mosob
