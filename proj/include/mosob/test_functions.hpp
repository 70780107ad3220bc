#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mosob/ext_real.hpp"

namespace mosob {

// u(x) = u(|x|) with its radial derivative; the gradient is u'(|x|) x/|x|
struct RadialProfile {
  std::string name;
  std::function<double(double)> u;
  std::function<double(double)> du;
  double support = kInf;     // u = 0 for r >= support
  std::vector<double> kinks;  // radii where u' jumps

  double operator()(const Point& x) const { return u(x.norm()); }
  double grad_norm(const Point& x) const { return std::abs(du(x.norm())); }
  Point gradient(const Point& x) const;
};

// height * max(1 - r/R, 0)
RadialProfile tent(double R = 1.0, double height = 1.0);
// exp(1 - 1/(1 - (r/R)^2)) inside the ball of radius R
RadialProfile bump(double R = 1.0);
// 1 up to r0, then (1 - s)^k with s = (r - r0)/(R - r0)
RadialProfile plateau(double r0, double R, int k = 2);
// exp(-r^2 / (2 s^2)), no compact support
RadialProfile gaussian(double s = 1.0);
RadialProfile scaled(const RadialProfile& p, double c);

// The radial trial pair behind the necessity statement: g_k(s) = s^{-e} on
// [omega_n, omega_n e^{2^k}], e = (p'-1)/n', and
// u_k(x) = int_{omega_n |x|^n}^inf g_k(s) s^{-1/n'} ds with
// |grad u_k(x)| = n omega_n^{1/n} g_k(omega_n |x|^n).
struct NecessityTrial {
  int n;
  double p;
  int k;

  double exponent() const;
  double s_lo() const;
  double s_hi() const;
  double g(double s) const;
  // T g = u_k(0), closed form
  double T() const;
  RadialProfile profile() const;
};

}  // namespace mosob
