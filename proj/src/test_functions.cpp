#include "mosob/test_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace mosob {

Point RadialProfile::gradient(const Point& x) const {
  double r = x.norm();
  if (r == 0) return Point::Zero(x.size());
  return du(r) / r * x;
}

RadialProfile tent(double R, double h) {
  RadialProfile p;
  p.name = "tent";
  p.u = [=](double r) { return r < R ? h * (1 - r / R) : 0.0; };
  p.du = [=](double r) { return r < R ? -h / R : 0.0; };
  p.support = R;
  p.kinks = {R};
  return p;
}

RadialProfile bump(double R) {
  RadialProfile p;
  p.name = "bump";
  p.u = [=](double r) {
    double s = r / R;
    return s < 1 ? std::exp(1 - 1 / (1 - s * s)) : 0.0;
  };
  p.du = [=](double r) {
    double s = r / R;
    if (s >= 1) return 0.0;
    double d = 1 - s * s;
    return std::exp(1 - 1 / d) * (-2 * s / (d * d)) / R;
  };
  p.support = R;
  return p;
}

RadialProfile plateau(double r0, double R, int k) {
  if (!(R > r0 && r0 >= 0) || k < 1) throw std::invalid_argument("plateau needs 0 <= r0 < R and k >= 1");
  RadialProfile p;
  p.name = "plateau";
  const double w = R - r0;
  p.u = [=](double r) {
    if (r <= r0) return 1.0;
    if (r >= R) return 0.0;
    return std::pow(1 - (r - r0) / w, k);
  };
  p.du = [=](double r) {
    if (r <= r0 || r >= R) return 0.0;
    return -k * std::pow(1 - (r - r0) / w, k - 1) / w;
  };
  p.support = R;
  p.kinks = {r0};
  if (k == 1) p.kinks.push_back(R);
  return p;
}

RadialProfile gaussian(double s) {
  RadialProfile p;
  p.name = "gaussian";
  p.u = [=](double r) { return std::exp(-r * r / (2 * s * s)); };
  p.du = [=](double r) { return -r / (s * s) * std::exp(-r * r / (2 * s * s)); };
  return p;
}

RadialProfile scaled(const RadialProfile& p, double c) {
  RadialProfile q = p;
  auto u = p.u, du = p.du;
  q.u = [u, c](double r) { return c * u(r); };
  q.du = [du, c](double r) { return c * du(r); };
  return q;
}

// ---------------------------------------------------------- necessity

double NecessityTrial::exponent() const {
  const double pc = p / (p - 1), np = n / (n - 1.0);
  return (pc - 1) / np;
}

double NecessityTrial::s_lo() const { return unit_ball_volume(n); }
double NecessityTrial::s_hi() const { return unit_ball_volume(n) * std::exp(std::ldexp(1.0, k)); }

double NecessityTrial::g(double s) const { return (s >= s_lo() && s <= s_hi()) ? std::pow(s, -exponent()) : 0.0; }

double NecessityTrial::T() const {
  // int s^{-e - 1/n'} over [s_lo, s_hi]
  const double a = exponent() + (n - 1.0) / n;
  if (std::abs(a - 1) < 1e-14) return std::log(s_hi() / s_lo());
  return (std::pow(s_hi(), 1 - a) - std::pow(s_lo(), 1 - a)) / (1 - a);
}

RadialProfile NecessityTrial::profile() const {
  NecessityTrial self = *this;
  const double wn = unit_ball_volume(n), a = exponent() + (n - 1.0) / n;
  auto prim = [a](double s) { return std::abs(a - 1) < 1e-14 ? std::log(s) : std::pow(s, 1 - a) / (1 - a); };
  RadialProfile pr;
  pr.name = "necessity_trial";
  pr.u = [=](double r) {
    double s = std::max(wn * std::pow(r, self.n), self.s_lo());
    if (s >= self.s_hi()) return 0.0;
    return prim(self.s_hi()) - prim(s);
  };
  pr.du = [=](double r) {
    double s = wn * std::pow(r, self.n);
    // d/dr int_{wn r^n} g(s) s^{-1/n'} ds
    return -self.g(s) * std::pow(s, -(self.n - 1.0) / self.n) * self.n * wn * std::pow(r, self.n - 1);
  };
  pr.support = std::pow(s_hi() / wn, 1.0 / n);
  pr.kinks = {1.0};
  return pr;
}

}  // namespace mosob
