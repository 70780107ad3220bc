#include <cmath>

#include "doctest.h"
#include "mosob/expression.hpp"
#include "mosob/ext_real.hpp"
#include "mosob/monotone_tab.hpp"
#include "mosob/quadrature.hpp"
#include "mosob/spatial_field.hpp"

using namespace mosob;

TEST_CASE("expression grammar") {
  double x[2] = {3.0, 4.0};
  CHECK(Expression::parse("2+abs(x)", 2).eval(x) == doctest::Approx(7.0));
  CHECK(Expression::parse("x1^2 - x2", 2).eval(x) == doctest::Approx(5.0));
  CHECK(Expression::parse("-x1^2", 2).eval(x) == doctest::Approx(-9.0));
  CHECK(Expression::parse("2^3^2", 2).eval(x) == doctest::Approx(512.0));
  CHECK(Expression::parse("min(x1, x2) * max(1, 2) / 4", 2).eval(x) == doctest::Approx(1.5));
  CHECK(Expression::parse("exp(log(5))", 2).eval(x) == doctest::Approx(5.0));
  CHECK(Expression::parse("abs(x1 - x2)", 2).eval(x) == doctest::Approx(1.0));
  CHECK(Expression::parse("r", 2).eval(x) == doctest::Approx(5.0));
  CHECK(Expression::parse("2+abs(x)", 2).radial());
  CHECK_FALSE(Expression::parse("x1", 2).radial());
  CHECK(Expression::parse("t^2/2", 0, true).eval({}, 3.0) == doctest::Approx(4.5));
}

TEST_CASE("expression errors name the problem") {
  CHECK_THROWS_AS(Expression::parse("x3", 2), ConfigError);
  CHECK_THROWS_AS(Expression::parse("t", 2), ConfigError);
  CHECK_THROWS_AS(Expression::parse("(1+2", 2), ConfigError);
  CHECK_THROWS_AS(Expression::parse("foo(1)", 2), ConfigError);
  CHECK_THROWS_AS(Expression::parse("1 2", 2), ConfigError);
}

TEST_CASE("spatial fields") {
  auto p = SpatialField::expression("2+abs(x)", 2, 2, kInf);
  Point x(2);
  x << 0.6, 0.8;
  CHECK(p(x) == doctest::Approx(3.0));
  auto bad = SpatialField::expression("1-abs(x)", 2, 0, 1);
  x << 3, 4;
  CHECK_THROWS_AS(bad(x), DomainError);

  SpatialField::GridData g;
  g.radial = true;
  g.r = {0, 1, 2};
  g.values = {1, 3, 5};
  auto f = SpatialField::grid(g, 2);
  x << 0.5, 0;
  CHECK(f(x) == doctest::Approx(2.0));
  x << 3, 0;
  CHECK_THROWS_AS(f(x), DomainError);

  SpatialField::GridData b;
  b.radial = false;
  b.lo = Eigen::Vector2d(0, 0);
  b.hi = Eigen::Vector2d(1, 1);
  b.shape = {2, 2};
  b.values = {0, 1, 1, 2};  // v = x1 + x2
  auto tf = SpatialField::grid(b, 2);
  x << 0.25, 0.5;
  CHECK(tf(x) == doctest::Approx(0.75));
}

TEST_CASE("monotone tab inverse is left-continuous") {
  MonotoneTab tab({0, 1, 2, 3}, {0, 1, 1, 4}, MonotoneTab::Interp::Linear, MonotoneTab::Tail::Diverges);
  CHECK(tab.value(2.5) == doctest::Approx(2.5));
  CHECK(tab.inverse(1.0) == doctest::Approx(1.0));  // flat part: leftmost point
  CHECK(tab.inverse(0.5) == doctest::Approx(0.5));
  CHECK(tab.inverse(2.5) == doctest::Approx(2.5));
  CHECK(is_inf(tab.inverse(5.0)));

  auto g = MonotoneTab::log_grid(1e-3, 1e3, 61);
  std::vector<double> v;
  for (double t : g) v.push_back(std::pow(t, 1.5));
  MonotoneTab ll(g, v, MonotoneTab::Interp::LogLog, MonotoneTab::Tail::Diverges);
  CHECK(ll.value(0.37) == doctest::Approx(std::pow(0.37, 1.5)).epsilon(1e-12));
  CHECK(ll.inverse(std::pow(7.3, 1.5)) == doctest::Approx(7.3).epsilon(1e-12));
  CHECK_THROWS(MonotoneTab({0, 1}, {1, 0}, MonotoneTab::Interp::Linear, MonotoneTab::Tail::Diverges));
}

TEST_CASE("adaptive quadrature") {
  auto q = integrate([](double x) { return std::sin(x); }, 0, M_PI, 1e-12);
  CHECK(q.value == doctest::Approx(2.0).epsilon(1e-12));
  auto inf = integrate([](double x) { return x > 0.5 ? kInf : 1.0; }, 0, 1, 1e-8);
  CHECK(is_inf(inf.value));
  // kink handled through a breakpoint
  double br[] = {0.3};
  auto k = integrate([](double x) { return std::abs(x - 0.3); }, 0, 1, br, 1e-12);
  CHECK(k.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-12));
}

TEST_CASE("dyadic integration from zero") {
  // tau^{-1/2}: ratio 2^{-1/2}, exact value 2 sqrt(t)
  auto a = integrate_from_zero([](double x) { return 1 / std::sqrt(x); }, 4.0, 1e-10);
  CHECK(a.finite);
  CHECK(a.value == doctest::Approx(4.0).epsilon(1e-9));
  auto b = integrate_from_zero([](double x) { return 1 / x; }, 1.0, 1e-10);
  CHECK_FALSE(b.finite);
  auto c = integrate_from_zero([](double x) { return std::pow(x, -1.5); }, 1.0, 1e-10);
  CHECK_FALSE(c.finite);
  // regularly varying but not a pure power
  auto d = integrate_from_zero([](double x) { return std::pow(x, -0.5) + x * x; }, 2.0, 1e-10);
  CHECK(d.value == doctest::Approx(2 * std::sqrt(2.0) + 8.0 / 3).epsilon(1e-9));
}

TEST_CASE("golden section") {
  double f = 0;
  double x = golden_max([](double t) { return -(t - 0.3) * (t - 0.3); }, 0, 1, 1e-12, &f);
  CHECK(x == doctest::Approx(0.3).epsilon(1e-6));
}
