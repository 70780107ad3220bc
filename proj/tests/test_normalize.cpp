#include <cmath>
#include <random>

#include "doctest.h"
#include "mosob/conditions.hpp"
#include "mosob/normalize.hpp"

using namespace mosob;

namespace {

Point pt(double a, double b) {
  Point x(2);
  x << a, b;
  return x;
}

GyfPtr dp_decay() { return make_double_phase(2, 2, 3, SpatialField::expression("exp(-abs(x))", 2, 0, 1)); }

}  // namespace

TEST_CASE("phi0") {
  auto f = make_phi0(make_power(2, 2));
  CHECK((*f)(pt(0, 0), 1.0) == doctest::Approx(1.0));
  CHECK((*f)(pt(0, 0), 0.9) == doctest::Approx(0.81));
  auto d = make_phi0(make_double_phase(2, 2, 3, SpatialField::constant(1, 2)));
  CHECK((*d)(pt(0.3, 0.1), 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  // a function with phi^{-1}(x,1) = 0 cannot be normalized
  auto flat = make_lambda(2, [](const Point&, double t) { return t > 0 ? kInf : 0.0; }, true, "degenerate");
  CHECK_THROWS_AS((*make_phi0(flat))(pt(0, 0), 1.0), NormalizationError);
}

TEST_CASE("bar and hat") {
  const double p = 2.5;
  auto b = make_bar(make_power(2, p));
  auto h = make_hat(make_power(2, p));
  for (double t : {1.0, 1.5, 4.0}) CHECK((*b)(pt(1, 1), t) == doctest::Approx(2 * std::pow(t, p) - 1));
  // below 1 the limit is capped from below by the chord 2t-1
  for (double t : {0.1, 0.5, 0.99}) CHECK((*b)(pt(1, 1), t) == doctest::Approx(std::max(std::pow(t, p), 2 * t - 1)));
  CHECK((*h)(pt(0, 0), 0.5) == 0.5);
  CHECK((*h)(pt(0, 0), 2.0) == doctest::Approx(std::pow(2, p + 1) - 1));

  auto d = dp_decay();
  auto db = make_bar(d);
  auto dh = make_hat(d);
  double maxdiff = 0;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3), tt(1, 50);
  for (int i = 0; i < 200; ++i) {
    Point x = pt(u(rng), u(rng));
    double t = tt(rng);
    maxdiff = std::max(maxdiff, std::abs((*db)(x, t) - (*dh)(x, t)));
  }
  CHECK(maxdiff == 0.0);
  auto bs = BallSample{};
  bs.centers = 6;
  bs.pairs = 4;
  bs.tvalues = 10;
  auto s = SampleSpec::make(2, 2, 10, 3.0, 1, 1, 1);
  CHECK(check_normalized(*db, bs, s.xs).holds);
  CHECK(check_normalized(*dh, bs, s.xs).holds);
}

TEST_CASE("x-independent bar") {
  // phi(1) = 1: bar is 2 phi - 1 above 1
  auto a = make_orlicz(2, "t^2/2+t^3/2");
  auto b = make_bar(a);
  for (double t : {0.2, 0.7, 1.0, 3.0}) {
    double v = 0.5 * t * t + 0.5 * t * t * t;
    CHECK((*b)(pt(0, 0), t) == doctest::Approx(t >= 1 ? 2 * v - 1 : std::max(v, 2 * t - 1)).epsilon(1e-9));
  }
}

TEST_CASE("circ and bullet") {
  auto a = SpatialField::expression("0.3+0.7*exp(-abs(x))", 2, 0, 1);
  auto d = make_double_phase(2, 2, 3, a);
  auto c = make_circ(d);
  // limit a -> 0.3 found by the sphere sup
  CHECK((*c)(pt(1, 2), 0.5) == doctest::Approx(0.25 + 0.3 * 0.125).epsilon(1e-9));
  CHECK((*c)(pt(1, 2), 2.0) == doctest::Approx((*d)(pt(1, 2), 2.0)));
  CHECK(c->equivalent_only());
  auto bl = make_bullet(d);
  CHECK((*bl)(pt(1, 2), 0.5) == 0.5);

  auto s = SampleSpec::make(2, 5, 10, 3.0, 1e-3, 1e3, 40);
  auto e = estimate_equivalence(*c, *make_bar(d), EquivMode::Approx, s);
  CHECK(e.ok);
  CHECK(e.c2 / e.c1 < 20);
  CHECK_THROWS_AS(make_circ(make_orlicz(2, "exp(t)-1")), PreconditionError);
}

TEST_CASE("sandwich inequalities") {
  auto p = make_power(2, 2);
  auto sp = SampleSpec::make(2, 1, 0, 1.0, 1, 1, 1);
  auto r = check_sandwiches(*p, *make_bar(p), 1.0, sp);
  CHECK(r.pass);
  CHECK(r.max_violation == 0.0);

  auto d = dp_decay();
  auto s = SampleSpec::make(2, 8, 99, 4.0, 1e-3, 1e3, 100);
  double beta = check_A0(*d, s.xs).beta;
  auto rb = check_sandwiches(*d, *make_bar(d), beta, s);
  CHECK(rb.samples == 10000);
  CHECK(rb.pass);
  auto rh = check_sandwiches(*d, *make_hat(d), beta, s);
  CHECK(rh.pass);
}

TEST_CASE("ball comparisons for normalized functions") {
  // phi(x,t) <= phi(y,t/beta) for t <= beta phi^{-1}(y,1/|B|), and the conjugate
  // analogue (beta/2) phi~^{-1}(x,t) <= phi~^{-1}(y,t) for t <= 1/|B|
  auto nb = make_bar(dp_decay());
  BallSample bs;
  bs.centers = 4;
  bs.pairs = 3;
  bs.tvalues = 8;
  auto s = SampleSpec::make(2, 2, 6, 3.0, 1, 1, 1);
  double beta = check_normalized(*nb, bs, s.xs).beta;
  REQUIRE(beta > 0);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2, 2), v(0, 1);
  int bad = 0;
  for (int k = 1; k <= 6; ++k) {
    double r = std::ldexp(1.0, -k);
    double vol = M_PI * r * r;
    for (int i = 0; i < 6; ++i) {
      Point c = pt(u(rng), u(rng));
      Point x = c + pt(r * v(rng), 0) * 0.7, y = c - pt(0, r * v(rng)) * 0.7;
      auto fx = nb->slice(x), fy = nb->slice(y);
      double tmax = beta * left_inverse(*fy, 1 / vol);
      for (double f : {0.01, 0.3, 1.0}) {
        double t = f * tmax;
        if (fx->value(t) > fy->value(t / beta) * (1 + 1e-9)) ++bad;
        double tc = f / vol;
        if (0.5 * beta * conjugate_inverse(*fx, tc) > conjugate_inverse(*fy, tc) * (1 + 1e-8)) ++bad;
      }
    }
  }
  CHECK(bad == 0);
}
