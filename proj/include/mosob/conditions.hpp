#pragma once

#include <cstdint>
#include <vector>

#include "mosob/gyf.hpp"
#include "mosob/report.hpp"
#include "mosob/young.hpp"

namespace mosob {

struct BallSample {
  int kmin = 0, kmax = 12;  // radii 2^{-k}
  int centers = 32;
  int pairs = 16;
  int tvalues = 24;
  double region = 1.0;  // centers uniform in [-region, region]^n
  std::uint64_t seed = 1;
  double beta_floor = 1e-2;
};

ConditionReport check_A0(const Gyf& phi, const std::vector<Point>& xs);
ConditionReport check_A1(const Gyf& phi, const BallSample& bs = {});

struct DecaySample {
  int kmax = 12;         // shells |x| = 2^k, k = 0..kmax
  int directions = 16;
  int tvalues = 60;
  double t_span = 1e-12;  // t ladder runs from t_span * t1 to t1
};
// h == nullptr: the smallest admissible h is tabulated on the shells and its
// integral estimated; the verdict is that this h is bounded and integrable
ConditionReport check_A2pp(const Gyf& phi, const SpatialField* h, double beta, const DecaySample& ds = {});

ConditionReport check_normalized(const Gyf& phi, const BallSample& bs, const std::vector<Point>& xs);

struct GrowthCheck {
  bool converges = false;
  double value = 0;  // integral over (0, 1]
  double ratio = 0;  // dyadic ratio near 0
};
// integrability of (t / phi_inf(t))^{alpha/(n-alpha)} near 0
GrowthCheck check_growth_condition(const Gyf& phi, double alpha);

struct SlowerGrowth {
  bool slower = false;
  std::vector<double> c_grid;
  std::vector<double> slopes;       // log-log slope of the ratio over the top of the ladder
  std::vector<double> last_ratio;
};
SlowerGrowth check_grows_more_slowly(const Gyf& theta, const Gyf& phi, const std::vector<double>& c_grid,
                                     const std::vector<Point>& xs, int ladder_top = 60);

}  // namespace mosob
