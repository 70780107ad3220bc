#pragma once

#include <vector>

#include "mosob/grid.hpp"
#include "mosob/gyf.hpp"
#include "mosob/report.hpp"
#include "mosob/test_functions.hpp"

namespace mosob {

// u -> int phi(x, |c u(x)|) dx on a fixed grid; slices are built once
class ModularEvaluator {
 public:
  ModularEvaluator(const Gyf& phi, const GridFunction& u);
  ExtReal at_scale(double c) const;  // modular of c u
  bool zero() const { return idx_.empty(); }

 private:
  std::vector<std::size_t> idx_;  // nodes with u != 0
  std::vector<SlicePtr> slices_;  // parallel to idx_, or a single shared one
  std::vector<double> absu_, w_;
};

ExtReal modular(const Gyf& phi, const GridFunction& u);
// inf{lambda > 0 : modular(u / lambda) <= 1}; +inf when no probed lambda works
double luxemburg_norm(const Gyf& phi, const GridFunction& u, double rtol = 1e-12);

// int |u v| <= 2 ||u||_phi ||v||_phi~ on a shared grid
VerificationReport check_holder(GyfPtr phi, const GridFunction& u, const GridFunction& v);
// ||chi_B||_phi <= 1/(beta phi^{-1}(x,1/|B|)) and
// ||chi_B||_phi~ <= 2/(beta phi~^{-1}(x,1/|B|)) on exact polar cells
VerificationReport char_ball_norm_bounds(GyfPtr phi, const Domain& ball, const Point& x, double beta,
                                         int radial_cells = 24, int angular_cells = 48);

// int_{B(0,r)} |x-y|^{alpha-n} dy for |x| = rho
double ball_potential(int n, double alpha, double rho, double r);

// I_alpha on a radial grid: exact for shell-constant f
class RadialRiesz {
 public:
  RadialRiesz(const GridFunction& grid, double alpha, std::vector<double> eval_radii = {});
  std::vector<double> apply(const std::vector<double>& f) const;
  const std::vector<double>& radii() const { return radii_; }

 private:
  std::size_t cells_;
  std::vector<double> radii_;
  std::vector<double> K_;  // radii x (cells + 1) ball potentials at the edges
};

// at the grid nodes; tensor grids use the direct sum with the host cell
// replaced by the equal-volume ball around x
GridFunction riesz_potential(const GridFunction& f, double alpha);
std::vector<double> riesz_potential(const GridFunction& f, double alpha, const std::vector<Point>& at);

// |B(x, r1) cap B(0, r2)| with |x| = d
double lens_volume(int n, double d, double r1, double r2);
// h, 2h, 4h, ... up to the first value >= top
std::vector<double> dyadic_radii(double h, double top);
// mean of |f| over B(x, r), f = 0 off the grid
double ball_average(const GridFunction& f, const Point& x, double r);
std::vector<double> maximal_function(const GridFunction& f, const std::vector<double>& radii,
                                     const std::vector<Point>& at);
GridFunction maximal_function(const GridFunction& f, const std::vector<double>& radii);

// int_{B(x,delta)} |f|/|x-y|^{n-alpha} <= (n/alpha) omega_n delta^alpha Mf(x), both
// sides on the same discrete measure (host cell spread over its equal-volume ball)
VerificationReport check_local_potential_bound(const GridFunction& f, double alpha, const std::vector<Point>& xs,
                                               const std::vector<double>& deltas);

struct JensenSample {
  int centers = 16;
  std::vector<double> radii;  // defaults to a dyadic ladder
  int points = 4;             // evaluation points per ball besides the center
  unsigned seed = 1;
};
// largest gamma with phi(x, gamma M_B f) <= M_B phi(., f) over sampled balls and x in B
VerificationReport check_average_jensen(const Gyf& phi, const GridFunction& f, double gamma_floor,
                                        const JensenSample& js = {});

struct RepresentationOptions {
  int cells = 512;        // per dimension
  double box_half = 0;    // 0: 1.25 times the support radius
  int near = 4;           // near box half-width in cells
  int gauss = 3;          // Gauss-Legendre points per cell and dimension
  double tol = 1e-3;
};
// (1/(n omega_n)) int grad u(y).(x-y)/|x-y|^n dy, n = 2 or 3
double representation_integral(const RadialProfile& u, int n, const Point& x, const RepresentationOptions& o = {});
VerificationReport representation_formula_check(const RadialProfile& u, int n, const std::vector<Point>& at,
                                                const RepresentationOptions& o = {});

}  // namespace mosob
