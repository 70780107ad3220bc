#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mosob/gyf.hpp"

namespace mosob {

ExtReal eval_phi(const Gyf& phi, const Point& x, double t);

// inf{tau >= 0 : phi(tau) >= s}; closed form when the slice has one
double left_inverse(const Slice& phi, double s);
double left_inverse(const Gyf& phi, const Point& x, double s);

// sup_{tau >= 0} (s tau - phi(tau))
ExtReal young_conjugate(const Slice& phi, double s);
ExtReal young_conjugate(const Gyf& phi, const Point& x, double s);
// left inverse of the conjugate
double conjugate_inverse(const Slice& phi, double s);

struct RadiusSchedule {
  int kmax = 20;  // R_k = 2^k, k = 0..kmax
  int directions = 64;
  double eps = 1e-6;
};
std::vector<Point> sphere_directions(int n, int count);

struct PhiInfinity {
  ExtReal value = 0.0;
  bool converged = true;
  double spread = 0.0;  // |S_K - S_{K-1}| at the largest radius
  bool closed_form = false;
};
PhiInfinity phi_infinity(const Gyf& phi, double t, const RadiusSchedule& rs = {});

// x-independent phi_inf as a function: phi itself, the declared limit, or a
// sphere-sup at the largest radius. converged() reports the sphere check.
class SphereSupLimit;
GyfPtr limit_gyf(const GyfPtr& phi, const RadiusSchedule& rs = {});
bool limit_converged(const Gyf& limit);

struct SampleSpec {
  std::vector<Point> xs;
  std::vector<double> ts;
  // origin plus num_x points uniform in [-radius, radius]^n; ts log-spaced
  static SampleSpec make(int n, std::uint64_t seed, int num_x, double radius, double t_lo, double t_hi, int num_t);
  std::size_t size() const { return xs.size() * ts.size(); }
};

enum class EquivMode { Approx, Simeq };
struct Equivalence {
  bool ok = false;
  double c1 = 0, c2 = 0;
  std::size_t samples = 0;
  std::string reason;
};
// approx: c1 phi <= psi <= c2 phi; simeq: phi(x, c1 t) <= psi(x, t) <= phi(x, c2 t)
Equivalence estimate_equivalence(const Gyf& phi, const Gyf& psi, EquivMode mode, const SampleSpec& s);

struct Delta2 {
  bool holds = false;
  double c = 0;         // on the refined ladder
  double c_coarse = 0;  // on the declared ladder
};
Delta2 check_delta2(const Gyf& phi, const SampleSpec& s);

struct PropertyTally {
  std::string property;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst = 0;  // largest relative defect seen (negative = slack)
};
PropertyTally check_convexity(const Gyf& phi, const SampleSpec& s);
PropertyTally check_superlinearity(const Gyf& phi, const SampleSpec& s);
PropertyTally check_fenchel_young(const Gyf& phi, const SampleSpec& s);
PropertyTally check_inverse_sandwich(const Gyf& phi, const SampleSpec& s);
PropertyTally check_inverse_contract(const Gyf& phi, const SampleSpec& s);
PropertyTally check_biconjugate(const Gyf& phi, const SampleSpec& s, double tol = 1e-6);

// single-sample predicates shared by the sweeps above
double convexity_defect(const Slice& f, double s, double t);
double fenchel_young_defect(const Slice& f, double s, double t);
double sandwich_defect(const Slice& f, double t);

}  // namespace mosob
