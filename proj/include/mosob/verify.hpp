#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mosob/analysis.hpp"
#include "mosob/normalize.hpp"
#include "mosob/report.hpp"
#include "mosob/sobolev.hpp"
#include "mosob/test_functions.hpp"

namespace mosob {

// One end-to-end experiment. Resolution is given per octave of the radial
// grid; every experiment also runs at twice that and reports the drift.
struct Experiment {
  std::string name;
  std::string family = "power";
  GyfPtr phi;
  int n = 2;
  double alpha = 1.0;
  Recipe recipe = Recipe::Bar;
  int resolution = 8;
  double r_max = 4096;  // outer radius of whole-space grids
  int levels = 12;      // t-ladder length
  double drift_tol = 0.5;
  std::uint64_t seed = 1;
  TableOptions table{1e-6, 1e6, 192, 1e-10};
  std::vector<RadialProfile> profiles;  // defaults per experiment when empty
};

// radial families used by the sweeps: power, orlicz, variable exponent, double phase
std::vector<std::pair<std::string, GyfPtr>> builtin_radial_families(int n);

VerificationReport run_weak_type(const Experiment& e);
VerificationReport run_modular_sobolev(const Experiment& e);
VerificationReport run_poincare_zero(const Experiment& e);
VerificationReport run_necessity_demo(int n, double p, int kmax = 8, int cells_per_efold = 16);

struct OracleSuiteOptions {
  int points = 512;
  std::uint64_t seed = 1;
};
VerificationReport run_oracle_suite(const OracleSuiteOptions& o = {});

// the pieces of the oracle suite, each usable on its own
VerificationReport oracle_constant_exponent(int n, double p, int points);
VerificationReport oracle_exponent_at_n(int n, int points);
VerificationReport oracle_double_phase_equivalence(int n, double p, double q, std::uint64_t seed, int points);

// convexity, Fenchel-Young and inverse sandwich over every family
VerificationReport run_property_suite(std::size_t samples, std::uint64_t seed);
// midpoint concavity of H and H_k(t) = k H(t/k)
VerificationReport run_h_transform_checks(std::size_t samples, std::uint64_t seed);
// chi_E norms in L^p for random boxes
VerificationReport run_norm_exactness(int boxes, std::uint64_t seed);
// growth criterion against the closed form on power tails
VerificationReport run_growth_truth_table();
// c1 k H <= omega <= c2 k H for power and double phase
VerificationReport run_cistro_suite(std::uint64_t seed);
VerificationReport run_representation(int cells, int points, std::uint64_t seed);

}  // namespace mosob
