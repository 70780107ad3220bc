#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mosob/gyf.hpp"
#include "mosob/normalize.hpp"
#include "mosob/test_functions.hpp"
#include "mosob/verify.hpp"

namespace mosob {

// Declarative description of a generalized Young function:
//   { "family": ..., "n": 2, "params": {...},
//     "fields": [{"name", "kind", "payload", "range", "limit"}] }
// Families and their entries:
//   power                  params p, c
//   orlicz                 params A (expression in t)
//   variable_exponent      field p; params scaled
//   double_phase           params p, q, combine (sum|max); field a
//   variable_double_phase  fields p, q, a
//   tabulated              params t, values, infinite_tail
// Any family accepts params.dilation k, giving phi(x, t/k).
struct FieldSpec {
  std::string name;
  std::string kind;  // constant | expression | grid
  SpatialField field;
};

struct GyfDocument {
  std::string family;
  int n = 2;
  std::vector<FieldSpec> fields;
  std::string source;  // the document text, kept for reports
  GyfPtr phi;

  const FieldSpec* find(const std::string& name) const;
};

// throws ConfigError naming the offending key
GyfDocument parse_gyf_document(const std::string& json_text);
GyfDocument load_gyf_document(const std::string& path);

struct Tolerances {
  double norm = 1e-6;   // relative accuracy of Luxemburg norms
  double rep = 1e-3;    // representation formula
  double drift = 0.5;   // resolution drift of empirical constants
};

struct RunConfig {
  std::string command;           // conjugate | norm | riesz | maximal | conditions | verify | oracle-suite
  std::optional<GyfDocument> phi;
  std::string phi_path;
  double alpha = 1.0;
  int n = 2;
  Recipe recipe = Recipe::Bar;
  bool recipe_given = false;
  std::string experiment;        // verify: weak-type, modular-sobolev, ...
  std::string family = "power";  // built-in radial family when no phi document is given
  std::string input;             // grid CSV for norm, riesz and maximal
  std::vector<double> x;         // evaluation point for conjugate
  double t_lo = 1e-3, t_hi = 1e3;
  int t_points = 64;
  std::vector<double> radii;     // maximal: empty means dyadic from the grid spacing
  Tolerances tol;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 1;
  // verify overrides
  int resolution = 8;
  int levels = 12;
  double r_max = 4096;
  double p = 2;                  // necessity demo exponent
  double beta = 0.5;             // conditions: beta for the decay condition
  int points = 512;              // oracle-suite table points
  std::vector<RadialProfile> profiles;
};

// A run document carries any of the RunConfig keys; a bare GYF document
// (one with a "family" key) yields a config with every default in place.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& json_text);

// "lo:hi:k" with k >= 2
void parse_t_grid(const std::string& spec, double& lo, double& hi, int& k);
RadialProfile parse_profile(const std::string& spec);  // e.g. "tent:1", "bump:0.5", "plateau:0.3:1:2"

}  // namespace mosob
