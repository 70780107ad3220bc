#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "mosob/gyf.hpp"
#include "mosob/report.hpp"
#include "mosob/young.hpp"

namespace mosob {

enum class Recipe { None, Phi0, Bar, Hat, Circ, Bullet };
Recipe parse_recipe(const std::string& s);  // bar|hat|circ|bullet|none|phi0
std::string recipe_name(Recipe r);

// phi0, bar, hat, circ and bullet built on top of a base function
class DerivedGyf final : public Gyf {
 public:
  DerivedGyf(GyfPtr base, Recipe recipe, const RadiusSchedule& rs = {});

  int dim() const override { return base_->dim(); }
  SlicePtr slice(const Point& x) const override;
  bool x_independent() const override { return base_->x_independent(); }
  bool radial() const override { return base_->radial(); }
  GyfPtr declared_limit() const override;
  bool continuous() const override { return recipe_ != Recipe::Circ && recipe_ != Recipe::Bullet; }
  std::string name() const override;

  const GyfPtr& base() const { return base_; }
  Recipe recipe() const { return recipe_; }
  bool equivalent_only() const { return !continuous(); }
  // phi^{-1}(x, 1), cached per point
  double inverse_at_one(const Point& x) const;

 private:
  SlicePtr phi0_slice(const Point& x) const;

  GyfPtr base_;
  Recipe recipe_;
  GyfPtr limit_;       // phi_inf for circ, (phi0)_inf for bar
  SlicePtr limit_slice_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<double>, double> inv1_;
};
using DerivedPtr = std::shared_ptr<const DerivedGyf>;

DerivedPtr make_phi0(GyfPtr phi);
DerivedPtr make_bar(GyfPtr phi, const RadiusSchedule& rs = {});
DerivedPtr make_hat(GyfPtr phi);
// both require Delta_2 and (A0) on a default sample
DerivedPtr make_circ(GyfPtr phi, const RadiusSchedule& rs = {});
DerivedPtr make_bullet(GyfPtr phi);
// None returns phi unchanged
GyfPtr normalize(GyfPtr phi, Recipe r);

// the two-sided comparisons between phi and its bar/hat normalization
VerificationReport check_sandwiches(const Gyf& phi, const DerivedGyf& derived, double beta, const SampleSpec& s);

}  // namespace mosob
