#include "mosob/normalize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mosob/conditions.hpp"

namespace mosob {

Recipe parse_recipe(const std::string& s) {
  if (s == "none") return Recipe::None;
  if (s == "phi0") return Recipe::Phi0;
  if (s == "bar") return Recipe::Bar;
  if (s == "hat") return Recipe::Hat;
  if (s == "circ") return Recipe::Circ;
  if (s == "bullet") return Recipe::Bullet;
  throw ConfigError("normalize", "expected one of bar|hat|circ|bullet|none, got '" + s + "'");
}

std::string recipe_name(Recipe r) {
  switch (r) {
    case Recipe::None: return "none";
    case Recipe::Phi0: return "phi0";
    case Recipe::Bar: return "bar";
    case Recipe::Hat: return "hat";
    case Recipe::Circ: return "circ";
    case Recipe::Bullet: return "bullet";
  }
  return "?";
}

namespace {

class Phi0Slice final : public Slice {
 public:
  Phi0Slice(SlicePtr b, double s1) : b_(std::move(b)), s1_(s1) {}
  ExtReal value(double t) const override {
    if (t <= 0) return 0.0;
    return std::max(b_->value(s1_ * t), 2 * t - 1);
  }
  std::vector<double> breaks() const override {
    auto br = b_->breaks();
    for (double& v : br) v /= s1_;
    br.push_back(1.0);
    return br;
  }

 private:
  SlicePtr b_;
  double s1_;
};

// value below 1 from `low`, above 1 from `high` (optionally 2*high - 1)
class SplitSlice final : public Slice {
 public:
  SplitSlice(SlicePtr low, SlicePtr high, bool doubled) : low_(std::move(low)), high_(std::move(high)), doubled_(doubled) {}
  ExtReal value(double t) const override {
    if (t <= 0) return 0.0;
    if (t < 1) return low_ ? low_->value(t) : t;
    double v = high_->value(t);
    return doubled_ ? 2 * v - 1 : v;
  }
  std::vector<double> breaks() const override {
    std::vector<double> br{1.0};
    for (double v : high_->breaks())
      if (v > 1) br.push_back(v);
    if (low_)
      for (double v : low_->breaks())
        if (v < 1) br.push_back(v);
    return br;
  }

 private:
  SlicePtr low_, high_;
  bool doubled_;
};

}  // namespace

DerivedGyf::DerivedGyf(GyfPtr base, Recipe recipe, const RadiusSchedule& rs)
    : base_(std::move(base)), recipe_(recipe) {
  if (recipe_ == Recipe::None) throw std::invalid_argument("DerivedGyf: recipe none is the base itself");
  if (recipe_ == Recipe::Circ) {
    limit_ = limit_gyf(base_, rs);
  } else if (recipe_ == Recipe::Bar) {
    if (base_->x_independent() || base_->declared_limit()) {
      limit_ = std::make_shared<DerivedGyf>(limit_gyf(base_, rs), Recipe::Phi0);
    } else {
      // no declared limit: sphere sup of phi0 itself
      limit_ = limit_gyf(std::make_shared<DerivedGyf>(base_, Recipe::Phi0), rs);
    }
  }
  if (limit_) {
    if (!limit_converged(*limit_))
      throw NormalizationError("phi_inf did not converge on the radius schedule for " + base_->name());
    limit_slice_ = limit_->slice(Point::Zero(base_->dim()));
  }
}

double DerivedGyf::inverse_at_one(const Point& x) const {
  std::vector<double> key(x.data(), x.data() + x.size());
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = inv1_.find(key);
    if (it != inv1_.end()) return it->second;
  }
  double s1 = left_inverse(*base_->slice(x), 1.0);
  std::lock_guard<std::mutex> lock(mu_);
  inv1_.emplace(std::move(key), s1);
  return s1;
}

SlicePtr DerivedGyf::phi0_slice(const Point& x) const {
  double s1 = inverse_at_one(x);
  if (!(s1 > 0) || !std::isfinite(s1))
    throw NormalizationError("phi^{-1}(x,1) is " + std::to_string(s1) + " for " + base_->name());
  return std::make_shared<Phi0Slice>(base_->slice(x), s1);
}

SlicePtr DerivedGyf::slice(const Point& x) const {
  switch (recipe_) {
    case Recipe::Phi0: return phi0_slice(x);
    case Recipe::Bar: return std::make_shared<SplitSlice>(limit_slice_, phi0_slice(x), true);
    case Recipe::Hat: return std::make_shared<SplitSlice>(nullptr, phi0_slice(x), true);
    case Recipe::Circ: return std::make_shared<SplitSlice>(limit_slice_, base_->slice(x), false);
    case Recipe::Bullet: return std::make_shared<SplitSlice>(nullptr, base_->slice(x), false);
    case Recipe::None: break;
  }
  return base_->slice(x);
}

GyfPtr DerivedGyf::declared_limit() const {
  auto l = base_->declared_limit();
  if (!l) return nullptr;
  return std::make_shared<DerivedGyf>(l, recipe_);
}

std::string DerivedGyf::name() const { return recipe_name(recipe_) + "(" + base_->name() + ")"; }

DerivedPtr make_phi0(GyfPtr phi) { return std::make_shared<DerivedGyf>(std::move(phi), Recipe::Phi0); }
DerivedPtr make_bar(GyfPtr phi, const RadiusSchedule& rs) {
  return std::make_shared<DerivedGyf>(std::move(phi), Recipe::Bar, rs);
}
DerivedPtr make_hat(GyfPtr phi) { return std::make_shared<DerivedGyf>(std::move(phi), Recipe::Hat); }

namespace {

void require_delta2_a0(const GyfPtr& phi) {
  auto s = SampleSpec::make(phi->dim(), 1, 16, 4.0, 1e-3, 1e3, 30);
  auto d2 = check_delta2(*phi, s);
  if (!d2.holds) throw PreconditionError("Delta_2 fails for " + phi->name() + " (ratio " + std::to_string(d2.c) + ")");
  auto a0 = check_A0(*phi, s.xs);
  if (!a0.holds) throw PreconditionError("(A0) fails for " + phi->name());
}

}  // namespace

DerivedPtr make_circ(GyfPtr phi, const RadiusSchedule& rs) {
  require_delta2_a0(phi);
  return std::make_shared<DerivedGyf>(std::move(phi), Recipe::Circ, rs);
}

DerivedPtr make_bullet(GyfPtr phi) {
  require_delta2_a0(phi);
  return std::make_shared<DerivedGyf>(std::move(phi), Recipe::Bullet);
}

GyfPtr normalize(GyfPtr phi, Recipe r) {
  switch (r) {
    case Recipe::None: return phi;
    case Recipe::Phi0: return make_phi0(std::move(phi));
    case Recipe::Bar: return make_bar(std::move(phi));
    case Recipe::Hat: return make_hat(std::move(phi));
    case Recipe::Circ: return make_circ(std::move(phi));
    case Recipe::Bullet: return make_bullet(std::move(phi));
  }
  return phi;
}

VerificationReport check_sandwiches(const Gyf& phi, const DerivedGyf& derived, double beta, const SampleSpec& s) {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport r;
  r.name = "sandwich_" + recipe_name(derived.recipe());
  r.tolerance = 1e-9;
  r.table.columns = {"t", "x_index", "lower_defect", "upper_defect"};
  if (derived.recipe() != Recipe::Bar && derived.recipe() != Recipe::Hat)
    throw std::invalid_argument("check_sandwiches: recipe must be bar or hat");
  const bool bar = derived.recipe() == Recipe::Bar;
  r.target = bar ? "phi(x,beta t) <= bar phi(x,t) <= phi(x,4t/beta) for t >= 1; "
                   "phi_inf(beta t) <= bar phi(x,t) <= phi_inf(2t/beta) for t < 1"
                 : "hat phi(x,t) <= phi(x,4t/beta) + 1 and phi(x,t) <= hat phi(x,t/beta) + 1";
  GyfPtr lim;
  SlicePtr ls;
  if (bar) {
    lim = limit_gyf(derived.base());
    ls = lim->slice(Point::Zero(phi.dim()));
  }
  auto defect = [](double lhs, double rhs) {
    if (std::isinf(rhs)) return -1.0;
    if (std::isinf(lhs)) return kInf;
    return (lhs - rhs) / std::max({std::abs(rhs), std::abs(lhs), 1e-300});
  };
  double worst = -kInf;
  for (std::size_t xi = 0; xi < s.xs.size(); ++xi) {
    const Point& x = s.xs[xi];
    auto f = phi.slice(x);
    auto d = derived.slice(x);
    for (double t : s.ts) {
      double lo, hi;
      if (bar && t >= 1) {
        lo = defect(f->value(beta * t), d->value(t));
        hi = defect(d->value(t), f->value(4 * t / beta));
      } else if (bar) {
        lo = defect(ls->value(beta * t), d->value(t));
        hi = defect(d->value(t), ls->value(2 * t / beta));
      } else {
        hi = defect(d->value(t), f->value(4 * t / beta) + 1);
        lo = defect(f->value(t), d->value(t / beta) + 1);
      }
      worst = std::max({worst, lo, hi});
      ++r.samples;
      r.table.add({t, static_cast<double>(xi), lo, hi});
    }
  }
  r.max_violation = std::max(worst, 0.0);
  r.constant = beta;
  r.set("beta", beta);
  r.set("largest_relative_defect", worst);
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.finalize(true);
  return r;
}

}  // namespace mosob
