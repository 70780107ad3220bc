#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mosob/ext_real.hpp"
#include "mosob/spatial_field.hpp"

namespace mosob {

// t -> phi(x, t) at a fixed x. Fields are evaluated once when the slice is
// built, so t-heavy algorithms (inverse, conjugate, quadrature) run on slices.
class Slice {
 public:
  virtual ~Slice() = default;
  virtual ExtReal value(double t) const = 0;
  virtual std::optional<double> inverse(double) const { return std::nullopt; }
  virtual std::optional<ExtReal> conjugate(double) const { return std::nullopt; }
  virtual std::optional<double> conjugate_inverse(double) const { return std::nullopt; }
  // points where t -> value may have a kink or a jump
  virtual std::vector<double> breaks() const { return {}; }
  virtual double inverse_tol() const { return 1e-10; }
};
using SlicePtr = std::shared_ptr<const Slice>;

class Gyf;
using GyfPtr = std::shared_ptr<const Gyf>;

class Gyf {
 public:
  virtual ~Gyf() = default;
  virtual int dim() const = 0;
  // throws DomainError when x leaves a field's domain
  virtual SlicePtr slice(const Point& x) const = 0;
  virtual bool x_independent() const = 0;
  // depends on x through |x| only
  virtual bool radial() const { return x_independent(); }
  // closed-form limsup_{|x|->inf} phi(x, .), when every field declares a limit
  virtual GyfPtr declared_limit() const { return nullptr; }
  // false for the equivalent-only normalizations (circ, bullet)
  virtual bool continuous() const { return true; }
  virtual std::string name() const = 0;

  ExtReal operator()(const Point& x, double t) const { return slice(x)->value(t); }
};

// c * t^p, p >= 1
GyfPtr make_power(int n, double p, double c = 1.0);
// x-independent A(t) given as an expression in t, e.g. "exp(t)-1"
GyfPtr make_orlicz(int n, const std::string& expr_in_t);
// t^{p(x)}, or t^{p(x)}/p(x) when scaled
GyfPtr make_variable_exponent(int n, SpatialField p, bool scaled = false);
enum class PhaseCombine { Sum, Max };
// t^p + a(x) t^q, or max(t^p, a(x) t^q)
GyfPtr make_double_phase(int n, double p, double q, SpatialField a, PhaseCombine mode = PhaseCombine::Sum);
// t^{p(x)} + a(x) t^{q(x)}
GyfPtr make_variable_double_phase(int n, SpatialField p, SpatialField q, SpatialField a);
// piecewise linear convex table starting at (0, 0); beyond the last node
// either extrapolate with the last slope or jump to +inf
GyfPtr make_tabulated(int n, std::vector<double> t, std::vector<double> values, bool infinite_tail = false);
// phi(x, t / k)
GyfPtr make_dilated(GyfPtr base, double k);
// escape hatch for oracles and tests
GyfPtr make_lambda(int n, std::function<ExtReal(const Point&, double)> fn, bool x_independent,
                   std::string name = "lambda");

// the conjugate phi~ as a function in its own right (numerical unless closed form)
GyfPtr make_conjugate(GyfPtr base);
SlicePtr conjugate_slice(SlicePtr base);

}  // namespace mosob
