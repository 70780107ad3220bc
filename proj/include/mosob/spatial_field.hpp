#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mosob/expression.hpp"
#include "mosob/ext_real.hpp"

namespace mosob {

// Scalar field over R^n used for p(x), a(x), h(x).
class SpatialField {
 public:
  enum class Kind { Constant, Expression, Grid };

  // Tabulated payload: either a radial profile v(|x|) on an increasing r-grid,
  // or a tensor grid over a box with multilinear interpolation (n <= 3).
  struct GridData {
    bool radial = true;
    std::vector<double> r;
    Eigen::VectorXd lo, hi;
    std::vector<int> shape;
    std::vector<double> values;  // row-major for tensor grids
  };

  static SpatialField constant(double v, int dim);
  static SpatialField expression(const std::string& src, int dim, double lo = -kInf, double hi = kInf);
  static SpatialField grid(GridData data, int dim);

  // throws DomainError outside a grid's support or when a value leaves [lo, hi]
  double operator()(const Point& x) const;

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  void set_range(double lo, double hi);
  // declared value as |x| -> inf
  std::optional<double> limit() const { return limit_; }
  void set_limit(double v) { limit_ = v; }
  bool radial() const;
  bool is_constant() const { return kind_ == Kind::Constant; }
  double constant_value() const { return value_; }
  std::string describe() const;

  // bounded support for grids; expression/constant fields are global
  bool contains(const Point& x) const;

 private:
  double eval_grid(const Point& x) const;

  Kind kind_ = Kind::Constant;
  int dim_ = 1;
  double value_ = 0.0;
  double lo_ = -kInf, hi_ = kInf;
  std::optional<double> limit_;
  std::shared_ptr<const Expression> expr_;
  std::shared_ptr<const GridData> grid_;
};

}  // namespace mosob
