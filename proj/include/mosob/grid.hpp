#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mosob/ext_real.hpp"

namespace mosob {

struct Domain {
  enum class Kind { Box, Ball };
  Kind kind = Kind::Box;
  int n = 0;
  Point center;
  Point half;         // box half-widths
  double radius = 0;  // ball

  static Domain box(const Point& lo, const Point& hi);
  static Domain cube(int n, double half_width);
  static Domain ball(const Point& center, double radius);

  double measure() const;
  bool contains(const Point& x) const;
  Point lo() const;
  Point hi() const;
  double diameter() const;
  std::string describe() const;
};

enum class Layout {
  Tensor,    // midpoint cells of a box, row-major
  Radial,    // shells [e_i, e_{i+1}] around the origin, node (r_mid, 0, ...)
  Line,      // 1-D cells with arbitrary edges, weight = cell length
  Scattered  // explicit nodes and weights
};
const char* layout_name(Layout l);

// Samples of a function on a grid together with quadrature weights.
class GridFunction {
 public:
  using Fn = std::function<double(const Point&)>;
  using RadialFn = std::function<double(double)>;

  static GridFunction tensor(const Domain& box, const std::vector<int>& shape, const Fn& f = {});
  static GridFunction radial(int n, std::vector<double> edges, const RadialFn& f = {});
  static GridFunction line(std::vector<double> edges, const RadialFn& f = {});
  static GridFunction scattered(const Domain& d, std::vector<Point> nodes, std::vector<double> weights,
                                std::vector<double> values = {});
  // polar cells covering a ball exactly (n <= 3)
  static GridFunction polar_ball(const Point& center, double radius, int radial_cells, int angular_cells,
                                 const Fn& f = {});

  // uniform shells on [0, r_core], then geometric ones out to r_max
  static std::vector<double> radial_edges(double r_core, int core_cells, double r_max, int cells_per_octave);

  Layout layout() const { return layout_; }
  const Domain& domain() const { return domain_; }
  int dim() const { return domain_.n; }
  std::size_t size() const { return weights_.size(); }
  Point node(std::size_t i) const;
  double node_radius(std::size_t i) const;  // |node|
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double value(std::size_t i) const { return values_[i]; }
  double measure() const;

  // tensor layout
  const std::vector<int>& shape() const { return shape_; }
  const std::vector<double>& spacing() const { return spacing_; }
  std::size_t flat_index(const std::vector<int>& idx) const;
  std::vector<int> multi_index(std::size_t i) const;
  // index of the cell containing x; size() when x is outside
  std::size_t host_cell(const Point& x) const;
  // radial and line layouts
  const std::vector<double>& edges() const { return edges_; }

  GridFunction with_values(std::vector<double> v) const;
  GridFunction map(const std::function<double(double)>& f) const;
  GridFunction scaled(double c) const;
  double max_abs() const;
  bool is_zero() const;

  // one header line "# n=.. domain=.. layout=..", then x1..xn,weight,value
  void write_csv(const std::string& path) const;
  static GridFunction read_csv(const std::string& path);

 private:
  Layout layout_ = Layout::Tensor;
  Domain domain_;
  std::vector<int> shape_;
  std::vector<double> spacing_;
  std::vector<double> edges_;
  std::vector<double> coords_;  // size * n, used by every layout
  std::vector<double> weights_;
  std::vector<double> values_;
};

}  // namespace mosob
