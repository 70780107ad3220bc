#include "mosob/spatial_field.hpp"

#include <algorithm>
#include <sstream>

namespace mosob {

SpatialField SpatialField::constant(double v, int dim) {
  SpatialField f;
  f.kind_ = Kind::Constant;
  f.dim_ = dim;
  f.value_ = v;
  f.lo_ = f.hi_ = v;
  f.limit_ = v;
  return f;
}

SpatialField SpatialField::expression(const std::string& src, int dim, double lo, double hi) {
  SpatialField f;
  f.kind_ = Kind::Expression;
  f.dim_ = dim;
  f.expr_ = std::make_shared<const Expression>(Expression::parse(src, dim));
  f.lo_ = lo;
  f.hi_ = hi;
  return f;
}

SpatialField SpatialField::grid(GridData data, int dim) {
  if (data.radial) {
    if (data.r.size() < 2 || data.r.size() != data.values.size())
      throw ConfigError("payload", "radial grid needs matching r and values arrays (>= 2 entries)");
    if (!std::is_sorted(data.r.begin(), data.r.end()) || data.r.front() < 0)
      throw ConfigError("payload.r", "radial abscissae must be nonnegative and increasing");
  } else {
    if (dim > 3) throw ConfigError("payload", "tensor grids are limited to n <= 3");
    if (static_cast<int>(data.shape.size()) != dim || data.lo.size() != dim || data.hi.size() != dim)
      throw ConfigError("payload", "tensor grid needs lo, hi and shape of length n");
    std::size_t total = 1;
    for (int s : data.shape) {
      if (s < 2) throw ConfigError("payload.shape", "each axis needs at least 2 nodes");
      total *= static_cast<std::size_t>(s);
    }
    if (total != data.values.size()) throw ConfigError("payload.values", "size does not match shape");
  }
  SpatialField f;
  f.kind_ = Kind::Grid;
  f.dim_ = dim;
  auto [mn, mx] = std::minmax_element(data.values.begin(), data.values.end());
  f.lo_ = *mn;
  f.hi_ = *mx;
  f.grid_ = std::make_shared<const GridData>(std::move(data));
  return f;
}

void SpatialField::set_range(double lo, double hi) {
  if (lo > hi) throw ConfigError("range", "lower bound exceeds upper bound");
  if (kind_ == Kind::Constant && (value_ < lo || value_ > hi))
    throw ConfigError("range", "constant value outside declared range");
  if (kind_ == Kind::Grid) {
    for (double v : grid_->values)
      if (v < lo || v > hi) throw ConfigError("range", "grid value outside declared range");
  }
  lo_ = lo;
  hi_ = hi;
}

bool SpatialField::radial() const {
  switch (kind_) {
    case Kind::Constant: return true;
    case Kind::Expression: return expr_->radial();
    case Kind::Grid: return grid_->radial;
  }
  return false;
}

bool SpatialField::contains(const Point& x) const {
  if (kind_ != Kind::Grid) return true;
  if (grid_->radial) return x.norm() <= grid_->r.back();
  for (int i = 0; i < dim_; ++i)
    if (x[i] < grid_->lo[i] || x[i] > grid_->hi[i]) return false;
  return true;
}

double SpatialField::eval_grid(const Point& x) const {
  const GridData& g = *grid_;
  if (g.radial) {
    double r = x.norm();
    if (r > g.r.back()) {
      if (limit_) return *limit_;
      throw DomainError("point outside radial field support (|x| = " + std::to_string(r) + ")");
    }
    if (r <= g.r.front()) return g.values.front();
    auto it = std::upper_bound(g.r.begin(), g.r.end(), r);
    std::size_t i = static_cast<std::size_t>(it - g.r.begin()) - 1;
    double w = (r - g.r[i]) / (g.r[i + 1] - g.r[i]);
    return (1 - w) * g.values[i] + w * g.values[i + 1];
  }
  int idx[3] = {0, 0, 0};
  double frac[3] = {0, 0, 0};
  for (int d = 0; d < dim_; ++d) {
    if (x[d] < g.lo[d] || x[d] > g.hi[d]) throw DomainError("point outside tensor field support");
    double h = (g.hi[d] - g.lo[d]) / (g.shape[d] - 1);
    double s = (x[d] - g.lo[d]) / h;
    int i = std::min(static_cast<int>(s), g.shape[d] - 2);
    idx[d] = i;
    frac[d] = s - i;
  }
  double acc = 0;
  for (int corner = 0; corner < (1 << dim_); ++corner) {
    double w = 1;
    std::size_t flat = 0;
    for (int d = 0; d < dim_; ++d) {
      int bit = (corner >> d) & 1;
      w *= bit ? frac[d] : 1 - frac[d];
      flat = flat * static_cast<std::size_t>(g.shape[d]) + static_cast<std::size_t>(idx[d] + bit);
    }
    if (w != 0) acc += w * g.values[flat];
  }
  return acc;
}

double SpatialField::operator()(const Point& x) const {
  if (x.size() != dim_) throw DomainError("point dimension mismatch");
  double v;
  switch (kind_) {
    case Kind::Constant: return value_;
    case Kind::Expression: v = expr_->eval({x.data(), static_cast<std::size_t>(x.size())}); break;
    default: v = eval_grid(x); break;
  }
  if (std::isnan(v)) throw DomainError("field " + describe() + " is undefined at this point");
  if (v < lo_ - 1e-12 * std::max(1.0, std::abs(lo_)) || v > hi_ + 1e-12 * std::max(1.0, std::abs(hi_)))
    throw DomainError("field " + describe() + " left its declared range: " + std::to_string(v));
  return std::clamp(v, lo_, hi_);
}

std::string SpatialField::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant: os << value_; break;
    case Kind::Expression: os << expr_->source(); break;
    case Kind::Grid: os << (grid_->radial ? "radial-grid" : "tensor-grid"); break;
  }
  return os.str();
}

}  // namespace mosob
