#include "mosob/monotone_tab.hpp"

#include <algorithm>
#include <cmath>

namespace mosob {

MonotoneTab::MonotoneTab(std::vector<double> grid, std::vector<ExtReal> values, Interp interp, Tail tail)
    : grid_(std::move(grid)), values_(std::move(values)), interp_(interp), tail_(tail) {
  if (grid_.size() < 2 || grid_.size() != values_.size())
    throw std::invalid_argument("MonotoneTab: need >= 2 matching samples");
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) throw std::invalid_argument("MonotoneTab: grid not increasing");
    if (values_[i] < values_[i - 1]) throw std::invalid_argument("MonotoneTab: values decrease");
  }
  if (interp_ == Interp::LogLog && (grid_.front() <= 0 || values_.front() <= 0))
    throw std::invalid_argument("MonotoneTab: log-log interpolation needs positive samples");
}

std::vector<double> MonotoneTab::log_grid(double lo, double hi, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

double MonotoneTab::value(double t) const {
  if (t <= grid_.front()) return values_.front();
  if (t >= grid_.back()) return values_.back();
  auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
  double v0 = values_[i], v1 = values_[i + 1];
  if (std::isinf(v1)) return t == grid_[i] ? v0 : kInf;
  if (interp_ == Interp::LogLog) {
    double w = std::log(t / grid_[i]) / std::log(grid_[i + 1] / grid_[i]);
    return v0 * std::pow(v1 / v0, w);
  }
  double w = (t - grid_[i]) / (grid_[i + 1] - grid_[i]);
  return v0 + w * (v1 - v0);
}

double MonotoneTab::inverse(double s) const {
  if (s <= values_.front()) return grid_.front();
  if (s > values_.back()) return kInf;
  // first node with value >= s
  auto it = std::lower_bound(values_.begin(), values_.end(), s);
  std::size_t j = static_cast<std::size_t>(it - values_.begin());
  std::size_t i = j - 1;
  double v0 = values_[i], v1 = values_[j];
  if (std::isinf(v1)) return grid_[i];  // jump to +inf right after grid_[i]
  if (interp_ == Interp::LogLog) {
    double w = std::log(s / v0) / std::log(v1 / v0);
    return grid_[i] * std::pow(grid_[j] / grid_[i], w);
  }
  double w = (s - v0) / (v1 - v0);
  return grid_[i] + w * (grid_[j] - grid_[i]);
}

}  // namespace mosob
