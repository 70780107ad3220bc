#pragma once

#include <vector>

#include "mosob/ext_real.hpp"

namespace mosob {

// Nondecreasing function tabulated on strictly increasing abscissae, with
// the left-continuous inverse inf{tau : f(tau) >= s} on the tabulated range.
class MonotoneTab {
 public:
  enum class Interp { Linear, LogLog };
  enum class Tail { FiniteLimit, Diverges };

  MonotoneTab() = default;
  MonotoneTab(std::vector<double> grid, std::vector<ExtReal> values, Interp interp, Tail tail);

  static std::vector<double> log_grid(double lo, double hi, int points);

  double value(double t) const;  // clamps to the table ends
  // inverse on the table; below the first value returns grid.front(),
  // above the last returns +inf
  double inverse(double s) const;

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<ExtReal>& values() const { return values_; }
  Tail tail() const { return tail_; }
  Interp interp() const { return interp_; }
  std::size_t size() const { return grid_.size(); }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

 private:
  std::vector<double> grid_;
  std::vector<ExtReal> values_;
  Interp interp_ = Interp::Linear;
  Tail tail_ = Tail::Diverges;
};

}  // namespace mosob
