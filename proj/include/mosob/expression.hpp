#pragma once

#include <span>
#include <string>
#include <vector>

namespace mosob {

// Compiled arithmetic expression over x1..xn, |x| (written abs(x) or r) and
// optionally a scalar t. Evaluated on a small stack machine.
class Expression {
 public:
  Expression() = default;
  // Throws ConfigError on syntax errors or identifiers outside x1..x{dim}.
  static Expression parse(const std::string& src, int dim, bool allow_t = false);

  double eval(std::span<const double> x, double t = 0.0) const;
  const std::string& source() const { return src_; }
  bool uses_t() const { return uses_t_; }
  // true when the expression only depends on x through |x|
  bool radial() const { return radial_; }

  enum class Op : unsigned char {
    Num, Coord, Norm, T, Add, Sub, Mul, Div, Pow, Neg,
    Exp, Log, Sqrt, Sin, Cos, Abs, Min, Max
  };
  struct Instr {
    Op op;
    int idx = 0;
    double val = 0.0;
  };

 private:
  std::string src_;
  std::vector<Instr> code_;
  int depth_ = 0;
  bool uses_t_ = false;
  bool radial_ = true;
  friend class ExprParser;
};

}  // namespace mosob
