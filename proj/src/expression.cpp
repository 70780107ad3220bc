#include "mosob/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "mosob/ext_real.hpp"

namespace mosob {

class ExprParser {
 public:
  ExprParser(const std::string& s, int dim, bool allow_t, Expression& out)
      : s_(s), dim_(dim), allow_t_(allow_t), out_(out) {}

  void run() {
    expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression", what + " at offset " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void emit(Op op, int idx = 0, double val = 0.0, int stack_delta = 0) {
    out_.code_.push_back({op, idx, val});
    depth_ += stack_delta;
    out_.depth_ = std::max(out_.depth_, depth_);
  }

  void expr() {
    term();
    for (;;) {
      if (eat('+')) { term(); emit(Op::Add, 0, 0, -1); }
      else if (eat('-')) { term(); emit(Op::Sub, 0, 0, -1); }
      else break;
    }
  }
  void term() {
    unary();
    for (;;) {
      if (eat('*')) { unary(); emit(Op::Mul, 0, 0, -1); }
      else if (eat('/')) { unary(); emit(Op::Div, 0, 0, -1); }
      else break;
    }
  }
  void unary() {
    if (eat('-')) { unary(); emit(Op::Neg); return; }
    if (eat('+')) { unary(); return; }
    power();
  }
  void power() {
    primary();
    if (eat('^')) { unary(); emit(Op::Pow, 0, 0, -1); }  // right associative
  }
  std::string ident() {
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(b, pos_ - b);
  }
  void primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      emit(Op::Num, 0, v, +1);
      return;
    }
    if (eat('(')) {
      expr();
      if (!eat(')')) fail("expected ')'");
      return;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected '" + std::string(1, c) + "'");
    std::string id = ident();
    skip();
    bool call = pos_ < s_.size() && s_[pos_] == '(';
    if (!call) {
      if (id == "pi") { emit(Op::Num, 0, std::numbers::pi, +1); return; }
      if (id == "e") { emit(Op::Num, 0, std::numbers::e, +1); return; }
      if (id == "r") { emit(Op::Norm, 0, 0, +1); return; }
      if (id == "t") {
        if (!allow_t_) fail("'t' is not allowed here");
        out_.uses_t_ = true;
        emit(Op::T, 0, 0, +1);
        return;
      }
      if (id.size() >= 2 && id[0] == 'x' && std::isdigit(static_cast<unsigned char>(id[1]))) {
        int k = std::stoi(id.substr(1));
        if (k < 1 || k > dim_) fail("coordinate " + id + " outside dimension " + std::to_string(dim_));
        out_.radial_ = false;
        emit(Op::Coord, k - 1, 0, +1);
        return;
      }
      fail("unknown identifier '" + id + "'");
    }
    eat('(');
    if (id == "abs") {
      // abs(x) is the Euclidean norm of the point, abs(expr) the absolute value
      std::size_t save = pos_;
      skip();
      if (pos_ < s_.size() && s_[pos_] == 'x') {
        ++pos_;
        if (eat(')')) { emit(Op::Norm, 0, 0, +1); return; }
      }
      pos_ = save;
      expr();
      if (!eat(')')) fail("expected ')'");
      emit(Op::Abs);
      return;
    }
    if (id == "min" || id == "max") {
      expr();
      if (!eat(',')) fail("expected ','");
      expr();
      if (!eat(')')) fail("expected ')'");
      emit(id == "min" ? Op::Min : Op::Max, 0, 0, -1);
      return;
    }
    Op op;
    if (id == "exp") op = Op::Exp;
    else if (id == "log") op = Op::Log;
    else if (id == "sqrt") op = Op::Sqrt;
    else if (id == "sin") op = Op::Sin;
    else if (id == "cos") op = Op::Cos;
    else fail("unknown function '" + id + "'");
    expr();
    if (!eat(')')) fail("expected ')'");
    emit(op);
  }

  const std::string& s_;
  int dim_;
  bool allow_t_;
  Expression& out_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

Expression Expression::parse(const std::string& src, int dim, bool allow_t) {
  Expression e;
  e.src_ = src;
  ExprParser(src, dim, allow_t, e).run();
  if (e.depth_ > 64) throw ConfigError("expression", "nesting too deep in \"" + src + "\"");
  return e;
}

double Expression::eval(std::span<const double> x, double t) const {
  double stack[64];
  int sp = 0;
  double norm = -1.0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::Num: stack[sp++] = in.val; break;
      case Op::Coord: stack[sp++] = x[static_cast<std::size_t>(in.idx)]; break;
      case Op::Norm:
        if (norm < 0) {
          double s = 0;
          for (double v : x) s += v * v;
          norm = std::sqrt(s);
        }
        stack[sp++] = norm;
        break;
      case Op::T: stack[sp++] = t; break;
      case Op::Add: --sp; stack[sp - 1] += stack[sp]; break;
      case Op::Sub: --sp; stack[sp - 1] -= stack[sp]; break;
      case Op::Mul: --sp; stack[sp - 1] *= stack[sp]; break;
      case Op::Div: --sp; stack[sp - 1] /= stack[sp]; break;
      case Op::Pow: --sp; stack[sp - 1] = std::pow(stack[sp - 1], stack[sp]); break;
      case Op::Min: --sp; stack[sp - 1] = std::min(stack[sp - 1], stack[sp]); break;
      case Op::Max: --sp; stack[sp - 1] = std::max(stack[sp - 1], stack[sp]); break;
      case Op::Neg: stack[sp - 1] = -stack[sp - 1]; break;
      case Op::Exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
      case Op::Log: stack[sp - 1] = std::log(stack[sp - 1]); break;
      case Op::Sqrt: stack[sp - 1] = std::sqrt(stack[sp - 1]); break;
      case Op::Sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
      case Op::Cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
      case Op::Abs: stack[sp - 1] = std::abs(stack[sp - 1]); break;
    }
  }
  return stack[0];
}

}  // namespace mosob
