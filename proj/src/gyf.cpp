#include "mosob/gyf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mosob/expression.hpp"
#include "mosob/monotone_tab.hpp"
#include "mosob/young.hpp"

namespace mosob {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

class PowerSlice final : public Slice {
 public:
  PowerSlice(double p, double c) : p_(p), c_(c) {}
  ExtReal value(double t) const override { return t <= 0 ? 0.0 : c_ * std::pow(t, p_); }
  std::optional<double> inverse(double s) const override {
    return s <= 0 ? 0.0 : std::pow(s / c_, 1.0 / p_);
  }
  std::optional<ExtReal> conjugate(double s) const override {
    if (s <= 0) return 0.0;
    if (p_ == 1.0) return s <= c_ ? 0.0 : kInf;
    return (p_ - 1.0) * c_ * std::pow(s / (p_ * c_), p_ / (p_ - 1.0));
  }
  std::optional<double> conjugate_inverse(double s) const override {
    if (s <= 0) return 0.0;
    if (p_ == 1.0) return c_;
    return p_ * c_ * std::pow(s / ((p_ - 1.0) * c_), (p_ - 1.0) / p_);
  }

 private:
  double p_, c_;
};

class PowerGyf final : public Gyf {
 public:
  PowerGyf(int n, double p, double c) : n_(n), slice_(std::make_shared<PowerSlice>(p, c)), p_(p), c_(c) {}
  int dim() const override { return n_; }
  SlicePtr slice(const Point&) const override { return slice_; }
  bool x_independent() const override { return true; }
  std::string name() const override {
    return c_ == 1.0 ? "t^" + fmt(p_) : fmt(c_) + "*t^" + fmt(p_);
  }

 private:
  int n_;
  SlicePtr slice_;
  double p_, c_;
};

class ExprSlice final : public Slice {
 public:
  explicit ExprSlice(std::shared_ptr<const Expression> e) : e_(std::move(e)) {}
  ExtReal value(double t) const override {
    if (t <= 0) return 0.0;
    double v = e_->eval({}, t);
    return std::isnan(v) ? kInf : v;
  }

 private:
  std::shared_ptr<const Expression> e_;
};

class OrliczGyf final : public Gyf {
 public:
  OrliczGyf(int n, const std::string& src) : n_(n) {
    auto e = std::make_shared<const Expression>(Expression::parse(src, 0, true));
    if (!e->uses_t()) throw ConfigError("params.A", "expression must depend on t");
    double v0 = e->eval({}, 0.0);
    if (std::abs(v0) > 1e-14) throw ConfigError("params.A", "A(0) must vanish, got " + fmt(v0));
    slice_ = std::make_shared<ExprSlice>(e);
    src_ = src;
  }
  int dim() const override { return n_; }
  SlicePtr slice(const Point&) const override { return slice_; }
  bool x_independent() const override { return true; }
  std::string name() const override { return src_; }

 private:
  int n_;
  SlicePtr slice_;
  std::string src_;
};

class VarExpGyf final : public Gyf {
 public:
  VarExpGyf(int n, SpatialField p, bool scaled) : n_(n), p_(std::move(p)), scaled_(scaled) {}
  int dim() const override { return n_; }
  SlicePtr slice(const Point& x) const override {
    double p = p_(x);
    return std::make_shared<PowerSlice>(p, scaled_ ? 1.0 / p : 1.0);
  }
  bool x_independent() const override { return p_.is_constant(); }
  bool radial() const override { return p_.radial(); }
  GyfPtr declared_limit() const override {
    if (!p_.limit()) return nullptr;
    double pl = *p_.limit();
    return make_power(n_, pl, scaled_ ? 1.0 / pl : 1.0);
  }
  std::string name() const override { return "t^{p(x)}, p=" + p_.describe(); }

 private:
  int n_;
  SpatialField p_;
  bool scaled_;
};

class PhaseSlice final : public Slice {
 public:
  PhaseSlice(double p, double q, double a, PhaseCombine mode) : p_(p), q_(q), a_(a), mode_(mode) {}
  ExtReal value(double t) const override {
    if (t <= 0) return 0.0;
    double lo = std::pow(t, p_);
    if (a_ == 0) return lo;
    double hi = a_ * std::pow(t, q_);
    return mode_ == PhaseCombine::Sum ? lo + hi : std::max(lo, hi);
  }
  std::optional<double> inverse(double s) const override {
    if (s <= 0) return 0.0;
    if (a_ == 0) return std::pow(s, 1.0 / p_);
    if (mode_ == PhaseCombine::Max) return std::min(std::pow(s, 1.0 / p_), std::pow(s / a_, 1.0 / q_));
    return std::nullopt;
  }
  std::optional<ExtReal> conjugate(double s) const override {
    if (a_ == 0) return PowerSlice(p_, 1.0).conjugate(s);
    return std::nullopt;
  }
  std::optional<double> conjugate_inverse(double s) const override {
    if (a_ == 0) return PowerSlice(p_, 1.0).conjugate_inverse(s);
    return std::nullopt;
  }
  std::vector<double> breaks() const override {
    if (mode_ == PhaseCombine::Max && a_ > 0 && q_ != p_) return {std::pow(a_, 1.0 / (p_ - q_))};
    return {};
  }

 private:
  double p_, q_, a_;
  PhaseCombine mode_;
};

class DoublePhaseGyf final : public Gyf {
 public:
  DoublePhaseGyf(int n, double p, double q, SpatialField a, PhaseCombine mode)
      : n_(n), p_(p), q_(q), a_(std::move(a)), mode_(mode) {
    if (p < 1 || q < p) throw ConfigError("params", "double phase needs 1 <= p <= q");
    if (a_.lo() < 0) throw ConfigError("fields.a", "a(x) must be nonnegative");
  }
  int dim() const override { return n_; }
  SlicePtr slice(const Point& x) const override { return std::make_shared<PhaseSlice>(p_, q_, a_(x), mode_); }
  bool x_independent() const override { return a_.is_constant(); }
  bool radial() const override { return a_.radial(); }
  GyfPtr declared_limit() const override {
    if (!a_.limit()) return nullptr;
    if (*a_.limit() == 0) return make_power(n_, p_);
    return make_double_phase(n_, p_, q_, SpatialField::constant(*a_.limit(), n_), mode_);
  }
  std::string name() const override {
    std::string a = a_.describe();
    return mode_ == PhaseCombine::Sum ? "t^" + fmt(p_) + "+(" + a + ")t^" + fmt(q_)
                                      : "max(t^" + fmt(p_) + ",(" + a + ")t^" + fmt(q_) + ")";
  }

 private:
  int n_;
  double p_, q_;
  SpatialField a_;
  PhaseCombine mode_;
};

class VarDoublePhaseGyf final : public Gyf {
 public:
  VarDoublePhaseGyf(int n, SpatialField p, SpatialField q, SpatialField a)
      : n_(n), p_(std::move(p)), q_(std::move(q)), a_(std::move(a)) {}
  int dim() const override { return n_; }
  SlicePtr slice(const Point& x) const override {
    double p = p_(x), q = q_(x);
    if (q < p) throw DomainError("variable double phase needs q(x) >= p(x)");
    return std::make_shared<PhaseSlice>(p, q, a_(x), PhaseCombine::Sum);
  }
  bool x_independent() const override { return p_.is_constant() && q_.is_constant() && a_.is_constant(); }
  bool radial() const override { return p_.radial() && q_.radial() && a_.radial(); }
  GyfPtr declared_limit() const override {
    if (!p_.limit() || !q_.limit() || !a_.limit()) return nullptr;
    if (*a_.limit() == 0) return make_power(n_, *p_.limit());
    return make_double_phase(n_, *p_.limit(), *q_.limit(), SpatialField::constant(*a_.limit(), n_));
  }
  std::string name() const override {
    return "t^{p(x)}+a(x)t^{q(x)}, p=" + p_.describe() + ", q=" + q_.describe() + ", a=" + a_.describe();
  }

 private:
  int n_;
  SpatialField p_, q_, a_;
};

class TableSlice final : public Slice {
 public:
  TableSlice(std::vector<double> t, std::vector<double> v, bool inf_tail)
      : tab_(t, v, MonotoneTab::Interp::Linear, MonotoneTab::Tail::Diverges), inf_tail_(inf_tail) {
    std::size_t m = t.size();
    last_slope_ = (v[m - 1] - v[m - 2]) / (t[m - 1] - t[m - 2]);
  }
  ExtReal value(double t) const override {
    if (t <= 0) return 0.0;
    double tn = tab_.grid().back();
    if (t <= tn) return tab_.value(t);
    return inf_tail_ ? kInf : tab_.back() + last_slope_ * (t - tn);
  }
  std::optional<double> inverse(double s) const override {
    if (s <= 0) return 0.0;
    if (s <= tab_.back()) return tab_.inverse(s);
    double tn = tab_.grid().back();
    if (inf_tail_) return tn;
    return tn + (s - tab_.back()) / last_slope_;
  }
  std::optional<ExtReal> conjugate(double s) const override {
    if (s <= 0) return 0.0;
    if (!inf_tail_ && s > last_slope_) return kInf;
    double best = 0;
    const auto& g = tab_.grid();
    const auto& v = tab_.values();
    for (std::size_t i = 0; i < g.size(); ++i) best = std::max(best, s * g[i] - v[i]);
    return best;
  }
  double inverse_tol() const override { return 1e-8; }

 private:
  MonotoneTab tab_;
  bool inf_tail_;
  double last_slope_;
};

class TableGyf final : public Gyf {
 public:
  TableGyf(int n, std::vector<double> t, std::vector<double> v, bool inf_tail) : n_(n) {
    if (t.size() < 2 || t.size() != v.size()) throw ConfigError("params.t", "table needs >= 2 matching samples");
    if (t.front() != 0 || v.front() != 0) throw ConfigError("params.t", "table must start at (0, 0)");
    double prev = -kInf;
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (!(t[i] > t[i - 1])) throw ConfigError("params.t", "abscissae must increase");
      double slope = (v[i] - v[i - 1]) / (t[i] - t[i - 1]);
      if (slope < 0) throw ConfigError("params.values", "values must be nondecreasing");
      if (slope < prev * (1 - 1e-12)) throw ConfigError("params.values", "table is not convex");
      prev = slope;
    }
    if (prev <= 0) throw ConfigError("params.values", "table must be non-constant");
    slice_ = std::make_shared<TableSlice>(std::move(t), std::move(v), inf_tail);
  }
  int dim() const override { return n_; }
  SlicePtr slice(const Point&) const override { return slice_; }
  bool x_independent() const override { return true; }
  std::string name() const override { return "tabulated"; }

 private:
  int n_;
  SlicePtr slice_;
};

class DilatedSlice final : public Slice {
 public:
  DilatedSlice(SlicePtr b, double k) : b_(std::move(b)), k_(k) {}
  ExtReal value(double t) const override { return b_->value(t / k_); }
  std::optional<double> inverse(double s) const override {
    auto v = b_->inverse(s);
    if (v) return k_ * *v;
    return std::nullopt;
  }
  std::optional<ExtReal> conjugate(double s) const override { return b_->conjugate(k_ * s); }
  std::optional<double> conjugate_inverse(double s) const override {
    auto v = b_->conjugate_inverse(s);
    if (v) return *v / k_;
    return std::nullopt;
  }
  std::vector<double> breaks() const override {
    auto b = b_->breaks();
    for (double& v : b) v *= k_;
    return b;
  }
  double inverse_tol() const override { return b_->inverse_tol(); }

 private:
  SlicePtr b_;
  double k_;
};

class DilatedGyf final : public Gyf {
 public:
  DilatedGyf(GyfPtr b, double k) : b_(std::move(b)), k_(k) {
    if (!(k > 0)) throw std::invalid_argument("dilation factor must be positive");
  }
  int dim() const override { return b_->dim(); }
  SlicePtr slice(const Point& x) const override { return std::make_shared<DilatedSlice>(b_->slice(x), k_); }
  bool x_independent() const override { return b_->x_independent(); }
  bool radial() const override { return b_->radial(); }
  GyfPtr declared_limit() const override {
    auto l = b_->declared_limit();
    return l ? make_dilated(l, k_) : nullptr;
  }
  bool continuous() const override { return b_->continuous(); }
  std::string name() const override { return b_->name() + " dilated by " + fmt(k_); }

 private:
  GyfPtr b_;
  double k_;
};

class LambdaSlice final : public Slice {
 public:
  LambdaSlice(std::shared_ptr<const std::function<ExtReal(const Point&, double)>> fn, Point x)
      : fn_(std::move(fn)), x_(std::move(x)) {}
  ExtReal value(double t) const override { return t <= 0 ? 0.0 : (*fn_)(x_, t); }

 private:
  std::shared_ptr<const std::function<ExtReal(const Point&, double)>> fn_;
  Point x_;
};

class LambdaGyf final : public Gyf {
 public:
  LambdaGyf(int n, std::function<ExtReal(const Point&, double)> fn, bool xi, std::string name)
      : n_(n), fn_(std::make_shared<const std::function<ExtReal(const Point&, double)>>(std::move(fn))),
        xi_(xi), name_(std::move(name)) {}
  int dim() const override { return n_; }
  SlicePtr slice(const Point& x) const override { return std::make_shared<LambdaSlice>(fn_, x); }
  bool x_independent() const override { return xi_; }
  std::string name() const override { return name_; }

 private:
  int n_;
  std::shared_ptr<const std::function<ExtReal(const Point&, double)>> fn_;
  bool xi_;
  std::string name_;
};

class ConjugateSlice final : public Slice {
 public:
  explicit ConjugateSlice(SlicePtr b) : b_(std::move(b)) {}
  ExtReal value(double s) const override { return young_conjugate(*b_, s); }
  std::optional<double> inverse(double s) const override { return b_->conjugate_inverse(s); }

 private:
  SlicePtr b_;
};

class ConjugateGyf final : public Gyf {
 public:
  explicit ConjugateGyf(GyfPtr b) : b_(std::move(b)) {}
  int dim() const override { return b_->dim(); }
  SlicePtr slice(const Point& x) const override { return conjugate_slice(b_->slice(x)); }
  bool x_independent() const override { return b_->x_independent(); }
  bool radial() const override { return b_->radial(); }
  GyfPtr declared_limit() const override {
    auto l = b_->declared_limit();
    return l ? make_conjugate(l) : nullptr;
  }
  std::string name() const override { return "conjugate of " + b_->name(); }

 private:
  GyfPtr b_;
};

}  // namespace

GyfPtr make_power(int n, double p, double c) {
  if (!(p >= 1)) throw ConfigError("params.p", "exponent below 1");
  if (!(c > 0)) throw ConfigError("params.c", "coefficient must be positive");
  return std::make_shared<PowerGyf>(n, p, c);
}

GyfPtr make_orlicz(int n, const std::string& expr) { return std::make_shared<OrliczGyf>(n, expr); }

GyfPtr make_variable_exponent(int n, SpatialField p, bool scaled) {
  if (p.lo() < 1) throw ConfigError("fields.p", "exponent below 1");
  return std::make_shared<VarExpGyf>(n, std::move(p), scaled);
}

GyfPtr make_double_phase(int n, double p, double q, SpatialField a, PhaseCombine mode) {
  return std::make_shared<DoublePhaseGyf>(n, p, q, std::move(a), mode);
}

GyfPtr make_variable_double_phase(int n, SpatialField p, SpatialField q, SpatialField a) {
  if (p.lo() < 1) throw ConfigError("fields.p", "exponent below 1");
  if (q.lo() < 1) throw ConfigError("fields.q", "exponent below 1");
  if (a.lo() < 0) throw ConfigError("fields.a", "a(x) must be nonnegative");
  return std::make_shared<VarDoublePhaseGyf>(n, std::move(p), std::move(q), std::move(a));
}

GyfPtr make_tabulated(int n, std::vector<double> t, std::vector<double> values, bool infinite_tail) {
  return std::make_shared<TableGyf>(n, std::move(t), std::move(values), infinite_tail);
}

GyfPtr make_dilated(GyfPtr base, double k) { return std::make_shared<DilatedGyf>(std::move(base), k); }

GyfPtr make_lambda(int n, std::function<ExtReal(const Point&, double)> fn, bool x_independent, std::string name) {
  return std::make_shared<LambdaGyf>(n, std::move(fn), x_independent, std::move(name));
}

GyfPtr make_conjugate(GyfPtr base) { return std::make_shared<ConjugateGyf>(std::move(base)); }

SlicePtr conjugate_slice(SlicePtr base) { return std::make_shared<ConjugateSlice>(std::move(base)); }

double unit_ball_volume(int n) { return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }
double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

}  // namespace mosob
