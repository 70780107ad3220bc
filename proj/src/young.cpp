#include "mosob/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mosob/quadrature.hpp"

namespace mosob {

ExtReal eval_phi(const Gyf& phi, const Point& x, double t) {
  if (t < 0) throw std::invalid_argument("eval_phi: t must be nonnegative");
  return phi.slice(x)->value(t);
}

double left_inverse(const Slice& phi, double s) {
  if (!(s > 0)) return 0.0;
  if (auto v = phi.inverse(s)) return *v;
  const double tol = phi.inverse_tol();

  // bracket phi(lo) < s <= phi(hi)
  double lo = 0, hi = 1;
  double fhi = phi.value(hi);
  if (fhi >= s) {
    int k = 0;
    for (; k < 1100; ++k) {
      if (0.5 * hi < std::numeric_limits<double>::min()) return 0.0;  // reached before any normal number
      double f = phi.value(0.5 * hi);
      if (f < s) break;
      hi *= 0.5;
      fhi = f;
    }
    if (k == 1100) return 0.0;
    lo = 0.5 * hi;
  } else {
    int k = 0;
    for (; k < 1100 && fhi < s; ++k) {
      lo = hi;
      hi *= 2;
      fhi = phi.value(hi);
    }
    if (fhi < s) return kInf;  // sup phi < s and never reached
  }
  double flo = phi.value(lo) - s;
  fhi -= s;

  // Illinois regula falsi, with a bisection step whenever progress stalls
  int side = 0;
  double width3 = hi - lo;
  for (int it = 0; it < 400 && hi - lo > tol * hi; ++it) {
    double w = hi - lo, x;
    bool bisect = !std::isfinite(fhi) || !(fhi > flo) || (it % 3 == 2 && w > 0.5 * width3);
    if (it % 3 == 2) width3 = w;
    if (!bisect) {
      x = lo - flo * w / (fhi - flo);
      if (!(x > lo && x < hi)) bisect = true;
    }
    if (bisect) x = (lo > 0 && hi > 4 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    double fx = phi.value(x) - s;
    if (fx >= 0) {
      hi = x;
      fhi = fx;
      if (side == +1) flo *= 0.5;
      side = +1;
    } else {
      lo = x;
      flo = fx;
      if (side == -1 && std::isfinite(fhi)) fhi *= 0.5;
      side = -1;
    }
  }
  return hi;
}

double left_inverse(const Gyf& phi, const Point& x, double s) { return left_inverse(*phi.slice(x), s); }

namespace {

// conjugate grid: 400 points per decade from 1e-8; the sup search continues
// past 1e8 up to 1e150 before declaring divergence
constexpr int kPerDecade = 400;
constexpr int kDecades = 158;
constexpr int kGridN = kPerDecade * kDecades;

inline double conj_grid(int i) { return std::pow(10.0, -8.0 + static_cast<double>(i) / kPerDecade); }

}  // namespace

ExtReal young_conjugate(const Slice& phi, double s) {
  if (!(s > 0)) return 0.0;
  if (auto v = phi.conjugate(s)) return *v;
  auto g = [&](double tau) {
    ExtReal f = phi.value(tau);
    return std::isinf(f) ? -kInf : s * tau - f;
  };
  // the objective is concave: find the first grid index where it stops increasing
  int lo = 0, hi = kGridN;
  while (lo < hi) {
    int mid = lo + (hi - lo) / 2;
    if (g(conj_grid(mid)) >= g(conj_grid(mid + 1))) hi = mid;
    else lo = mid + 1;
  }
  if (lo == kGridN) return kInf;
  double a = lo == 0 ? 0.0 : conj_grid(lo - 1);
  double b = conj_grid(lo + 1);
  double best = std::max({0.0, g(conj_grid(lo)), g(b)});
  double fm = -kInf;
  golden_max(g, a, b, 1e-13, &fm);
  return std::max(best, fm);
}

ExtReal young_conjugate(const Gyf& phi, const Point& x, double s) { return young_conjugate(*phi.slice(x), s); }

double conjugate_inverse(const Slice& phi, double s) {
  if (!(s > 0)) return 0.0;
  if (auto v = phi.conjugate_inverse(s)) return *v;
  return left_inverse(*conjugate_slice(std::shared_ptr<const Slice>(&phi, [](const Slice*) {})), s);
}

std::vector<Point> sphere_directions(int n, int count) {
  std::vector<Point> out;
  if (n == 1) {
    out.push_back(Point::Constant(1, 1.0));
    out.push_back(Point::Constant(1, -1.0));
    return out;
  }
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      double a = 2 * std::numbers::pi * i / count;
      Point d(2);
      d << std::cos(a), std::sin(a);
      out.push_back(d);
    }
    return out;
  }
  if (n == 3) {
    // Fibonacci lattice
    const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      double z = 1.0 - 2.0 * (i + 0.5) / count;
      double r = std::sqrt(1 - z * z);
      Point d(3);
      d << r * std::cos(ga * i), r * std::sin(ga * i), z;
      out.push_back(d);
    }
    return out;
  }
  std::mt19937_64 rng(0x5eedULL + static_cast<unsigned>(n));
  std::normal_distribution<double> nd;
  for (int i = 0; i < count; ++i) {
    Point d(n);
    for (int k = 0; k < n; ++k) d[k] = nd(rng);
    out.push_back(d / d.norm());
  }
  return out;
}

namespace {

double sphere_sup(const Gyf& phi, double R, const std::vector<Point>& dirs, double t) {
  double best = 0;
  for (const Point& d : dirs) best = std::max(best, phi(R * d, t));
  return best;
}

}  // namespace

PhiInfinity phi_infinity(const Gyf& phi, double t, const RadiusSchedule& rs) {
  PhiInfinity out;
  Point origin = Point::Zero(phi.dim());
  if (phi.x_independent()) {
    out.value = phi(origin, t);
    out.closed_form = true;
    return out;
  }
  if (auto lim = phi.declared_limit()) {
    out.value = (*lim)(origin, t);
    out.closed_form = true;
    return out;
  }
  auto dirs = sphere_directions(phi.dim(), rs.directions);
  double prev = sphere_sup(phi, std::ldexp(1.0, rs.kmax - 1), dirs, t);
  double last = sphere_sup(phi, std::ldexp(1.0, rs.kmax), dirs, t);
  out.value = last;
  out.spread = std::isinf(last) && std::isinf(prev) ? 0.0 : std::abs(last - prev);
  out.converged = out.spread <= rs.eps * std::max(1.0, std::abs(last));
  return out;
}

class SphereSupLimit final : public Gyf {
 public:
  SphereSupLimit(GyfPtr base, const RadiusSchedule& rs) : base_(std::move(base)) {
    auto dirs = sphere_directions(base_->dim(), rs.directions);
    double R = std::ldexp(1.0, rs.kmax);
    for (const Point& d : dirs) {
      outer_.push_back(base_->slice(R * d));
      inner_.push_back(base_->slice(0.5 * R * d));
    }
    slice_ = std::make_shared<Sup>(outer_);
    for (double t : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 10.0}) {
      double a = 0, b = 0;
      for (auto& s : outer_) a = std::max(a, s->value(t));
      for (auto& s : inner_) b = std::max(b, s->value(t));
      if (std::isinf(a) && std::isinf(b)) continue;
      if (std::abs(a - b) > rs.eps * std::max(1.0, std::abs(a))) converged_ = false;
    }
  }
  int dim() const override { return base_->dim(); }
  SlicePtr slice(const Point&) const override { return slice_; }
  bool x_independent() const override { return true; }
  std::string name() const override { return "sphere-sup limit of " + base_->name(); }
  bool converged() const { return converged_; }

 private:
  struct Sup final : Slice {
    explicit Sup(std::vector<SlicePtr> s) : s_(std::move(s)) {}
    ExtReal value(double t) const override {
      double best = 0;
      for (auto& s : s_) best = std::max(best, s->value(t));
      return best;
    }
    std::vector<SlicePtr> s_;
  };
  GyfPtr base_;
  std::vector<SlicePtr> outer_, inner_;
  SlicePtr slice_;
  bool converged_ = true;
};

GyfPtr limit_gyf(const GyfPtr& phi, const RadiusSchedule& rs) {
  if (phi->x_independent()) return phi;
  if (auto lim = phi->declared_limit()) return lim;
  return std::make_shared<SphereSupLimit>(phi, rs);
}

bool limit_converged(const Gyf& limit) {
  if (auto* s = dynamic_cast<const SphereSupLimit*>(&limit)) return s->converged();
  return true;
}

SampleSpec SampleSpec::make(int n, std::uint64_t seed, int num_x, double radius, double t_lo, double t_hi,
                            int num_t) {
  SampleSpec s;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  s.xs.push_back(Point::Zero(n));
  for (int i = 0; i < num_x; ++i) {
    Point x(n);
    for (int k = 0; k < n; ++k) x[k] = u(rng);
    s.xs.push_back(x);
  }
  double a = std::log(t_lo), b = std::log(t_hi);
  for (int i = 0; i < num_t; ++i) s.ts.push_back(num_t == 1 ? t_lo : std::exp(a + (b - a) * i / (num_t - 1)));
  return s;
}

Equivalence estimate_equivalence(const Gyf& phi, const Gyf& psi, EquivMode mode, const SampleSpec& s) {
  if (s.xs.empty() || s.ts.empty()) throw std::invalid_argument("estimate_equivalence: empty sample");
  Equivalence out;
  out.c1 = kInf;
  out.c2 = 0;
  for (const Point& x : s.xs) {
    auto f = phi.slice(x);
    auto g = psi.slice(x);
    for (double t : s.ts) {
      double a = f->value(t), b = g->value(t);
      if (std::isinf(a) || std::isinf(b))
        throw PreconditionError("estimate_equivalence: infinite value at t = " + std::to_string(t));
      double c;
      if (mode == EquivMode::Approx) c = ratio01(b, a);
      else c = t > 0 ? left_inverse(*f, b) / t : 1.0;
      ++out.samples;
      out.c1 = std::min(out.c1, c);
      out.c2 = std::max(out.c2, c);
    }
  }
  out.ok = out.c1 > 0 && std::isfinite(out.c2);
  if (!out.ok) out.reason = "sampled ratios are not bounded away from 0 and infinity";
  return out;
}

Delta2 check_delta2(const Gyf& phi, const SampleSpec& s) {
  Delta2 out;
  auto sup_ratio = [&](const std::vector<double>& ts) {
    double c = 0;
    for (const Point& x : s.xs) {
      auto f = phi.slice(x);
      for (double t : ts) c = std::max(c, ratio01(f->value(2 * t), f->value(t)));
    }
    return c;
  };
  out.c_coarse = sup_ratio(s.ts);
  // refinement: twice the points, the t-range extended by its own width in log scale
  double lo = s.ts.front(), hi = s.ts.back();
  double span = std::log(hi / lo);
  if (span <= 0) span = std::log(10.0);
  std::vector<double> fine;
  int m = 2 * static_cast<int>(s.ts.size()) + 1;
  for (int i = 0; i < 2 * m; ++i) fine.push_back(lo * std::exp(-span + 3 * span * i / (2 * m - 1)));
  out.c = std::max(out.c_coarse, sup_ratio(fine));
  out.holds = std::isfinite(out.c) && out.c <= 1.05 * out.c_coarse;
  return out;
}

double convexity_defect(const Slice& f, double s, double t) {
  double m = f.value(0.5 * (s + t));
  double r = 0.5 * (f.value(s) + f.value(t));
  if (std::isinf(r)) return -1.0;
  if (std::isinf(m)) return kInf;
  return (m - r) / std::max(r, 1e-300);
}

double fenchel_young_defect(const Slice& f, double s, double t) {
  double rhs = f.value(s) + young_conjugate(f, t);
  if (std::isinf(rhs)) return -1.0;
  return (s * t - rhs) / std::max(s * t, 1e-300);
}

double sandwich_defect(const Slice& f, double t) {
  double prod = left_inverse(f, t) * conjugate_inverse(f, t);
  // positive when the product leaves [t, 2t]
  return std::max(t - prod, prod - 2 * t) / t;
}

namespace {

template <class Fn>
PropertyTally sweep(const char* name, const Gyf& phi, const SampleSpec& s, double tol, Fn&& fn) {
  PropertyTally out{name, 0, 0, -kInf};
  for (const Point& x : s.xs) {
    auto f = phi.slice(x);
    for (std::size_t i = 0; i < s.ts.size(); ++i) {
      double d = fn(*f, s.ts[i], s.ts[(i * 7 + 3) % s.ts.size()]);
      ++out.samples;
      out.worst = std::max(out.worst, d);
      if (d > tol) ++out.violations;
    }
  }
  return out;
}

}  // namespace

PropertyTally check_convexity(const Gyf& phi, const SampleSpec& s) {
  return sweep("convexity", phi, s, 1e-12, [](const Slice& f, double a, double b) { return convexity_defect(f, a, b); });
}

PropertyTally check_superlinearity(const Gyf& phi, const SampleSpec& s) {
  return sweep("superlinearity", phi, s, 1e-12, [](const Slice& f, double t, double u) {
    double k = 1.0 + u;  // any factor >= 1
    double lhs = k * f.value(t), rhs = f.value(k * t);
    if (std::isinf(rhs)) return -1.0;
    return (lhs - rhs) / std::max(rhs, 1e-300);
  });
}

PropertyTally check_fenchel_young(const Gyf& phi, const SampleSpec& s) {
  return sweep("fenchel-young", phi, s, 1e-9,
               [](const Slice& f, double a, double b) { return fenchel_young_defect(f, a, b); });
}

PropertyTally check_inverse_sandwich(const Gyf& phi, const SampleSpec& s) {
  return sweep("inverse-sandwich", phi, s, 1e-8, [](const Slice& f, double t, double) { return sandwich_defect(f, t); });
}

PropertyTally check_inverse_contract(const Gyf& phi, const SampleSpec& s) {
  return sweep("inverse-contract", phi, s, 0.0, [](const Slice& f, double t, double) {
    double inv = left_inverse(f, t);
    double tol = 10 * f.inverse_tol();
    double d = 0;
    if (f.value(inv) < t * (1 - tol)) d = 1;
    for (double delta : {1e-6, 1e-4, 1e-2}) {
      double below = inv * (1 - delta);
      if (below > 0 && delta > tol && f.value(below) >= t) d = 1;
    }
    return d;
  });
}

PropertyTally check_biconjugate(const Gyf& phi, const SampleSpec& s, double tol) {
  return sweep("biconjugation", phi, s, tol, [](const Slice& f, double t, double) {
    auto cs = conjugate_slice(std::shared_ptr<const Slice>(&f, [](const Slice*) {}));
    double bb = young_conjugate(*cs, t);
    double a = f.value(t);
    if (std::isinf(a) && std::isinf(bb)) return 0.0;
    return std::abs(bb - a) / std::max(a, 1e-300);
  });
}

}  // namespace mosob
