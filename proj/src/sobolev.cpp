#include "mosob/sobolev.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mosob/monotone_tab.hpp"

namespace mosob {

const char* tail_name(TailTag t) { return t == TailTag::FiniteLimit ? "finite-limit" : "diverges"; }

// ---------------------------------------------------------------- table

CumulativeTable::CumulativeTable(ScalarFn g, std::vector<double> breaks, const TableOptions& o)
    : g_(std::move(g)), breaks_(std::move(breaks)), opt_(o) {
  std::sort(breaks_.begin(), breaks_.end());
  tau_ = MonotoneTab::log_grid(o.t_lo, o.t_hi, o.points);
  auto head = integrate_from_zero(g_, tau_[0], o.rtol, breaks_);
  if (!head.finite || !std::isfinite(head.value)) throw GrowthConditionError("the integral diverges at 0");
  I_.resize(tau_.size());
  I_[0] = head.value;
  for (std::size_t i = 1; i < tau_.size(); ++i) I_[i] = I_[i - 1] + segment(tau_[i - 1], tau_[i]);
  if (head.ratio > 0 && head.ratio < 1)
    head_slope_ = -std::log2(head.ratio);
  else if (I_[0] > 0 && I_[1] > I_[0])
    head_slope_ = std::log(I_[1] / I_[0]) / std::log(tau_[1] / tau_[0]);

  const double thi = tau_.back();
  double g1 = g_(thi), g0 = g_(thi / 100);
  if (!std::isfinite(I_.back())) {
    tail_ = TailTag::Diverges;
    gamma_ = 0;
  } else if (g1 == 0) {  // the base jumped to +inf: nothing left to integrate
    tail_ = TailTag::FiniteLimit;
    gamma_ = kInf;
    limit_ = I_.back();
  } else if (g0 > 0 && std::isfinite(g0) && std::isfinite(g1)) {
    gamma_ = -std::log(g1 / g0) / std::log(100.0);
    if (gamma_ > 1 + 1e-3) {
      tail_ = TailTag::FiniteLimit;
      limit_ = I_.back() + g1 * thi / (gamma_ - 1);
    }
  }
}

double CumulativeTable::segment(double a, double b) const {
  if (!(b > a)) return 0.0;
  // t = e^u: power laws become exponentials, which GK resolves at any scale
  ScalarFn f = [this](double u) {
    double t = std::exp(u);
    double v = g_(t);
    return v == 0 ? 0.0 : v * t;
  };
  std::vector<double> lb;
  for (double c : breaks_)
    if (c > a && c < b) lb.push_back(std::log(c));
  return integrate(f, std::log(a), std::log(b), lb, opt_.rtol, 0.0).value;
}

double CumulativeTable::value(double t) const {
  if (!(t > 0)) return 0.0;
  if (t < tau_[0]) return integrate_from_zero(g_, t, opt_.rtol, breaks_).value;
  auto it = std::upper_bound(tau_.begin(), tau_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - tau_.begin()) - 1;
  return I_[i] + segment(tau_[i], t);
}

double CumulativeTable::solve(double s, double lo, double hi, double guess) const {
  double t = guess;
  if (!(t > lo && t < hi)) t = std::isfinite(hi) ? (lo > 0 ? std::sqrt(lo * hi) : 0.5 * hi) : 2 * std::max(lo, 1e-300);
  for (int it = 0; it < 200; ++it) {
    double f = value(t) - s;
    if (std::abs(f) <= 1e-14 * s) return t;
    (f > 0 ? hi : lo) = t;
    if (std::isfinite(hi) && hi - lo <= 1e-15 * hi) return hi;
    double d = g_(t) * t, next = -1;
    if (d > 0 && std::isfinite(d)) next = t * std::exp(std::clamp(-f / d, -50.0, 50.0));
    if (!(next > lo && next < hi)) {
      if (!std::isfinite(hi))
        next = 4 * t;
      else
        next = lo > 0 ? std::sqrt(lo * hi) : 0.5 * hi;
    }
    t = next;
  }
  return t;
}

ExtReal CumulativeTable::inverse(double s) const {
  if (!(s > 0)) return 0.0;
  if (!std::isfinite(s)) return kInf;
  if (tail_ == TailTag::FiniteLimit && s >= limit_) return kInf;
  if (s <= I_[0]) {
    double guess = I_[0] > 0 ? tau_[0] * std::pow(s / I_[0], 1 / head_slope_) : 0.5 * tau_[0];
    return solve(s, 0.0, tau_[0], guess);
  }
  auto it = std::lower_bound(I_.begin(), I_.end(), s);
  if (it != I_.end()) {
    std::size_t j = static_cast<std::size_t>(it - I_.begin());
    if (I_[j] == s && (j == 0 || I_[j - 1] < s)) return tau_[j];
    double a = tau_[j - 1], b = tau_[j];
    double guess = a;
    if (I_[j - 1] > 0 && std::isfinite(I_[j]))
      guess = a * std::pow(b / a, std::log(s / I_[j - 1]) / std::log(I_[j] / I_[j - 1]));
    return solve(s, a, b, guess);
  }
  // beyond the grid: start from the power-law model of g
  const double thi = tau_.back(), g1 = g_(thi), excess = s - I_.back();
  double guess = 2 * thi;
  if (g1 > 0 && std::isfinite(gamma_)) {
    double scale = excess / (g1 * thi);
    if (std::abs(gamma_ - 1) <= 1e-3)
      guess = thi * std::exp(std::min(scale, 700.0));
    else if (gamma_ < 1)
      guess = thi * std::pow(1 + scale * (1 - gamma_), 1 / (1 - gamma_));
    else if (scale * (gamma_ - 1) < 1)
      guess = thi * std::pow(1 - scale * (gamma_ - 1), -1 / (gamma_ - 1));
  }
  if (!std::isfinite(guess)) return kInf;
  return solve(s, thi, kInf, guess);
}

// ------------------------------------------------------ sobolev conjugate

namespace {

ScalarFn h_integrand(SlicePtr sl, double e) {
  return [sl, e](double tau) {
    if (!(tau > 0)) return 0.0;
    double v = sl->value(tau);
    if (is_inf(v)) return 0.0;
    if (!(v > 0)) return kInf;
    return std::pow(tau / v, e);
  };
}

std::vector<double> cache_key(const Gyf& g, const Point& x) {
  if (g.x_independent()) return {};
  if (g.radial()) return {x.norm()};
  return {x.data(), x.data() + x.size()};
}

}  // namespace

SobolevConjugate::SobolevConjugate(GyfPtr base, double alpha, TableOptions o, const std::vector<Point>& prebuild)
    : base_(std::move(base)), alpha_(alpha), opt_(o) {
  const int n = base_->dim();
  if (!(alpha > 0 && alpha < n)) throw std::invalid_argument("alpha must lie in (0, n)");
  for (const Point& x : prebuild) table(x);
}

std::vector<double> SobolevConjugate::key(const Point& x) const { return cache_key(*base_, x); }

std::shared_ptr<const CumulativeTable> SobolevConjugate::table(const Point& x) const {
  auto k = key(x);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = tables_.find(k);
    if (it != tables_.end()) return it->second;
  }
  const int n = base_->dim();
  auto sl = base_->slice(x);
  auto tab = std::make_shared<const CumulativeTable>(h_integrand(sl, alpha_ / (n - alpha_)), sl->breaks(), opt_);
  std::lock_guard<std::mutex> lock(mu_);
  return tables_.emplace(std::move(k), std::move(tab)).first->second;
}

double SobolevConjugate::H(const Point& x, double t) const {
  if (!(t > 0)) return 0.0;
  const int n = dim();
  return std::pow(table(x)->value(t), (n - alpha_) / n);
}

ExtReal SobolevConjugate::H_inverse(const Point& x, double s) const {
  if (!(s > 0)) return 0.0;
  const int n = dim();
  return table(x)->inverse(std::pow(s, n / (n - alpha_)));
}

ExtReal SobolevConjugate::conjugate(const Point& x, double t) const {
  if (!(t > 0)) return 0.0;
  double tau = H_inverse(x, t);
  if (is_inf(tau)) return kInf;
  return (*base_)(x, tau);
}

ExtReal SobolevConjugate::limit(const Point& x) const {
  const int n = dim();
  double l = table(x)->limit();
  return is_inf(l) ? kInf : std::pow(l, (n - alpha_) / n);
}

TailTag SobolevConjugate::tail(const Point& x) const { return table(x)->tail(); }

SobolevPtr make_sobolev_conjugate(GyfPtr phi, double alpha, Recipe r, TableOptions o) {
  return std::make_shared<const SobolevConjugate>(normalize(std::move(phi), r), alpha, o);
}

namespace {

class SobConjSlice final : public Slice {
 public:
  SobConjSlice(std::shared_ptr<const CumulativeTable> tab, SlicePtr base, double power)
      : tab_(std::move(tab)), base_(std::move(base)), power_(power) {}
  ExtReal value(double t) const override {
    if (!(t > 0)) return 0.0;
    double tau = tab_->inverse(std::pow(t, power_));
    return is_inf(tau) ? kInf : base_->value(tau);
  }

 private:
  std::shared_ptr<const CumulativeTable> tab_;
  SlicePtr base_;
  double power_;
};

class SobConjGyf final : public Gyf {
 public:
  explicit SobConjGyf(SobolevPtr sc) : sc_(std::move(sc)) {}
  int dim() const override { return sc_->dim(); }
  SlicePtr slice(const Point& x) const override {
    const int n = dim();
    return std::make_shared<SobConjSlice>(sc_->table(x), sc_->base()->slice(x), n / (n - sc_->alpha()));
  }
  bool x_independent() const override { return sc_->base()->x_independent(); }
  bool radial() const override { return sc_->base()->radial(); }
  std::string name() const override { return "sobolev_conjugate[" + sc_->base()->name() + "]"; }

 private:
  SobolevPtr sc_;
};

}  // namespace

GyfPtr sobolev_conjugate_gyf(SobolevPtr sc) { return std::make_shared<SobConjGyf>(std::move(sc)); }

double H_transform(const Gyf& base, double alpha, const Point& x, double t, double rtol) {
  if (!(t > 0)) return 0.0;
  const int n = base.dim();
  auto sl = base.slice(x);
  auto br = sl->breaks();
  std::sort(br.begin(), br.end());
  auto r = integrate_from_zero(h_integrand(sl, alpha / (n - alpha)), t, rtol, br);
  if (!r.finite) throw GrowthConditionError("the H integral diverges at 0 for " + base.name());
  return std::pow(r.value, (n - alpha) / n);
}

double H_n_transform(const Gyf& base, const Point& x, double t, double rtol) {
  if (!(t > 0)) return 0.0;
  const int n = base.dim();
  if (n < 2) throw std::invalid_argument("H_n needs n >= 2");
  const double nprime = n / (n - 1.0);
  auto sl = base.slice(x);
  auto br = sl->breaks();
  std::sort(br.begin(), br.end());
  auto r = integrate_from_zero(h_integrand(sl, 1.0 / (n - 1)), t, rtol, br);
  if (!r.finite) throw GrowthConditionError("the H integral diverges at 0 for " + base.name());
  return std::pow(r.value, 1 / nprime);
}

// ---------------------------------------------------------------- oracles

ExtReal oracle_variable_exponent(int n, double p_inf, double p, double t) {
  if (!(p_inf < n)) throw PreconditionError("the variable exponent closed form needs p_inf < n");
  if (!(t > 0)) return 0.0;
  const double nn = n, np = nn / (nn - 1);
  const double t0 = std::pow((nn - 1) / (nn - p_inf), 1 / np);
  if (t < t0) return std::pow(t0, -nn * p_inf / (nn - p_inf)) * std::pow(t, nn * p_inf / (nn - p_inf));
  if (p == nn) return std::exp(nn * (1 - nn) / (nn - p_inf)) * std::exp(nn * std::pow(t, np));
  if (p < nn) {
    double base = (nn - p) / (nn - 1) * std::pow(t, np) - (p_inf - p) / (nn - p_inf);
    return std::pow(base, (nn - 1) * p / (nn - p));
  }
  const double t_inf = std::pow((p - p_inf) * (nn - 1) / ((nn - p_inf) * (p - nn)), 1 / np);
  if (t >= t_inf) return kInf;
  double base = (p - p_inf) / (nn - p_inf) - (p - nn) / (nn - 1) * std::pow(t, np);
  return std::pow(base, (nn - 1) * p / (nn - p));
}

double double_phase_t_inf(int n, double p, double q) {
  if (!(q > n)) return kInf;
  ScalarFn g = [=](double s) {
    if (!(s > 0)) return 0.0;
    return std::pow(std::pow(s, p - 1) + std::pow(s, q - 1), -1.0 / (n - 1));
  };
  double head = integrate_from_zero(g, 1.0, 1e-12).value;
  const double S = 1e12;
  ScalarFn gl = [&](double u) {
    double s = std::exp(u);
    return g(s) * s;
  };
  double mid = integrate(gl, 0.0, std::log(S), 1e-12).value;
  // beyond S the integrand is s^{-(q-1)/(n-1)} up to a relative s^{p-q}
  double gamma = (q - 1) / (n - 1);
  double tail = g(S) * S / (gamma - 1);
  return std::pow(head + mid + tail, (n - 1.0) / n);
}

ExtReal oracle_double_phase(int n, double p, double q, double a, double t) {
  if (!(p < n)) throw PreconditionError("the double phase closed form needs p < n");
  if (!(t > 0)) return 0.0;
  const double nn = n, np = nn / (nn - 1);
  const double low = std::pow(t, nn * p / (nn - p));
  if (a <= 0) return low;
  if (q < nn) return low + std::pow(a, nn / (nn - q)) * std::pow(t, nn * q / (nn - q));
  if (q == nn) {
    if (t * std::pow(a, 1 / nn) >= 1) return std::pow(a, p / (p - nn)) * std::exp(nn * std::pow(a, 1 / (nn - 1)) * std::pow(t, np));
    return low;
  }
  const double t_inf = double_phase_t_inf(n, p, q);
  const double s = t * std::pow(a, (nn - p) / (nn * (q - p)));
  if (s >= t_inf) return kInf;
  return low / std::pow(t_inf - s, (nn - 1) * q / (q - nn));
}

GyfPtr oracle_variable_exponent_gyf(int n, SpatialField p) {
  auto lim = p.limit();
  if (!lim) throw PreconditionError("the exponent field must declare its limit at infinity");
  double p_inf = *lim;
  if (!(p_inf < n)) throw PreconditionError("the variable exponent closed form needs p_inf < n");
  return make_lambda(
      n, [n, p, p_inf](const Point& x, double t) { return oracle_variable_exponent(n, p_inf, p(x), t); },
      p.is_constant(), "oracle_variable_exponent");
}

GyfPtr oracle_double_phase_gyf(int n, double p, double q, SpatialField a) {
  if (!(p < n)) throw PreconditionError("the double phase closed form needs p < n");
  return make_lambda(
      n, [n, p, q, a](const Point& x, double t) { return oracle_double_phase(n, p, q, a(x), t); }, a.is_constant(),
      "oracle_double_phase");
}

// ---------------------------------------------------------------- kernels

double KernelFns::default_sigma(int n, double alpha) {
  return unit_ball_volume(n) * std::max(std::ldexp(1.0, -n), n / (n - alpha));
}

KernelFns::KernelFns(GyfPtr base, double alpha, double k, double sigma, TableOptions o)
    : base_(std::move(base)), alpha_(alpha), k_(k), sigma_(sigma), opt_(o) {
  const int n = base_->dim();
  if (!(alpha > 0 && alpha < n)) throw std::invalid_argument("alpha must lie in (0, n)");
  if (!(k > 0) || !(sigma > 0)) throw std::invalid_argument("k and sigma must be positive");
  m_ = n / (n - alpha);
}

std::shared_ptr<const CumulativeTable> KernelFns::table(const Point& x) const {
  auto key = cache_key(*base_, x);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = tables_.find(key);
    if (it != tables_.end()) return it->second;
  }
  auto conj = conjugate_slice(base_->slice(x));
  const double k = k_, m = m_;
  ScalarFn g = [conj, k, m](double tau) {
    if (!(tau > 0)) return 0.0;
    double v = conj->value(k * tau);
    if (is_inf(v)) return kInf;
    return v == 0 ? 0.0 : v / std::pow(tau, 1 + m);
  };
  std::shared_ptr<const CumulativeTable> tab;
  try {
    tab = std::make_shared<const CumulativeTable>(g, std::vector<double>{}, opt_);
  } catch (const GrowthConditionError&) {
    throw KernelError("the psi integral diverges at 0: the conjugate is too flat near 0 for " + base_->name());
  }
  std::lock_guard<std::mutex> lock(mu_);
  return tables_.emplace(std::move(key), std::move(tab)).first->second;
}

ExtReal KernelFns::psi(const Point& x, double t) const {
  if (!(t > 0)) return 0.0;
  double j = table(x)->value(t);
  return is_inf(j) ? kInf : sigma_ * std::pow(t, m_) * j;
}

namespace {
class PsiSlice final : public Slice {
 public:
  PsiSlice(std::shared_ptr<const CumulativeTable> tab, double sigma, double m)
      : tab_(std::move(tab)), sigma_(sigma), m_(m) {}
  ExtReal value(double t) const override {
    if (!(t > 0)) return 0.0;
    double j = tab_->value(t);
    return is_inf(j) ? kInf : sigma_ * std::pow(t, m_) * j;
  }
  double inverse_tol() const override { return 1e-12; }

 private:
  std::shared_ptr<const CumulativeTable> tab_;
  double sigma_, m_;
};
}  // namespace

SlicePtr KernelFns::psi_slice(const Point& x) const { return std::make_shared<PsiSlice>(table(x), sigma_, m_); }

double KernelFns::psi_inverse(const Point& x, double s) const { return left_inverse(*psi_slice(x), s); }

ExtReal KernelFns::lambda(const Point& x, double delta) const {
  const int n = base_->dim();
  if (!(delta > 0)) {
    double jl = table(x)->limit();
    return is_inf(jl) ? kInf : std::pow(sigma_ * jl, (n - alpha_) / n);
  }
  double inv = psi_inverse(x, std::pow(delta, -n));
  if (!(inv > 0)) return kInf;
  return 1 / (std::pow(delta, n - alpha_) * inv);
}

ExtReal KernelFns::omega(const Point& x, double t) const {
  if (!(t > 0)) return 0.0;
  const int n = base_->dim();
  double v = (*base_)(x, t);
  if (is_inf(v)) return lambda(x, 0.0);
  if (!(v > 0)) return 0.0;
  double inv = psi_inverse(x, v);
  if (!(inv > 0)) return kInf;
  return std::pow(v, (n - alpha_) / n) / inv;
}

VerificationReport check_cistro(const KernelFns& kf, const SobolevConjugate& sc, const SampleSpec& s) {
  auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.name = "cistro";
  rep.target = "c1 k H(x,t) <= omega(x,t) <= c2 k H(x,t)";
  rep.table.columns = {"x_index", "t", "H", "omega", "ratio"};
  double c1 = kInf, c2 = 0, c1c = kInf, c2c = 0;
  const std::size_t half_x = std::max<std::size_t>(1, (s.xs.size() + 1) / 2);
  for (std::size_t i = 0; i < s.xs.size(); ++i) {
    for (std::size_t j = 0; j < s.ts.size(); ++j) {
      double t = s.ts[j];
      double h = sc.H(s.xs[i], t);
      double w = kf.omega(s.xs[i], t);
      if (!(h > 0) || !std::isfinite(h) || !std::isfinite(w)) continue;
      double r = w / (kf.k() * h);
      ++rep.samples;
      rep.table.add({static_cast<double>(i), t, h, w, r});
      c1 = std::min(c1, r);
      c2 = std::max(c2, r);
      if (i < half_x && j % 2 == 0) {
        c1c = std::min(c1c, r);
        c2c = std::max(c2c, r);
      }
    }
  }
  rep.set("c1", c1);
  rep.set("c2", c2);
  rep.set("c1_coarse", c1c);
  rep.set("c2_coarse", c2c);
  rep.set("k", kf.k());
  rep.set("sigma", kf.sigma());
  rep.constant = c2 / c1;
  rep.constant_coarse = c2c / c1c;
  double drift = std::max(std::abs(c1 / c1c - 1), std::abs(c2 / c2c - 1));
  rep.set("drift", drift);
  rep.tolerance = 0;
  bool ok = rep.samples > 0 && c1 > 0 && std::isfinite(c2) && drift <= 0.2;
  rep.finalize(ok);
  rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace mosob
