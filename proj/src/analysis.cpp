#include "mosob/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "mosob/parallel.hpp"
#include "mosob/quadrature.hpp"
#include "mosob/young.hpp"

namespace mosob {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

// --------------------------------------------------------------- modular

ModularEvaluator::ModularEvaluator(const Gyf& phi, const GridFunction& u) {
  const bool line = u.layout() == Layout::Line;
  if (line && !phi.x_independent()) throw PreconditionError("a line grid only carries x-independent functions");
  if (!line && phi.dim() != u.dim()) throw std::invalid_argument("phi and the grid live in different dimensions");
  if (u.layout() == Layout::Radial && !phi.radial())
    throw PreconditionError("a radial grid needs a radial phi, got " + phi.name());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u.value(i) == 0 || u.weights()[i] == 0) continue;
    idx_.push_back(i);
    absu_.push_back(std::abs(u.value(i)));
    w_.push_back(u.weights()[i]);
  }
  if (phi.x_independent()) {
    slices_.push_back(phi.slice(Point::Zero(phi.dim())));
  } else {
    slices_.resize(idx_.size());
    parallel_for(idx_.size(), [&](std::size_t k) { slices_[k] = phi.slice(u.node(idx_[k])); });
  }
}

ExtReal ModularEvaluator::at_scale(double c) const {
  double total = 0;
  const bool shared = slices_.size() == 1 && idx_.size() != 1;
  for (std::size_t k = 0; k < idx_.size(); ++k) {
    const Slice& s = shared ? *slices_[0] : *slices_[k];
    double v = s.value(c * absu_[k]);
    if (is_inf(v)) return kInf;
    total += w_[k] * v;
  }
  return total;
}

ExtReal modular(const Gyf& phi, const GridFunction& u) { return ModularEvaluator(phi, u).at_scale(1.0); }

double luxemburg_norm(const Gyf& phi, const GridFunction& u, double rtol) {
  ModularEvaluator m(phi, u);
  if (m.zero()) return 0.0;
  auto ok = [&](double lam) { return m.at_scale(1 / lam) <= 1.0; };
  double hi = std::max(u.max_abs(), 1e-300), lo;
  int k = 0;
  while (!ok(hi)) {
    hi *= 2;
    if (++k > 2000 || !std::isfinite(hi)) return kInf;
  }
  lo = 0.5 * hi;
  k = 0;
  while (ok(lo)) {
    hi = lo;
    lo *= 0.5;
    if (++k > 2000 || lo == 0) return 0.0;
  }
  while (hi / lo - 1 > rtol) {
    double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

VerificationReport check_holder(GyfPtr phi, const GridFunction& u, const GridFunction& v) {
  auto t0 = std::chrono::steady_clock::now();
  if (u.size() != v.size() || u.weights() != v.weights()) throw std::invalid_argument("u and v must share a grid");
  VerificationReport rep;
  rep.name = "holder";
  rep.target = "int |u v| <= 2 ||u||_phi ||v||_phi~";
  double lhs = 0;
  for (std::size_t i = 0; i < u.size(); ++i) lhs += u.weights()[i] * std::abs(u.value(i) * v.value(i));
  double nu = luxemburg_norm(*phi, u);
  double nv = luxemburg_norm(*make_conjugate(phi), v);
  double rhs = 2 * nu * nv;
  rep.samples = u.size();
  rep.set("lhs", lhs);
  rep.set("norm_u", nu);
  rep.set("norm_v_conjugate", nv);
  rep.set("rhs", rhs);
  rep.constant = (nu > 0 && nv > 0) ? lhs / (nu * nv) : 0.0;
  rep.max_violation = rhs > 0 ? (lhs - rhs) / rhs : (lhs > 0 ? kInf : 0.0);
  rep.tolerance = 1e-9;
  rep.finalize(true);
  rep.runtime_s = seconds_since(t0);
  return rep;
}

VerificationReport char_ball_norm_bounds(GyfPtr phi, const Domain& ball, const Point& x, double beta, int nr,
                                         int na) {
  auto t0 = std::chrono::steady_clock::now();
  if (ball.kind != Domain::Kind::Ball) throw std::invalid_argument("expected a ball");
  if (!ball.contains(x)) throw std::invalid_argument("x must lie in the ball");
  VerificationReport rep;
  rep.name = "char_ball_norm_bounds";
  rep.target = "||chi_B||_phi <= 1/(beta phi^{-1}(x,1/|B|)), ||chi_B||_phi~ <= 2/(beta phi~^{-1}(x,1/|B|))";
  auto chi = GridFunction::polar_ball(ball.center, ball.radius, nr, na, [](const Point&) { return 1.0; });
  const double inv_vol = 1 / ball.measure();
  auto sx = phi->slice(x);
  double n1 = luxemburg_norm(*phi, chi);
  double b1 = 1 / (beta * left_inverse(*sx, inv_vol));
  double n2 = luxemburg_norm(*make_conjugate(phi), chi);
  double b2 = 2 / (beta * conjugate_inverse(*sx, inv_vol));
  rep.samples = chi.size();
  rep.set("measure", ball.measure());
  rep.set("norm", n1);
  rep.set("bound", b1);
  rep.set("conjugate_norm", n2);
  rep.set("conjugate_bound", b2);
  rep.max_violation = std::max(n1 / b1 - 1, n2 / b2 - 1);
  rep.constant = std::max(n1 / b1, n2 / b2);
  rep.tolerance = 1e-9;
  rep.finalize(true);
  rep.runtime_s = seconds_since(t0);
  return rep;
}

// ----------------------------------------------------------------- riesz

namespace {

// potential of the unit ball at distance s from its center
double unit_ball_potential(int n, double alpha, double s) {
  if (n == 1) {
    if (s <= 1) return (std::pow(1 + s, alpha) + std::pow(1 - s, alpha)) / alpha;
    return (std::pow(s + 1, alpha) - std::pow(s - 1, alpha)) / alpha;
  }
  const double c = unit_sphere_area(n - 1) / alpha;
  if (s == 0) return unit_sphere_area(n) / alpha;
  const double br[] = {M_PI / 2};
  if (s <= 1) {
    // chord length from the point along the direction at angle th to the axis
    ScalarFn f = [=](double th) {
      double sn = std::sin(th);
      double L = -s * std::cos(th) + std::sqrt(std::max(0.0, 1 - s * s * sn * sn));
      return (n == 2 ? 1.0 : std::pow(sn, n - 2)) * std::pow(std::max(L, 0.0), alpha);
    };
    return c * integrate(f, 0.0, M_PI, br, 1e-12, 0.0).value;
  }
  // outside: rays meet the ball for sin th <= 1/s; with sin th = sin psi / s the
  // entry and exit distances are s cos th -+ cos psi
  ScalarFn f = [=](double psi) {
    double sp = std::sin(psi), cp = std::cos(psi);
    double st = sp / s, ct = std::sqrt(std::max(0.0, 1 - st * st));
    double L1 = s * ct - cp;
    double diff;
    if (L1 > 0)
      diff = std::pow(L1, alpha) * std::expm1(alpha * std::log1p(2 * cp / L1));
    else
      diff = std::pow(s * ct + cp, alpha);
    double jac = cp / (s * ct);
    return (n == 2 ? 1.0 : std::pow(st, n - 2)) * diff * jac;
  };
  return c * integrate(f, 0.0, M_PI / 2, 1e-12, 0.0).value;
}

}  // namespace

double ball_potential(int n, double alpha, double rho, double r) {
  if (!(r > 0)) return 0.0;
  return std::pow(r, alpha) * unit_ball_potential(n, alpha, rho / r);
}

RadialRiesz::RadialRiesz(const GridFunction& grid, double alpha, std::vector<double> eval_radii)
    : cells_(grid.size()), radii_(std::move(eval_radii)) {
  if (grid.layout() != Layout::Radial) throw std::invalid_argument("RadialRiesz needs a radial grid");
  const int n = grid.dim();
  if (!(alpha > 0 && alpha < n)) throw std::invalid_argument("alpha must lie in (0, n)");
  if (radii_.empty())
    for (std::size_t i = 0; i < grid.size(); ++i) radii_.push_back(grid.node_radius(i));
  const auto& e = grid.edges();
  K_.assign(radii_.size() * (cells_ + 1), 0.0);
  parallel_for(radii_.size(), [&](std::size_t j) {
    for (std::size_t i = 0; i <= cells_; ++i) K_[j * (cells_ + 1) + i] = ball_potential(n, alpha, radii_[j], e[i]);
  });
}

std::vector<double> RadialRiesz::apply(const std::vector<double>& f) const {
  if (f.size() != cells_) throw std::invalid_argument("value count differs from the grid");
  std::vector<double> out(radii_.size(), 0.0);
  for (std::size_t j = 0; j < radii_.size(); ++j) {
    const double* k = &K_[j * (cells_ + 1)];
    double s = 0;
    for (std::size_t i = 0; i < cells_; ++i)
      if (f[i] != 0) s += f[i] * (k[i + 1] - k[i]);
    out[j] = s;
  }
  return out;
}

std::vector<double> riesz_potential(const GridFunction& f, double alpha, const std::vector<Point>& at) {
  const int n = f.dim();
  if (!(alpha > 0 && alpha < n)) throw std::invalid_argument("alpha must lie in (0, n)");
  if (f.layout() == Layout::Radial) {
    std::vector<double> r;
    for (const Point& x : at) r.push_back(x.norm());
    return RadialRiesz(f, alpha, r).apply(f.values());
  }
  const double wn = unit_ball_volume(n);
  std::vector<double> out(at.size(), 0.0);
  parallel_for(at.size(), [&](std::size_t k) {
    const Point& x = at[k];
    std::size_t host = f.host_cell(x);
    double s = 0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      double v = f.value(j);
      if (v == 0) continue;
      if (j == host) {
        double rho = std::pow(f.weights()[j] / wn, 1.0 / n);
        s += v * n * wn * std::pow(rho, alpha) / alpha;
        continue;
      }
      double d = (f.node(j) - x).norm();
      s += v * f.weights()[j] * std::pow(d, alpha - n);
    }
    out[k] = s;
  });
  return out;
}

GridFunction riesz_potential(const GridFunction& f, double alpha) {
  if (f.layout() == Layout::Radial) return f.with_values(RadialRiesz(f, alpha).apply(f.values()));
  std::vector<Point> nodes;
  for (std::size_t i = 0; i < f.size(); ++i) nodes.push_back(f.node(i));
  return f.with_values(riesz_potential(f, alpha, nodes));
}

// --------------------------------------------------------------- maximal

namespace {
// volume of the cap of height h of a ball of radius R in R^n
double cap_volume(int n, double R, double h) {
  const double full = unit_ball_volume(n) * std::pow(R, n);
  if (h <= 0) return 0.0;
  if (h >= 2 * R) return full;
  if (h > R) return full - cap_volume(n, R, 2 * R - h);
  double z = (2 * R * h - h * h) / (R * R);
  return 0.5 * full * boost::math::ibeta(0.5 * (n + 1), 0.5, std::min(1.0, z));
}
}  // namespace

double lens_volume(int n, double d, double r1, double r2) {
  if (!(r1 > 0) || !(r2 > 0)) return 0.0;
  if (d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) return unit_ball_volume(n) * std::pow(std::min(r1, r2), n);
  if (n == 1) return std::min(d + r1, r2) - std::max(d - r1, -r2);
  double a1 = (d * d + r1 * r1 - r2 * r2) / (2 * d);
  double a2 = d - a1;
  return cap_volume(n, r1, r1 - a1) + cap_volume(n, r2, r2 - a2);
}

std::vector<double> dyadic_radii(double h, double top) {
  if (!(h > 0)) throw std::invalid_argument("radius ladder needs h > 0");
  std::vector<double> r;
  double v = h;
  while (v < top) {
    r.push_back(v);
    v *= 2;
  }
  r.push_back(v);
  return r;
}

double ball_average(const GridFunction& f, const Point& x, double r) {
  const int n = f.dim();
  const double wn = unit_ball_volume(n);
  if (!(r > 0)) {
    std::size_t h = f.host_cell(x);
    return h < f.size() ? std::abs(f.value(h)) : 0.0;
  }
  switch (f.layout()) {
    case Layout::Radial: {
      const auto& e = f.edges();
      double rho = x.norm(), s = 0, prev = 0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        double cur = lens_volume(n, rho, r, e[i + 1]);
        s += std::abs(f.value(i)) * (cur - prev);
        prev = cur;
        if (e[i + 1] > rho + r) break;
      }
      return s / (wn * std::pow(r, n));
    }
    case Layout::Line: {
      const auto& e = f.edges();
      double a = x[0] - r, b = x[0] + r, s = 0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        double ov = std::min(b, e[i + 1]) - std::max(a, e[i]);
        if (ov > 0) s += std::abs(f.value(i)) * ov;
      }
      return s / (2 * r);
    }
    default: break;
  }
  double s = 0, w = 0;
  auto visit = [&](std::size_t j) {
    if ((f.node(j) - x).norm() <= r) {
      s += std::abs(f.value(j)) * f.weights()[j];
      w += f.weights()[j];
    }
  };
  if (f.layout() == Layout::Tensor) {
    // index window of the bounding box
    Point lo = f.domain().lo();
    std::vector<int> a(n), b(n), idx(n);
    for (int d = 0; d < n; ++d) {
      double h = f.spacing()[d];
      a[d] = std::max(0, static_cast<int>(std::floor((x[d] - r - lo[d]) / h)));
      b[d] = std::min(f.shape()[d] - 1, static_cast<int>(std::floor((x[d] + r - lo[d]) / h)));
      if (a[d] > b[d]) return 0.0;
    }
    idx = a;
    while (true) {
      visit(f.flat_index(idx));
      int d = n - 1;
      for (; d >= 0; --d) {
        if (++idx[d] <= b[d]) break;
        idx[d] = a[d];
      }
      if (d < 0) break;
    }
  } else {
    for (std::size_t j = 0; j < f.size(); ++j) visit(j);
  }
  bool inside = f.domain().kind == Domain::Kind::Box
                    ? ((x - f.domain().center).cwiseAbs().array() + r <= f.domain().half.array()).all()
                    : (x - f.domain().center).norm() + r <= f.domain().radius;
  if (w == 0) {
    std::size_t h = f.host_cell(x);
    return h < f.size() ? std::abs(f.value(h)) : 0.0;
  }
  return s / (inside ? w : wn * std::pow(r, n));
}

std::vector<double> maximal_function(const GridFunction& f, const std::vector<double>& radii,
                                     const std::vector<Point>& at) {
  std::vector<double> out(at.size(), 0.0);
  parallel_for(at.size(), [&](std::size_t k) {
    double m = 0;
    for (double r : radii) m = std::max(m, ball_average(f, at[k], r));
    out[k] = m;
  });
  return out;
}

GridFunction maximal_function(const GridFunction& f, const std::vector<double>& radii) {
  std::vector<Point> nodes;
  for (std::size_t i = 0; i < f.size(); ++i) nodes.push_back(f.node(i));
  return f.with_values(maximal_function(f, radii, nodes));
}

VerificationReport check_local_potential_bound(const GridFunction& f, double alpha, const std::vector<Point>& xs,
                                               const std::vector<double>& deltas) {
  auto t0 = std::chrono::steady_clock::now();
  if (f.layout() == Layout::Radial) throw std::invalid_argument("use a tensor, line or scattered grid");
  const int n = f.dim();
  const double wn = unit_ball_volume(n);
  VerificationReport rep;
  rep.name = "local_potential_bound";
  rep.target = "int_{B(x,delta)} |f|/|x-y|^{n-alpha} dy <= (n/alpha) omega_n delta^alpha Mf(x)";
  rep.table.columns = {"x_index", "delta", "lhs", "rhs", "ratio"};
  rep.max_violation = -kInf;
  double worst_ratio = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const Point& x = xs[k];
    std::size_t host = f.host_cell(x);
    double fh = 0, rho = 0;
    if (host < f.size()) {
      fh = std::abs(f.value(host));
      rho = std::pow(f.weights()[host] / wn, 1.0 / n);
    }
    std::vector<std::pair<double, double>> pts;  // distance, mass
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (j == host || f.value(j) == 0) continue;
      pts.emplace_back((f.node(j) - x).norm(), std::abs(f.value(j)) * f.weights()[j]);
    }
    std::sort(pts.begin(), pts.end());
    // sup over r of the mean over B(x,r) of the discrete measure
    double M = fh, F = 0;
    for (auto& [d, m] : pts) {
      F += m;
      double host_part = fh * wn * std::pow(std::min(d, rho), n);
      M = std::max(M, (F + host_part) / (wn * std::pow(d, n)));
    }
    for (double delta : deltas) {
      double lhs = fh * n * wn * std::pow(std::min(rho, delta), alpha) / alpha;
      for (auto& [d, m] : pts) {
        if (d > delta) break;
        lhs += m * std::pow(d, alpha - n);
      }
      double rhs = n / alpha * wn * std::pow(delta, alpha) * M;
      double ratio = rhs > 0 ? lhs / rhs : (lhs > 0 ? kInf : 0.0);
      ++rep.samples;
      rep.table.add({static_cast<double>(k), delta, lhs, rhs, ratio});
      worst_ratio = std::max(worst_ratio, ratio);
      rep.max_violation = std::max(rep.max_violation, ratio - 1);
    }
  }
  rep.constant = worst_ratio;
  rep.tolerance = 1e-12;
  rep.finalize(true);
  rep.runtime_s = seconds_since(t0);
  return rep;
}

VerificationReport check_average_jensen(const Gyf& phi, const GridFunction& f, double gamma_floor,
                                        const JensenSample& js) {
  auto t0 = std::chrono::steady_clock::now();
  if (f.layout() == Layout::Radial || f.layout() == Layout::Line)
    throw std::invalid_argument("the averaging check runs on tensor or scattered grids");
  double norm = luxemburg_norm(phi, f);
  if (norm > 1 + 1e-9) throw PreconditionError("the averaging check needs ||f||_phi <= 1");
  const int n = f.dim();
  VerificationReport rep;
  rep.name = "average_jensen";
  rep.target = "phi(x, gamma M_B f) <= M_B phi(., f) for x in B";
  rep.table.columns = {"center_index", "radius", "Mf", "Mphi", "gamma"};
  std::vector<double> phif(f.size(), 0.0);
  parallel_for(f.size(), [&](std::size_t j) {
    if (f.value(j) != 0) phif[j] = phi(f.node(j), std::abs(f.value(j)));
  });
  auto radii = js.radii;
  if (radii.empty()) {
    double h = f.layout() == Layout::Tensor ? *std::max_element(f.spacing().begin(), f.spacing().end())
                                            : f.domain().diameter() / 64;
    radii = dyadic_radii(h, 0.5 * f.domain().diameter());
  }
  std::mt19937_64 rng(js.seed);
  std::uniform_real_distribution<double> u(-1, 1);
  const Point lo = f.domain().lo(), hi = f.domain().hi();
  double gamma = kInf, gamma_c = kInf;
  for (int c = 0; c < js.centers; ++c) {
    Point center(n);
    for (int d = 0; d < n; ++d) center[d] = lo[d] + (hi[d] - lo[d]) * 0.5 * (u(rng) + 1);
    for (double r : radii) {
      double sf = 0, sp = 0, w = 0;
      for (std::size_t j = 0; j < f.size(); ++j) {
        if ((f.node(j) - center).norm() > r) continue;
        sf += std::abs(f.value(j)) * f.weights()[j];
        sp += phif[j] * f.weights()[j];
        w += f.weights()[j];
      }
      if (w == 0 || sf == 0) continue;
      double mf = sf / w, mp = sp / w;
      std::vector<Point> xs{center};
      for (int k = 0, tries = 0; k < js.points && tries < 100 * js.points; ++tries) {
        Point y(n);
        for (int d = 0; d < n; ++d) y[d] = center[d] + r * u(rng);
        if ((y - center).norm() <= r && f.domain().contains(y)) {
          xs.push_back(y);
          ++k;
        }
      }
      double g = kInf;
      for (const Point& x : xs) g = std::min(g, left_inverse(*phi.slice(x), mp) / mf);
      ++rep.samples;
      rep.table.add({static_cast<double>(c), r, mf, mp, g});
      gamma = std::min(gamma, g);
      if (c < std::max(1, js.centers / 2)) gamma_c = std::min(gamma_c, g);
    }
  }
  rep.constant = gamma;
  rep.constant_coarse = gamma_c;
  rep.set("gamma", gamma);
  rep.set("gamma_floor", gamma_floor);
  rep.set("norm", norm);
  rep.tolerance = 0;
  rep.finalize(gamma >= gamma_floor);
  rep.runtime_s = seconds_since(t0);
  return rep;
}

// -------------------------------------------------------- representation

namespace {

void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  switch (m) {
    case 1: x = {0}; w = {2}; return;
    case 2: x = {-1 / std::sqrt(3.0), 1 / std::sqrt(3.0)}; w = {1, 1}; return;
    case 3: x = {-std::sqrt(0.6), 0, std::sqrt(0.6)}; w = {5.0 / 9, 8.0 / 9, 5.0 / 9}; return;
    case 4: {
      double a = std::sqrt(3.0 / 7 - 2.0 / 7 * std::sqrt(1.2)), b = std::sqrt(3.0 / 7 + 2.0 / 7 * std::sqrt(1.2));
      double wa = (18 + std::sqrt(30.0)) / 36, wb = (18 - std::sqrt(30.0)) / 36;
      x = {-b, -a, a, b};
      w = {wb, wa, wa, wb};
      return;
    }
    default: throw std::invalid_argument("gauss points per cell must be 1..4");
  }
}

// int_0^L -grad u(x + rho th).th drho with breaks where the ray crosses a kink sphere
double ray_integral(const RadialProfile& u, const Point& x, const Point& th, double L) {
  std::vector<double> br;
  double b = x.dot(th), c = x.squaredNorm();
  auto sphere = [&](double R) {
    double disc = b * b - c + R * R;
    if (disc < 0) return;
    double s = std::sqrt(disc);
    for (double r : {-b - s, -b + s})
      if (r > 0 && r < L) br.push_back(r);
  };
  for (double k : u.kinks) sphere(k);
  if (std::isfinite(u.support)) sphere(u.support);
  if (-b > 0 && -b < L) br.push_back(-b);
  std::sort(br.begin(), br.end());
  ScalarFn f = [&](double rho) {
    Point y = x + rho * th;
    return -u.gradient(y).dot(th);
  };
  return integrate(f, 0.0, L, br, 1e-11, 1e-15).value;
}

}  // namespace

double representation_integral(const RadialProfile& u, int n, const Point& x, const RepresentationOptions& o) {
  if (n != 2 && n != 3) throw std::invalid_argument("the representation check supports n = 2 and 3");
  if (x.size() != n) throw std::invalid_argument("evaluation point has the wrong dimension");
  double L = o.box_half > 0 ? o.box_half : 1.25 * u.support;
  if (!std::isfinite(L)) throw std::invalid_argument("give box_half for profiles without compact support");
  const int m = o.cells;
  const double h = 2 * L / m;
  std::vector<int> a(n), b(n);
  for (int d = 0; d < n; ++d) {
    int k = std::clamp(static_cast<int>(std::floor((x[d] + L) / h)), 0, m - 1);
    a[d] = std::max(0, k - o.near);
    b[d] = std::min(m - 1, k + o.near);
  }
  std::vector<double> gx, gw;
  gauss_legendre(o.gauss, gx, gw);
  const int G = o.gauss;

  // far field: Gauss points in every cell outside the near box
  const double reach = std::isfinite(u.support) ? u.support : kInf;
  const double half_diag = 0.5 * h * std::sqrt(static_cast<double>(n));
  const std::size_t total = static_cast<std::size_t>(std::pow(m, n));
  std::vector<double> partial(static_cast<std::size_t>(m), 0.0);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t i0) {
    double acc = 0;
    std::vector<int> idx(n);
    const std::size_t per = total / m;
    Point y(n), c(n);
    for (std::size_t r = 0; r < per; ++r) {
      idx[0] = static_cast<int>(i0);
      std::size_t q = r;
      for (int d = n - 1; d >= 1; --d) {
        idx[d] = static_cast<int>(q % m);
        q /= m;
      }
      bool near = true;
      for (int d = 0; d < n; ++d) near = near && idx[d] >= a[d] && idx[d] <= b[d];
      if (near) continue;
      for (int d = 0; d < n; ++d) c[d] = -L + (idx[d] + 0.5) * h;
      if (c.norm() - half_diag > reach) continue;
      // tensor Gauss rule on the cell
      std::vector<int> g(n, 0);
      while (true) {
        double wt = 1;
        for (int d = 0; d < n; ++d) {
          y[d] = c[d] + 0.5 * h * gx[g[d]];
          wt *= gw[g[d]];
        }
        Point diff = x - y;
        double dn = diff.norm();
        acc += wt * u.gradient(y).dot(diff) / std::pow(dn, n);
        int d = n - 1;
        for (; d >= 0; --d) {
          if (++g[d] < G) break;
          g[d] = 0;
        }
        if (d < 0) break;
      }
    }
    partial[i0] = acc * std::pow(0.5 * h, n);
  });
  double far = 0;
  for (double v : partial) far += v;

  // near box in polar coordinates around x: the solid angle element seen on
  // a face at distance dist is dist/|q-x|^n dA
  Point lo(n), hi(n);
  for (int d = 0; d < n; ++d) {
    lo[d] = -L + a[d] * h;
    hi[d] = -L + (b[d] + 1) * h;
  }
  double near = 0;
  for (int d = 0; d < n; ++d) {
    for (int side = 0; side < 2; ++side) {
      double plane = side ? hi[d] : lo[d];
      double dist = std::abs(plane - x[d]);
      if (dist == 0) continue;
      auto at = [&](const Point& q) {
        Point v = q - x;
        double len = v.norm();
        return ray_integral(u, x, v / len, len) * dist / std::pow(len, n);
      };
      std::vector<int> other;
      for (int e = 0; e < n; ++e)
        if (e != d) other.push_back(e);
      if (n == 2) {
        int e = other[0];
        ScalarFn f = [&](double s) {
          Point q(2);
          q[d] = plane;
          q[e] = s;
          return at(q);
        };
        std::vector<double> br;
        if (x[e] > lo[e] && x[e] < hi[e]) br.push_back(x[e]);
        near += integrate(f, lo[e], hi[e], br, 1e-10, 1e-14).value;
      } else {
        int e1 = other[0], e2 = other[1];
        ScalarFn outer = [&](double s1) {
          ScalarFn inner = [&](double s2) {
            Point q(3);
            q[d] = plane;
            q[e1] = s1;
            q[e2] = s2;
            return at(q);
          };
          std::vector<double> br;
          if (x[e2] > lo[e2] && x[e2] < hi[e2]) br.push_back(x[e2]);
          return integrate(inner, lo[e2], hi[e2], br, 1e-9, 1e-14).value;
        };
        std::vector<double> br;
        if (x[e1] > lo[e1] && x[e1] < hi[e1]) br.push_back(x[e1]);
        near += integrate(outer, lo[e1], hi[e1], br, 1e-9, 1e-14).value;
      }
    }
  }
  return (far + near) / unit_sphere_area(n);
}

VerificationReport representation_formula_check(const RadialProfile& u, int n, const std::vector<Point>& at,
                                                const RepresentationOptions& o) {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.name = "representation_formula";
  rep.target = "u(x) = (1/(n omega_n)) int grad u(y).(x-y)/|x-y|^n dy";
  for (int d = 0; d < n; ++d) rep.table.columns.push_back("x" + std::to_string(d + 1));
  for (const char* c : {"u", "integral", "rel_error"}) rep.table.columns.push_back(c);
  double worst = 0;
  for (const Point& x : at) {
    double ux = u(x), val = representation_integral(u, n, x, o);
    double err = std::abs(val - ux) / (std::abs(ux) > 1e-12 ? std::abs(ux) : 1.0);
    std::vector<double> row(x.data(), x.data() + n);
    row.insert(row.end(), {ux, val, err});
    rep.table.add(row);
    worst = std::max(worst, err);
    ++rep.samples;
  }
  rep.constant = worst;
  rep.max_violation = worst;
  rep.tolerance = o.tol;
  rep.set("cells", o.cells);
  rep.set("max_rel_error", worst);
  rep.finalize(true);
  rep.runtime_s = seconds_since(t0);
  return rep;
}

}  // namespace mosob
