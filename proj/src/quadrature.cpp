#include "mosob/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace mosob {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk15(const ScalarFn& f, double a, double b, int& evals) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double resk = fc * kWgk[7], resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    double dx = h * kXgk[j];
    double f1 = f(c - dx), f2 = f(c + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  evals += 15;
  double val = resk * h;
  double err = std::abs((resk - resg) * h);
  return {a, b, val, err};
}

}  // namespace

QuadResult integrate(const ScalarFn& f, double a, double b, double rtol, double atol, int max_intervals) {
  QuadResult out;
  if (!(b > a)) return out;
  std::priority_queue<Piece> heap;
  Piece p = gk15(f, a, b, out.evals);
  if (std::isinf(p.value) || std::isnan(p.value)) {
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  heap.push(p);
  double total = p.value, err = p.error;
  int count = 1;
  while (err > std::max(atol, rtol * std::abs(total))) {
    if (count >= max_intervals) {
      out.converged = false;
      break;
    }
    Piece worst = heap.top();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      out.converged = false;  // interval collapsed to machine precision
      break;
    }
    heap.pop();
    Piece l = gk15(f, worst.a, mid, out.evals), r = gk15(f, mid, worst.b, out.evals);
    if (std::isinf(l.value) || std::isinf(r.value) || std::isnan(l.value) || std::isnan(r.value)) {
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // resum to shed the drift of the running updates
  total = 0;
  err = 0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = err;
  return out;
}

QuadResult integrate(const ScalarFn& f, double a, double b, std::span<const double> breaks, double rtol,
                     double atol) {
  std::vector<double> cuts{a};
  for (double c : breaks)
    if (c > a && c < b) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(b);
  QuadResult out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadResult q = integrate(f, cuts[i], cuts[i + 1], rtol, atol / static_cast<double>(cuts.size()));
    out.value += q.value;
    out.error += q.error;
    out.evals += q.evals;
    out.converged = out.converged && q.converged;
    if (std::isinf(out.value)) return out;
  }
  return out;
}

TailQuad integrate_from_zero(const ScalarFn& f, double t, double rtol, std::span<const double> breaks) {
  TailQuad out;
  if (!(t > 0)) return out;
  double total = 0;
  double prev = -1, prev_ratio = -1;
  int stable = 0;
  double hi = t;
  constexpr int kMaxLevels = 1000;
  for (int k = 0; k < kMaxLevels; ++k) {
    double lo = 0.5 * hi;
    QuadResult q = integrate(f, lo, hi, breaks, 0.1 * rtol, 0.0);
    out.levels = k + 1;
    if (std::isinf(q.value)) {
      out.value = q.value;
      out.finite = false;
      return out;
    }
    total += q.value;
    if (prev > 0 && q.value >= 0) {
      double r = q.value / prev;
      out.ratio = r;
      bool past_breaks = std::none_of(breaks.begin(), breaks.end(), [&](double c) { return c > 0 && c < hi; });
      if (past_breaks && prev_ratio > 0 && std::abs(r - prev_ratio) <= 1e-6 * r) ++stable;
      else stable = 0;
      prev_ratio = r;
      if (stable >= 2) {
        if (r >= 1.0 - 1e-10) {
          out.value = std::numeric_limits<double>::infinity();
          out.finite = false;
          return out;
        }
        double tail = q.value * r / (1.0 - r);
        out.value = total + tail;
        return out;
      }
      if (past_breaks && r < 1 && q.value * r / (1 - r) <= 1e-3 * rtol * total && k > 4) {
        out.value = total + q.value * r / (1 - r);
        return out;
      }
    } else if (prev == 0 && q.value == 0 && k > 4) {
      out.value = total;  // integrand vanishes near 0
      return out;
    }
    prev = q.value;
    hi = lo;
  }
  // ratio never settled: close with the last ratio if it decays
  if (out.ratio < 1 && prev > 0) {
    out.value = total + prev * out.ratio / (1 - out.ratio);
  } else {
    out.value = std::numeric_limits<double>::infinity();
    out.finite = false;
  }
  return out;
}

double golden_max(const ScalarFn& f, double a, double b, double rtol, double* fmax) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > rtol * std::max(std::abs(a), std::abs(b)) && b - a > 1e-300; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  double x = fc >= fd ? c : d;
  if (fmax) *fmax = std::max(fc, fd);
  return x;
}

}  // namespace mosob
