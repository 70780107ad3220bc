#include "mosob/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mosob {

// ---------------------------------------------------------------- domain

Domain Domain::box(const Point& lo, const Point& hi) {
  if (lo.size() != hi.size() || lo.size() == 0) throw std::invalid_argument("box corners must share a dimension");
  Domain d;
  d.kind = Kind::Box;
  d.n = static_cast<int>(lo.size());
  d.center = 0.5 * (lo + hi);
  d.half = 0.5 * (hi - lo);
  if ((d.half.array() <= 0).any()) throw std::invalid_argument("box must have positive extent");
  return d;
}

Domain Domain::cube(int n, double half_width) {
  return box(Point::Constant(n, -half_width), Point::Constant(n, half_width));
}

Domain Domain::ball(const Point& center, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("ball radius must be positive");
  Domain d;
  d.kind = Kind::Ball;
  d.n = static_cast<int>(center.size());
  d.center = center;
  d.radius = radius;
  d.half = Point::Constant(d.n, radius);
  return d;
}

double Domain::measure() const {
  if (kind == Kind::Ball) return unit_ball_volume(n) * std::pow(radius, n);
  return (2 * half).prod();
}

bool Domain::contains(const Point& x) const {
  if (kind == Kind::Ball) return (x - center).norm() <= radius;
  return ((x - center).cwiseAbs().array() <= half.array()).all();
}

Point Domain::lo() const { return center - half; }
Point Domain::hi() const { return center + half; }
double Domain::diameter() const { return kind == Kind::Ball ? 2 * radius : 2 * half.norm(); }

std::string Domain::describe() const {
  std::ostringstream os;
  auto vec = [&](const Point& p) {
    for (int i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  };
  os.precision(17);
  if (kind == Kind::Ball) {
    os << "domain=ball center=";
    vec(center);
    os << " radius=" << radius;
  } else {
    os << "domain=box center=";
    vec(center);
    os << " half=";
    vec(half);
  }
  return os.str();
}

const char* layout_name(Layout l) {
  switch (l) {
    case Layout::Tensor: return "tensor";
    case Layout::Radial: return "radial";
    case Layout::Line: return "line";
    case Layout::Scattered: return "scattered";
  }
  return "?";
}

// ---------------------------------------------------------- constructors

GridFunction GridFunction::tensor(const Domain& box, const std::vector<int>& shape, const Fn& f) {
  if (box.kind != Domain::Kind::Box) throw std::invalid_argument("tensor grids live on boxes");
  const int n = box.n;
  if (static_cast<int>(shape.size()) != n) throw std::invalid_argument("shape rank differs from the dimension");
  GridFunction g;
  g.layout_ = Layout::Tensor;
  g.domain_ = box;
  g.shape_ = shape;
  std::size_t total = 1;
  double w = 1;
  Point lo = box.lo();
  for (int d = 0; d < n; ++d) {
    if (shape[d] < 1) throw std::invalid_argument("shape entries must be positive");
    total *= static_cast<std::size_t>(shape[d]);
    g.spacing_.push_back(2 * box.half[d] / shape[d]);
    w *= g.spacing_.back();
  }
  g.coords_.resize(total * n);
  g.weights_.assign(total, w);
  g.values_.assign(total, 0.0);
  std::vector<int> idx(n, 0);
  for (std::size_t i = 0; i < total; ++i) {
    for (int d = 0; d < n; ++d) g.coords_[i * n + d] = lo[d] + (idx[d] + 0.5) * g.spacing_[d];
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[d] < shape[d]) break;
      idx[d] = 0;
    }
  }
  if (f)
    for (std::size_t i = 0; i < total; ++i) g.values_[i] = f(g.node(i));
  return g;
}

GridFunction GridFunction::radial(int n, std::vector<double> edges, const RadialFn& f) {
  if (edges.size() < 2 || edges[0] != 0) throw std::invalid_argument("radial edges must start at 0");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw std::invalid_argument("radial edges must increase");
  GridFunction g;
  g.layout_ = Layout::Radial;
  g.domain_ = Domain::ball(Point::Zero(n), edges.back());
  const double wn = unit_ball_volume(n);
  const std::size_t m = edges.size() - 1;
  g.coords_.assign(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double r = 0.5 * (edges[i] + edges[i + 1]);
    g.coords_[i * n] = r;
    g.weights_.push_back(wn * (std::pow(edges[i + 1], n) - std::pow(edges[i], n)));
    g.values_.push_back(f ? f(r) : 0.0);
  }
  g.edges_ = std::move(edges);
  return g;
}

GridFunction GridFunction::line(std::vector<double> edges, const RadialFn& f) {
  if (edges.size() < 2) throw std::invalid_argument("a line grid needs at least one cell");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw std::invalid_argument("line edges must increase");
  GridFunction g;
  g.layout_ = Layout::Line;
  g.domain_ = Domain::box(Point::Constant(1, edges.front()), Point::Constant(1, edges.back()));
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double s = 0.5 * (edges[i] + edges[i + 1]);
    g.coords_.push_back(s);
    g.weights_.push_back(edges[i + 1] - edges[i]);
    g.values_.push_back(f ? f(s) : 0.0);
  }
  g.edges_ = std::move(edges);
  return g;
}

GridFunction GridFunction::scattered(const Domain& d, std::vector<Point> nodes, std::vector<double> weights,
                                     std::vector<double> values) {
  if (nodes.size() != weights.size()) throw std::invalid_argument("one weight per node");
  if (values.empty()) values.assign(nodes.size(), 0.0);
  if (values.size() != nodes.size()) throw std::invalid_argument("one value per node");
  GridFunction g;
  g.layout_ = Layout::Scattered;
  g.domain_ = d;
  for (const Point& p : nodes) {
    if (p.size() != d.n) throw std::invalid_argument("node dimension differs from the domain");
    for (int k = 0; k < d.n; ++k) g.coords_.push_back(p[k]);
  }
  g.weights_ = std::move(weights);
  g.values_ = std::move(values);
  return g;
}

GridFunction GridFunction::polar_ball(const Point& c, double R, int nr, int na, const Fn& f) {
  const int n = static_cast<int>(c.size());
  if (n < 1 || n > 3) throw std::invalid_argument("polar cells are available for n <= 3");
  if (nr < 1 || na < 1) throw std::invalid_argument("cell counts must be positive");
  std::vector<Point> nodes;
  std::vector<double> w;
  auto push = [&](Point p, double wt) {
    nodes.push_back(std::move(p));
    w.push_back(wt);
  };
  const double dr = R / nr;
  if (n == 1) {
    for (int i = 0; i < 2 * nr; ++i) push(Point::Constant(1, c[0] - R + (i + 0.5) * dr), dr);
  } else if (n == 2) {
    const double da = 2 * M_PI / na;
    for (int i = 0; i < nr; ++i) {
      double r1 = i * dr, r2 = (i + 1) * dr, rm = 0.5 * (r1 + r2);
      for (int j = 0; j < na; ++j) {
        double a = (j + 0.5) * da;
        Point p(2);
        p << c[0] + rm * std::cos(a), c[1] + rm * std::sin(a);
        push(p, 0.5 * da * (r2 * r2 - r1 * r1));
      }
    }
  } else {
    const double dt = M_PI / na, dp = M_PI / na;  // 2 na azimuth cells
    for (int i = 0; i < nr; ++i) {
      double r1 = i * dr, r2 = (i + 1) * dr, rm = 0.5 * (r1 + r2);
      for (int j = 0; j < na; ++j) {
        double t1 = j * dt, t2 = (j + 1) * dt, tm = 0.5 * (t1 + t2);
        for (int k = 0; k < 2 * na; ++k) {
          double ph = (k + 0.5) * dp;
          Point p(3);
          p << c[0] + rm * std::sin(tm) * std::cos(ph), c[1] + rm * std::sin(tm) * std::sin(ph), c[2] + rm * std::cos(tm);
          push(p, (r2 * r2 * r2 - r1 * r1 * r1) / 3 * dp * (std::cos(t1) - std::cos(t2)));
        }
      }
    }
  }
  std::vector<double> v(nodes.size(), 0.0);
  if (f)
    for (std::size_t i = 0; i < nodes.size(); ++i) v[i] = f(nodes[i]);
  return scattered(Domain::ball(c, R), std::move(nodes), std::move(w), std::move(v));
}

std::vector<double> GridFunction::radial_edges(double r_core, int core_cells, double r_max, int per_octave) {
  if (!(r_core > 0) || core_cells < 1 || per_octave < 1) throw std::invalid_argument("bad radial edge spec");
  std::vector<double> e;
  for (int i = 0; i <= core_cells; ++i) e.push_back(r_core * i / core_cells);
  e.back() = r_core;
  const double q = std::pow(2.0, 1.0 / per_octave);
  double r = r_core;
  while (r < r_max * (1 - 1e-12)) {
    r = std::min(r * q, r_max);
    if (r_max - r < 1e-9 * r_max) r = r_max;
    e.push_back(r);
  }
  return e;
}

// ---------------------------------------------------------------- access

Point GridFunction::node(std::size_t i) const {
  const int n = dim();
  return Eigen::Map<const Point>(coords_.data() + i * n, n);
}

double GridFunction::node_radius(std::size_t i) const { return node(i).norm(); }

double GridFunction::measure() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

std::size_t GridFunction::flat_index(const std::vector<int>& idx) const {
  std::size_t k = 0;
  for (std::size_t d = 0; d < shape_.size(); ++d) k = k * shape_[d] + idx[d];
  return k;
}

std::vector<int> GridFunction::multi_index(std::size_t i) const {
  std::vector<int> idx(shape_.size());
  for (int d = static_cast<int>(shape_.size()) - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(i % shape_[d]);
    i /= shape_[d];
  }
  return idx;
}

std::size_t GridFunction::host_cell(const Point& x) const {
  switch (layout_) {
    case Layout::Tensor: {
      Point lo = domain_.lo();
      std::vector<int> idx(dim());
      for (int d = 0; d < dim(); ++d) {
        double k = std::floor((x[d] - lo[d]) / spacing_[d]);
        if (k < 0 || k >= shape_[d]) {
          if (k == shape_[d] && x[d] <= domain_.hi()[d]) k = shape_[d] - 1;
          else return size();
        }
        idx[d] = static_cast<int>(k);
      }
      return flat_index(idx);
    }
    case Layout::Radial:
    case Layout::Line: {
      double s = layout_ == Layout::Radial ? x.norm() : x[0];
      if (s < edges_.front() || s > edges_.back()) return size();
      auto it = std::upper_bound(edges_.begin(), edges_.end(), s);
      std::size_t k = static_cast<std::size_t>(it - edges_.begin());
      return std::min(k == 0 ? 0 : k - 1, size() - 1);
    }
    case Layout::Scattered: return size();
  }
  return size();
}

GridFunction GridFunction::with_values(std::vector<double> v) const {
  if (v.size() != size()) throw std::invalid_argument("value count differs from the grid");
  GridFunction g = *this;
  g.values_ = std::move(v);
  return g;
}

GridFunction GridFunction::map(const std::function<double(double)>& f) const {
  GridFunction g = *this;
  for (double& v : g.values_) v = f(v);
  return g;
}

GridFunction GridFunction::scaled(double c) const {
  return map([c](double v) { return c * v; });
}

double GridFunction::max_abs() const {
  double m = 0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool GridFunction::is_zero() const { return max_abs() == 0; }

// ------------------------------------------------------------------- csv

void GridFunction::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os.precision(17);
  os << "# n=" << dim() << " " << domain_.describe() << " layout=" << layout_name(layout_);
  if (layout_ == Layout::Tensor) {
    os << " shape=";
    for (std::size_t d = 0; d < shape_.size(); ++d) os << (d ? "," : "") << shape_[d];
  }
  os << "\n";
  for (int d = 0; d < dim(); ++d) os << "x" << d + 1 << ",";
  os << "weight,value\n";
  for (std::size_t i = 0; i < size(); ++i) {
    for (int d = 0; d < dim(); ++d) os << coords_[i * dim() + d] << ",";
    os << weights_[i] << "," << values_[i] << "\n";
  }
}

namespace {
std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  return v;
}
Point to_point(const std::vector<double>& v) { return Eigen::Map<const Point>(v.data(), static_cast<Eigen::Index>(v.size())); }
}  // namespace

GridFunction GridFunction::read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::string header, columns, line;
  std::getline(is, header);
  if (header.rfind("# ", 0) != 0) throw std::runtime_error(path + ": missing '# n=...' header line");
  std::map<std::string, std::string> kv;
  std::stringstream hs(header.substr(2));
  std::string tok;
  while (hs >> tok) {
    auto eq = tok.find('=');
    if (eq != std::string::npos) kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* k : {"n", "domain", "layout", "center"})
    if (!kv.count(k)) throw std::runtime_error(path + ": header lacks '" + k + "'");
  const int n = std::stoi(kv["n"]);
  std::getline(is, columns);
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto r = split_numbers(line);
    if (static_cast<int>(r.size()) != n + 2) throw std::runtime_error(path + ": row with the wrong column count");
    rows.push_back(std::move(r));
  }
  Domain dom = kv["domain"] == "ball" ? Domain::ball(to_point(split_numbers(kv["center"])), std::stod(kv.at("radius")))
                                      : Domain{};
  if (kv["domain"] == "box") {
    Point c = to_point(split_numbers(kv["center"])), h = to_point(split_numbers(kv.at("half")));
    dom = Domain::box(c - h, c + h);
  }
  std::vector<double> vals;
  for (auto& r : rows) vals.push_back(r[n + 1]);
  const std::string lay = kv["layout"];
  if (lay == "tensor") {
    std::vector<int> shape;
    for (double s : split_numbers(kv.at("shape"))) shape.push_back(static_cast<int>(s));
    auto g = tensor(dom, shape);
    return g.with_values(std::move(vals));
  }
  if (lay == "radial") {
    std::vector<double> e{0.0};
    const double wn = unit_ball_volume(n);
    for (auto& r : rows) e.push_back(std::pow(std::pow(e.back(), n) + r[n] / wn, 1.0 / n));
    e.back() = dom.radius;
    return radial(n, std::move(e)).with_values(std::move(vals));
  }
  if (lay == "line") {
    std::vector<double> e{rows.at(0)[0] - 0.5 * rows[0][1]};
    for (auto& r : rows) e.push_back(e.back() + r[1]);
    return GridFunction::line(std::move(e)).with_values(std::move(vals));
  }
  if (lay == "scattered") {
    std::vector<Point> nodes;
    std::vector<double> w;
    for (auto& r : rows) {
      nodes.push_back(to_point(std::vector<double>(r.begin(), r.begin() + n)));
      w.push_back(r[n]);
    }
    return scattered(dom, std::move(nodes), std::move(w), std::move(vals));
  }
  throw std::runtime_error(path + ": unknown layout '" + lay + "'");
}

}  // namespace mosob
