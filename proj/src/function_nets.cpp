#include "gfa/function_nets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gfa/distribution.hpp"
#include "gfa/spectral.hpp"

namespace gfa {

Box Box::interval(double a, double b) {
  if (!(a < b)) throw Error("degenerate interval");
  Box r;
  r.dimension = 1;
  r.lo = {a, 0};
  r.hi = {b, 0};
  return r;
}

Box Box::rect(double x0, double x1, double y0, double y1) {
  if (!(x0 < x1) || !(y0 < y1)) throw Error("degenerate box");
  Box r;
  r.dimension = 2;
  r.lo = {x0, y0};
  r.hi = {x1, y1};
  return r;
}

bool Box::contains(double x, double y) const {
  if (x < lo[0] || x > hi[0]) return false;
  return dimension == 1 || (y >= lo[1] && y <= hi[1]);
}

bool Box::contains(const Box& inner) const {
  const double tol = 1e-12;
  for (int a = 0; a < dimension; ++a)
    if (inner.lo[a] < lo[a] - tol || inner.hi[a] > hi[a] + tol) return false;
  return inner.dimension == dimension;
}

SpatialGrid::SpatialGrid(Box b, int points) : bounds(b), points_per_axis(points) {
  if (points < 64 || (points & (points - 1)) != 0)
    throw Error("points_per_axis must be a power of two >= 64");
}

SpatialGrid SpatialGrid::standard(const Box& b) { return SpatialGrid(b, b.dimension == 1 ? 4096 : 512); }

namespace {

void collect_anchors(const Node& n, std::vector<double>& out) {
  if (n.op == Op::Emb)
    for (double p : n.dist->singular_points()) out.push_back(p);
  for (const auto& a : n.args) collect_anchors(*a, out);
}

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void check_finite(double v) {
  if (!std::isfinite(v)) throw Error("net not evaluable");
}

}  // namespace

FunctionNet FunctionNet::symbolic(Expression expr, Box domain, std::string label) {
  if (domain.dimension == 1 && expr.uses_y()) throw Error("1D net uses y");
  FunctionNet n;
  n.domain_ = domain;
  n.label_ = label.empty() ? expr.text() : std::move(label);
  collect_anchors(expr.root(), n.anchors_);
  n.expr_ = std::move(expr);
  return n;
}

FunctionNet FunctionNet::symbolic(std::string_view text, Box domain) {
  return symbolic(Expression::parse(text), domain);
}

FunctionNet FunctionNet::sampled(Sampler sampler, SpatialGrid grid, std::string label) {
  if (grid.dimension() != 1) throw Error("sampled nets are one-dimensional");
  FunctionNet n;
  n.domain_ = grid.bounds;
  n.label_ = label.empty() ? "sampled" : std::move(label);
  n.sampler_ = std::move(sampler);
  n.sample_grid_ = grid;
  return n;
}

double FunctionNet::value(double x, double eps) const {
  if (dimension() != 1) return value(x, 0.0, eps);
  if (expr_) {
    const double v = expr_->eval(x, 0.0, eps);
    check_finite(v);
    return v;
  }
  return sampled_derivatives(x, eps, 0)[0];
}

double FunctionNet::value(double x, double y, double eps) const {
  if (!expr_) return value(x, eps);
  const double v = expr_->eval(x, y, eps);
  check_finite(v);
  return v;
}

std::vector<double> FunctionNet::taylor_coefficients(double x, double eps, int n) const {
  if (!expr_) {
    auto d = sampled_derivatives(x, eps, n);
    for (int k = 0; k <= n; ++k) d[k] /= factorial(k);
    return d;
  }
  if (n > kSymbolicMaxOrder) throw Error("derivative order exceeds oracle");
  const Jet<double> j = expr_->eval(Jet<double>::variable(x, n), Jet<double>(0.0), eps);
  std::vector<double> out(n + 1);
  for (int k = 0; k <= n; ++k) {
    out[k] = j.at(k);
    check_finite(out[k]);
  }
  return out;
}

std::vector<double> FunctionNet::derivatives(double x, double eps, int n) const {
  if (dimension() != 1) throw Error("1D derivative oracle on a 2D net");
  if (n > max_reliable_order()) throw Error("derivative order exceeds oracle");
  if (!expr_) return sampled_derivatives(x, eps, n);
  auto c = taylor_coefficients(x, eps, n);
  for (int k = 0; k <= n; ++k) c[k] *= factorial(k);
  return c;
}

std::vector<std::vector<double>> FunctionNet::derivatives(double x, double y, double eps, int n) const {
  if (dimension() != 2) throw Error("2D derivative oracle on a 1D net");
  if (!expr_) throw Error("derivative order exceeds oracle");
  using J = Jet<double>;
  using J2 = Jet<J>;
  const J2 X = J2::variable(J(x), n);
  const J2 Y = J2::constant(J::variable(y, n));
  const J2 f = expr_->eval(X, Y, eps);
  std::vector<std::vector<double>> d(n + 1);
  for (int a = 0; a <= n; ++a) {
    d[a].resize(n + 1 - a);
    const J row = f.at(a);
    for (int b = 0; a + b <= n; ++b) {
      d[a][b] = row.at(b) * factorial(a) * factorial(b);
      check_finite(d[a][b]);
    }
  }
  return d;
}

std::vector<double> FunctionNet::sampled_derivatives(double x, double eps, int n) const {
  if (n > kSampledMaxOrder) throw Error("derivative order exceeds oracle");
  const auto& g = *sample_grid_;
  const std::vector<double> s = sampler_(eps);
  const int N = g.points_per_axis;
  if (int(s.size()) != N) throw Error("sampler returned wrong length");
  const double L = g.bounds.width();
  const auto spec = spectral::fft_real(s);
  std::vector<double> out(n + 1, 0.0);
  const double t = x - g.bounds.lo[0];
  for (int k = 0; k < N; ++k) {
    const double w = spectral::bin_frequency(k, N, L);
    const std::complex<double> e = spec[k] * std::polar(1.0, w * t) / double(N);
    std::complex<double> ik(1.0, 0.0);
    for (int m = 0; m <= n; ++m) {
      if (!(N % 2 == 0 && k == N / 2 && m % 2 == 1)) out[m] += (e * ik).real();
      ik *= std::complex<double>(0.0, w);
    }
  }
  return out;
}

std::vector<double> FunctionNet::sample(const SpatialGrid& grid, double eps) const {
  const int N = grid.points_per_axis;
  if (!expr_) {
    if (grid.dimension() == 1 && grid.points_per_axis == sample_grid_->points_per_axis &&
        grid.bounds.lo == sample_grid_->bounds.lo && grid.bounds.hi == sample_grid_->bounds.hi)
      return sampler_(eps);
    throw Error("sampled net cannot be resampled");
  }
  const Box& b = grid.bounds;
  const double hx = b.width(0) / N;
  if (grid.dimension() == 1) {
    std::vector<double> v(N);
    for (int i = 0; i < N; ++i) v[i] = value(b.lo[0] + i * hx, eps);
    return v;
  }
  const double hy = b.width(1) / N;
  std::vector<double> v(std::size_t(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) v[std::size_t(i) * N + j] = value(b.lo[0] + i * hx, b.lo[1] + j * hy, eps);
  return v;
}

std::vector<double> sup_sample_points(const Box& region, const std::vector<double>& anchors,
                                      int points_per_axis) {
  const double a = region.lo[0], b = region.hi[0];
  std::vector<double> pts;
  pts.reserve(points_per_axis + 1 + 700 * (anchors.size() + 2));
  for (int i = 0; i <= points_per_axis; ++i) pts.push_back(a + (b - a) * i / points_per_axis);
  std::vector<double> centers = anchors;
  centers.push_back(region.center());
  if (a <= 0 && 0 <= b) centers.push_back(0.0);
  const double L = 0.5 * (b - a);
  for (double c : centers) {
    if (c < a || c > b) continue;
    pts.push_back(c);
    // c +- L 2^{-j/8}: geometric in the distance, so every eps on a dyadic
    // grid sees the same relative resolution near c.
    for (int j = 0; j <= 320; ++j) {
      const double d = L * std::exp2(-j / 8.0);
      if (c + d <= b) pts.push_back(c + d);
      if (c - d >= a) pts.push_back(c - d);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::vector<double> derivative_sups(const FunctionNet& net, int order, const Box& region, double eps,
                                    int points_per_axis) {
  if (order > net.max_reliable_order()) throw Error("derivative order exceeds oracle");
  if (!net.domain().contains(region)) throw Error("region outside the net domain");
  std::vector<double> sup(order + 1, 0.0);
  auto absorb = [&](int k, double v) {
    check_finite(v);
    sup[k] = std::max(sup[k], std::abs(v));
  };

  if (!net.is_symbolic()) {
    // Spectral derivatives at the nodes of the native grid inside the region.
    const SpatialGrid& g = *net.sample_grid();
    const auto samples = net.sample(g, eps);
    const int N = g.points_per_axis;
    const double L = g.bounds.width(), h = L / N;
    for (int k = 0; k <= order; ++k) {
      const auto d = k == 0 ? samples : spectral::derivative(samples, L, k);
      for (int i = 0; i < N; ++i)
        if (region.contains(g.bounds.lo[0] + i * h)) absorb(k, d[i]);
    }
    return sup;
  }

  if (net.dimension() == 1) {
    const int ppa = points_per_axis > 0 ? points_per_axis : 4096;
    for (double x : sup_sample_points(region, net.anchors(), ppa)) {
      std::vector<double> d;
      try {
        d = net.derivatives(x, eps, order);
      } catch (const Error& e) {
        throw Error(std::string("derivative oracle failure: ") + e.what());
      }
      for (int k = 0; k <= order; ++k) absorb(k, d[k]);
    }
    return sup;
  }

  const int ppa = points_per_axis > 0 ? points_per_axis : 512;
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i <= ppa; ++i)
    for (int j = 0; j <= ppa; ++j)
      pts.emplace_back(region.lo[0] + region.width(0) * i / ppa, region.lo[1] + region.width(1) * j / ppa);
  const double cx = region.center(0), cy = region.center(1);
  for (int j = 0; j <= 320; ++j) {
    const double dx = 0.5 * region.width(0) * std::exp2(-j / 8.0);
    const double dy = 0.5 * region.width(1) * std::exp2(-j / 8.0);
    for (int sx = -1; sx <= 1; ++sx)
      for (int sy = -1; sy <= 1; ++sy) pts.emplace_back(cx + sx * dx, cy + sy * dy);
  }
  for (auto [x, y] : pts) {
    const auto d = net.derivatives(x, y, eps, order);
    for (int a = 0; a <= order; ++a)
      for (int b = 0; a + b <= order; ++b) absorb(a + b, d[a][b]);
  }
  return sup;
}

double seminorm(const FunctionNet& net, int order, const Box& region, double eps, int points_per_axis) {
  const auto s = derivative_sups(net, order, region, eps, points_per_axis);
  return *std::max_element(s.begin(), s.end());
}

FunctionNetClassification classify_function_net(const FunctionNet& net, const EpsilonGrid& grid,
                                                const Box& region, int max_order, int points_per_axis,
                                                const Thresholds& th) {
  const auto tail = grid.tail();
  std::vector<std::vector<double>> mu(max_order + 1, std::vector<double>(tail.size()));
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const auto s = derivative_sups(net, max_order, region, tail[i], points_per_axis);
    double running = 0;
    for (int k = 0; k <= max_order; ++k) {
      running = std::max(running, s[k]);
      mu[k][i] = running;
    }
  }
  FunctionNetClassification out;
  bool all_neg = true, all_mod = true;
  for (int k = 0; k <= max_order; ++k) {
    out.per_order.push_back(fit_valuation(tail, mu[k], th));
    const auto c = out.per_order.back().classification;
    all_neg = all_neg && c == Classification::NegligibleAtThreshold;
    all_mod = all_mod && c != Classification::NotModerateAtThreshold;
  }
  out.overall = all_neg   ? Classification::NegligibleAtThreshold
                : all_mod ? Classification::Moderate
                          : Classification::NotModerateAtThreshold;
  return out;
}

GeneralizedPoint GeneralizedPoint::classical(double x) {
  GeneralizedPoint p;
  p.coordinates = {ScalarNet::constant(x)};
  p.support = Box::interval(x - 1e-9, x + 1e-9);
  return p;
}

GeneralizedPoint GeneralizedPoint::net(ScalarNet x, Box support, double eps0) {
  GeneralizedPoint p;
  p.coordinates = {std::move(x)};
  p.support = support;
  p.eps0 = eps0;
  return p;
}

double GeneralizedPoint::coordinate(int axis, double eps) const {
  const double v = coordinates.at(axis)(eps).real();
  if (eps < eps0) {
    const bool inside = axis == 0 ? (v >= support.lo[0] && v <= support.hi[0])
                                  : (v >= support.lo[1] && v <= support.hi[1]);
    if (!inside) throw Error("generalized point leaves its support");
  }
  return v;
}

ScalarNet evaluate_at_point(const FunctionNet& net, const GeneralizedPoint& point) {
  if (int(point.coordinates.size()) != net.dimension()) throw Error("point dimension mismatch");
  ScalarNet out;
  out.label = net.label() + " at point";
  out.evaluator = [net, point](double eps) {
    const double x = point.coordinate(0, eps);
    const double y = net.dimension() == 2 ? point.coordinate(1, eps) : 0.0;
    if (!net.domain().contains(x, y)) throw Error("point exits domain");
    return std::complex<double>(net.dimension() == 2 ? net.value(x, y, eps) : net.value(x, eps));
  };
  return out;
}

}  // namespace gfa
