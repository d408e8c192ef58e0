#include "gfa/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gfa/jet.hpp"
#include "gfa/kernels.hpp"

namespace gfa {

namespace {

namespace mp = boost::multiprecision;
using R = mp::number<mp::cpp_bin_float<70>, mp::et_off>;

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// ---- moments -------------------------------------------------------------

// Trapezoid on |x| <= 160, step 1/4, with Gaussian damping exp(-x^2/(2*81)).
// phi is band-limited, so the rule is exact up to the damping bias, which is
// of size e^{-40} in Fourier space.
constexpr double kMomentStep = 0.25;
constexpr double kMomentRange = 160.0;
constexpr double kDampingWidth = 9.0;

std::vector<double> damped_moments(int order) {
  std::vector<double> m(order + 1, 0.0);
  const int n = int(kMomentRange / kMomentStep);
  for (int i = -n; i <= n; ++i) {
    const double x = i * kMomentStep;
    const double w = kMomentStep * kernels::phi(x) *
                     std::exp(-x * x / (2 * kDampingWidth * kDampingWidth));
    double p = 1;
    for (int k = 0; k <= order; ++k) {
      m[k] += w * p;
      p *= x;
    }
  }
  return m;
}

// ---- extended precision difference phi_eps - psi_eps -----------------------

// chi and its first n derivatives at t (1 < |t| < 2 for anything nonconstant).
std::vector<R> chi_jet(const R& t, int n) {
  std::vector<R> d(n + 1, R(0));
  d[0] = kernels::chi(t);
  const R a = abs(t);
  if (a <= 1 || a >= 2) return d;
  const auto v = Jet<R>::variable(a, n);
  const auto one = Jet<R>::constant(R(1));
  const auto s = one / (Jet<R>::constant(R(2)) - v) - one / (v - one);
  Jet<R> c;
  if (s.c[0] > 0) {
    const auto e = exp(s * R(-1));
    c = e / (one + e);
  } else {
    c = one / (one + exp(s));
  }
  R fact = 1;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) fact *= k;
    d[k] = c.at(k) * fact * ((t < 0 && k % 2) ? R(-1) : R(1));
  }
  return d;
}

// Analytic signal of phi^{(k)}, k <= 2. Since chi == 1 near 0, k + 1
// integrations by parts give
//   int_0^2 chi xi^k e^{iu xi} = k! (i/u)^{k+1} + (i/u)^{k+1} I_k(u),
//   I_k(u) = int_1^2 g_k e^{iu xi},  g_k = d^{k+1}[(chi - 1) xi^k],
// where the first term is imaginary after multiplying by i^k. Hence
// phi^{(k)} = Re(i^k G_k)/pi with G_k = (i/u)^{k+1} I_k, and |G_k|/pi is an
// envelope free of the fast e^{iu} oscillation. g_k is flat at both ends of
// [1,2], so the trapezoid rule only aliases, at distance >= kMargin.
constexpr double kMargin = 8000.0;

class PreciseKernel {
public:
  explicit PreciseKernel(double umax) {
    m_ = long(std::ceil((umax + kMargin) / (2 * std::numbers::pi)));
    h_ = R(1) / m_;
    for (auto& w : g_) w.resize(m_);
    for (long j = 1; j < m_; ++j) {
      const R xi = 1 + h_ * j;
      const auto c = chi_jet(xi, 3);
      g_[0][j] = h_ * c[1];
      g_[1][j] = h_ * (c[2] * xi + 2 * c[1]);
      g_[2][j] = h_ * (c[3] * xi * xi + 6 * c[2] * xi + 6 * c[1]);
    }
  }

  // i^k G_k / pi, k = 0..2
  std::array<std::complex<R>, 3> eval(const R& u) const {
    const R c = cos(u * h_), s = sin(u * h_);
    R zr = cos(u), zi = sin(u);
    R a[3] = {0, 0, 0}, b[3] = {0, 0, 0};
    for (long j = 1; j < m_; ++j) {
      const R nr = zr * c - zi * s;
      zi = zr * s + zi * c;
      zr = nr;
      for (int k = 0; k < 3; ++k) {
        a[k] += g_[k][j] * zr;
        b[k] += g_[k][j] * zi;
      }
    }
    const R pi = boost::math::constants::pi<R>();
    std::array<std::complex<R>, 3> out;
    // multiply I_k by i^k (i/u)^{k+1} = i^{2k+1} / u^{k+1}
    R up = u;
    for (int k = 0; k < 3; ++k) {
      const R sgn = (k % 2 == 0) ? R(1) : R(-1);  // i^{2k+1} = sgn * i
      out[k] = std::complex<R>(-sgn * b[k] / (up * pi), sgn * a[k] / (up * pi));
      up *= u;
    }
    return out;
  }

private:
  long m_;
  R h_;
  std::array<std::vector<R>, 3> g_;
};

// Complex envelope Z_alpha with Re Z_alpha = (phi_eps - psi_eps)^{(alpha)} at
// x = t sqrt(eps); returns |x|^k |Z_alpha| for all k, alpha <= 2.
std::array<std::array<double, 3>, 3> difference_envelopes(const PreciseKernel& K, double eps, double t,
                                                          double* real_part = nullptr) {
  const R e = eps, s = sqrt(e), T = t;
  const R u = T / s;
  const auto S = K.eval(u);
  const auto c = chi_jet(T, 2);
  const R g[3] = {1 - c[0], -c[1], -c[2]};
  std::array<std::array<double, 3>, 3> out{};
  for (int alpha = 0; alpha <= 2; ++alpha) {
    std::complex<R> z(0, 0);
    for (int b = 0; b <= alpha; ++b) {
      const int j = alpha - b;
      const R scale = R(binom(alpha, b)) * g[b] * pow(s, -b) * pow(e, -1 - j);
      z += std::complex<R>(scale * S[j].real(), scale * S[j].imag());
    }
    if (real_part) real_part[alpha] = static_cast<double>(z.real());
    const R mag = sqrt(z.real() * z.real() + z.imag() * z.imag());
    R xk = 1;
    for (int k = 0; k <= 2; ++k) {
      out[k][alpha] = static_cast<double>(mag * xk);
      xk *= T * s;
    }
  }
  return out;
}

// ---- quadrature ------------------------------------------------------------

struct GL24 {
  double x[24], w[24];
  GL24() {
    for (int i = 0; i < 24; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / 24.5), dp = 1;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = z;
        for (int k = 2; k <= 24; ++k) {
          const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = 24 * (z * p1 - p0) / (z * z - 1);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2 / ((1 - z * z) * dp * dp);
    }
  }
};

const GL24& gl() {
  static const GL24 g;
  return g;
}

// Returns the integral; `magnitude` receives the integral of |f|, which sets
// the round-off level of the result.
template <class F>
double integrate_panels(const std::vector<double>& edges, F&& f, double* magnitude = nullptr) {
  const auto& g = gl();
  double total = 0, mag = 0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double c = 0.5 * (edges[p] + edges[p + 1]), r = 0.5 * (edges[p + 1] - edges[p]);
    double s = 0, m = 0;
    for (int i = 0; i < 24; ++i) {
      const double v = g.w[i] * f(c + r * g.x[i]);
      s += v;
      m += std::abs(v);
    }
    total += s * r;
    mag += m * r;
  }
  if (!std::isfinite(total)) throw Error("quadrature did not converge");
  if (magnitude) *magnitude = mag;
  return total;
}

std::vector<double> uniform_edges(double a, double b, int n) {
  std::vector<double> e(n + 1);
  for (int i = 0; i <= n; ++i) e[i] = a + (b - a) * i / n;
  return e;
}

// Panels of width 8 eps within 1024 eps of each anchor, then growing by 1.25.
std::vector<double> graded_edges(const Box& support, const std::vector<double>& anchors, double eps) {
  const double lo = support.lo[0], hi = support.hi[0];
  std::vector<double> e = uniform_edges(lo, hi, 256);
  for (double a : anchors) {
    if (a < lo - 1 || a > hi + 1) continue;
    for (int sgn : {-1, 1}) {
      double d = 0;
      for (int j = 1; j <= 128; ++j) {
        d = 8 * eps * j;
        e.push_back(a + sgn * d);
      }
      while (d < hi - lo) {
        d *= 1.25;
        e.push_back(a + sgn * d);
      }
    }
    e.push_back(a);
  }
  std::vector<double> kept;
  for (double x : e)
    if (x >= lo && x <= hi) kept.push_back(x);
  std::sort(kept.begin(), kept.end());
  std::vector<double> out;
  for (double x : kept)
    if (out.empty() || x - out.back() > 1e-14 * std::max(1.0, std::abs(x))) out.push_back(x);
  return out;
}

}  // namespace

// ---- Mollifier -------------------------------------------------------------

double Mollifier::operator()(double x) const { return kernels::phi(x); }

double Mollifier::scaled(double x, double eps, int alpha) const {
  return kernels::phi_derivatives(x / eps, alpha)[alpha] * std::pow(eps, -1.0 - alpha);
}

Mollifier build_mollifier(int moment_order, double tolerance) {
  if (moment_order < 1) throw Error("moment order must be >= 1");
  Mollifier m;
  m.moment_order_checked = moment_order;
  m.moments = damped_moments(moment_order);
  m.mass = m.moments[0];
  m.peak = kernels::phi(0.0);
  bool ok = std::abs(m.mass - 1) <= tolerance && m.peak > 0;
  for (int k = 1; k <= moment_order; ++k) ok = ok && std::abs(m.moments[k]) <= tolerance;
  if (!ok) {
    std::ostringstream os;
    os << "mollifier certificate failed: mass " << m.mass;
    for (int k = 1; k <= moment_order; ++k) os << ", |m" << k << "| = " << std::abs(m.moments[k]);
    throw Error(os.str());
  }
  return m;
}

// ---- embedding -------------------------------------------------------------

FunctionNet embed(const DistributionSpec& dist, const Mollifier&, Box domain) {
  auto node = std::make_shared<Node>();
  node->op = Op::Emb;
  node->dist = std::make_shared<DistributionSpec>(dist);
  return FunctionNet::symbolic(Expression::from_node(node, "emb(" + dist.text + ")"), domain);
}

FunctionNet embed(std::string_view dist_text, Box domain) {
  return embed(DistributionSpec::parse(dist_text), build_mollifier(), domain);
}

FunctionNet embed_truncated(const DistributionSpec& dist, Box domain) {
  auto d = dist;
  d.truncated = true;
  auto node = std::make_shared<Node>();
  node->op = Op::Emb;
  node->dist = std::make_shared<DistributionSpec>(d);
  return FunctionNet::symbolic(Expression::from_node(node, "embt(" + dist.text + ")"), domain);
}

// ---- truncated mollifier ---------------------------------------------------

double TruncatedMollifierNet::support_radius(double eps) { return 2 * std::sqrt(eps); }

double TruncatedMollifierNet::value(double x, double eps, int alpha) const {
  if (std::abs(x) >= support_radius(eps)) return 0.0;
  return kernels::truncated_phi_derivatives(x / eps, alpha, eps)[alpha] * std::pow(eps, -1.0 - alpha);
}

double TruncatedMollifierNet::difference(double x, double eps, int alpha) const {
  return base.scaled(x, eps, alpha) - value(x, eps, alpha);
}

double truncation_difference_precise(double x, double eps, int alpha) {
  if (alpha < 0 || alpha > 2) throw Error("derivative order must be 0..2");
  const double t = std::abs(x) / std::sqrt(eps);
  if (t <= 1) return 0.0;
  const PreciseKernel K(t / std::sqrt(eps));
  double re[3];
  difference_envelopes(K, eps, t, re);
  return (x < 0 && alpha % 2) ? -re[alpha] : re[alpha];
}

TruncatedMollifierNet truncate_mollifier(const Mollifier& moll, const EpsilonGrid& grid, double bound) {
  TruncatedMollifierNet net{moll, {}};
  const auto tail = grid.tail();
  std::vector<std::vector<double>> sups(9, std::vector<double>(tail.size(), 0.0));
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double eps = tail[i];
    // The difference vanishes for |x| < sqrt(eps) and equals x^k phi_eps^{(alpha)}
    // past 2 sqrt(eps), where it only decays; t = |x|/sqrt(eps) in [1, 2.05]
    // covers the supremum. The difference is even/odd, so x >= 0 suffices.
    constexpr double t0 = 1.0, t1 = 2.05;
    const PreciseKernel K(t1 / std::sqrt(eps));
    constexpr int coarse = 22;
    std::vector<std::array<std::array<double, 3>, 3>> vals(coarse + 1);
    for (int c = 0; c <= coarse; ++c) vals[c] = difference_envelopes(K, eps, t0 + (t1 - t0) * c / coarse);
    for (int k = 0; k <= 2; ++k)
      for (int alpha = 0; alpha <= 2; ++alpha) {
        int best = 0;
        for (int c = 1; c <= coarse; ++c)
          if (vals[c][k][alpha] > vals[best][k][alpha]) best = c;
        double sup = vals[best][k][alpha];
        // golden-section refinement on the bracketing coarse cells
        const double dt = (t1 - t0) / coarse;
        double a = t0 + dt * std::max(0, best - 1), b = t0 + dt * std::min(coarse, best + 1);
        const double gr = (std::sqrt(5.0) - 1) / 2;
        auto f = [&](double t) { return difference_envelopes(K, eps, t)[k][alpha]; };
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 10; ++it) {
          if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
          } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
          }
        }
        sups[k * 3 + alpha][i] = std::max({sup, f1, f2});
      }
  }
  std::ostringstream failed;
  for (int k = 0; k <= 2; ++k)
    for (int alpha = 0; alpha <= 2; ++alpha) {
      NegligibilityCertificate c;
      c.k = k;
      c.alpha = alpha;
      c.sups = sups[k * 3 + alpha];
      c.estimate = fit_valuation(tail, c.sups);
      if (c.estimate.exponent < bound)
        failed << " (k=" << k << ", alpha=" << alpha << ": " << c.estimate.exponent << ")";
      net.certificate.push_back(std::move(c));
    }
  if (!failed.str().empty()) throw Error("truncated mollifier certificate failed:" + failed.str());
  return net;
}

// ---- association -----------------------------------------------------------

TestFunction TestFunction::parse(std::string_view text) {
  const Expression e = Expression::parse(text);
  // Support from the samples: the outermost nonzero values on [-8, 8].
  constexpr int n = 4096;
  int first = -1, last = -1;
  for (int i = 0; i <= n; ++i) {
    const double x = -8.0 + 16.0 * i / n;
    if (e(x, 0.0) != 0.0) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) return TestFunction{e, Box::interval(-1, 1)};
  const double step = 16.0 / n;
  return TestFunction{e, Box::interval(std::max(-8.0, -8.0 + step * (first - 1)),
                                       std::min(8.0, -8.0 + step * (last + 1)))};
}

TestFunction TestFunction::parse(std::string_view text, Box support) {
  return TestFunction{Expression::parse(text), support};
}

std::vector<TestFunction> default_test_functions() {
  return {TestFunction::parse("exp(-x^2)"), TestFunction::parse("bump(x)"),
          TestFunction::parse("gbump(x)")};
}

double pairing(const DistributionSpec& dist, const TestFunction& theta) {
  const Box& s = theta.support;
  auto th = [&](double x) { return theta.expr(x, 0.0); };
  double total = 0;
  for (const auto& t : dist.terms) {
    double v = 0;
    const double a = t.location;
    switch (t.kind) {
      case DistKind::Delta:
        v = s.contains(a) ? th(a) : 0.0;
        break;
      case DistKind::DeltaDerivative: {
        if (!s.contains(a)) break;
        const auto j = theta.expr.eval(Jet<double>::variable(a, t.order), Jet<double>(0.0), 0.0);
        double fact = 1;
        for (int i = 2; i <= t.order; ++i) fact *= i;
        v = (t.order % 2 ? -1.0 : 1.0) * fact * j.at(t.order);
        break;
      }
      case DistKind::Heaviside: {
        const double lo = std::max(a, s.lo[0]);
        if (lo < s.hi[0]) v = integrate_panels(uniform_edges(lo, s.hi[0], 512), th);
        break;
      }
      case DistKind::AbsX: {
        std::vector<double> e = uniform_edges(s.lo[0], s.hi[0], 512);
        if (s.contains(a)) e.push_back(a);
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        v = integrate_panels(e, [&](double x) { return std::abs(x - a) * th(x); });
        break;
      }
      case DistKind::Smooth:
        v = integrate_panels(uniform_edges(s.lo[0], s.hi[0], 512),
                             [&](double x) { return t.smooth->eval(x - a, 0.0, 0.0) * th(x); });
        break;
    }
    total += t.coefficient * v;
  }
  return total;
}

namespace {

double net_pairing(const FunctionNet& net, const TestFunction& theta, double eps,
                   const std::vector<double>& extra_anchors, double* magnitude) {
  std::vector<double> anchors = net.anchors();
  anchors.insert(anchors.end(), extra_anchors.begin(), extra_anchors.end());
  const auto edges = graded_edges(theta.support, anchors, eps);
  return integrate_panels(
      edges, [&](double x) { return net.value(x, eps) * theta.expr(x, 0.0); }, magnitude);
}

}  // namespace

double pairing(const FunctionNet& net, const TestFunction& theta, double eps,
               const std::vector<double>& extra_anchors) {
  return net_pairing(net, theta, eps, extra_anchors, nullptr);
}

AssociationResult association_test(const FunctionNet& net, const DistributionSpec& dist,
                                   const std::vector<TestFunction>& test_functions,
                                   const EpsilonGrid& grid) {
  if (test_functions.empty()) throw Error("no test functions");
  AssociationResult res;
  res.associated = true;
  res.slope = kInfinity;
  const auto anchors = dist.singular_points();
  const auto& eps = grid.values();
  for (const auto& theta : test_functions) {
    AssociationDetail d;
    d.test_function = theta.expr.text();
    const double exact = pairing(dist, theta);
    for (double e : eps) {
      double mag = 0;
      const double err = std::abs(exact - net_pairing(net, theta, e, anchors, &mag));
      // below this the difference is quadrature round-off
      const double floor = 1e-12 * std::max({1.0, std::abs(exact), mag});
      d.errors.push_back(err < floor ? 0.0 : err);
    }
    d.envelope.assign(eps.size(), 0.0);
    double run = 0;
    for (std::size_t i = eps.size(); i-- > 0;) {
      run = std::max(run, d.errors[i]);
      d.envelope[i] = run;
    }
    const auto n = grid.tail_window();
    const std::span<const double> tail_env(d.envelope.data() + eps.size() - n, n);
    d.slope = fit_valuation(grid.tail(), tail_env).exponent;
    const double last = d.envelope.back(), first = d.envelope.front();
    const bool decays = last == 0.0 || last < first;
    res.associated = res.associated && decays && last < 1e-3;
    res.slope = std::min(res.slope, d.slope);
    res.details.push_back(std::move(d));
  }
  res.strong = res.slope >= 0.5;
  return res;
}

}  // namespace gfa
