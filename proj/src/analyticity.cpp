#include "gfa/analyticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gfa {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

double stirling_to_power(double eta_factorial) {
  if (!(eta_factorial > 0)) throw Error("eta must be positive");
  return eta_factorial;
}

double stirling_to_factorial(double eta_power) {
  if (!(eta_power > 0)) throw Error("eta must be positive");
  return std::numbers::e * eta_power;
}

double log_bound_term(int n, BoundForm form) {
  if (form == BoundForm::Factorial) return log_factorial(n);
  return n == 0 ? 0.0 : n * std::log(double(n));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Analytic: return "analytic";
    case Verdict::NotAnalytic: return "not-analytic";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

double AnalyticityReport::envelope(int n) const {
  double best = kNegInf;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (sups[n][i] <= 0) continue;
    best = std::max(best, std::log(sups[n][i]) + a * std::log(eps[i]) - log_bound_term(n, form));
  }
  return best;
}

bool AnalyticityReport::bound_holds(double eta_, BoundForm f, double slack) const {
  for (std::size_t n = 0; n < sups.size(); ++n)
    for (std::size_t i = 0; i < eps.size(); ++i) {
      if (sups[n][i] <= 0) continue;
      const double lhs = std::log(sups[n][i]) + a * std::log(eps[i]);
      const double rhs = (n + 1.0) * (std::log(eta_) + slack) + log_bound_term(int(n), f) + slack;
      if (lhs > rhs) return false;
    }
  return true;
}

AnalyticityReport test_real_analytic(const FunctionNet& net, double point, double radius,
                                     const EpsilonGrid& grid, const AnalyticityOptions& opt) {
  if (!(radius > 0)) throw Error("radius must be positive");
  const Box ball = Box::ball(point, radius);
  if (!net.domain().contains(ball)) throw Error("ball outside the net domain");
  const int N = std::min(opt.max_order, net.max_reliable_order());

  AnalyticityReport r;
  r.point = point;
  r.radius = radius;
  r.form = opt.form;
  const auto tail = grid.tail();
  r.eps.assign(tail.begin(), tail.end());
  r.sups.assign(N + 1, std::vector<double>(r.eps.size(), 0.0));
  for (std::size_t i = 0; i < r.eps.size(); ++i) {
    const auto s = derivative_sups(net, N, ball, r.eps[i], opt.points_per_axis);
    for (int n = 0; n <= N; ++n) r.sups[n][i] = s[n];
  }

  double dmin = kInfinity;
  std::vector<double> ns, ds;
  for (int n = 0; n <= N; ++n) {
    r.valuations.push_back(fit_valuation(r.eps, r.sups[n]));
    const double d = r.valuations.back().exponent;
    if (std::isfinite(d)) {
      dmin = std::min(dmin, d);
      ns.push_back(n);
      ds.push_back(d);
    }
  }
  r.a = std::isfinite(dmin) ? std::max(0.0, -dmin) : 0.0;
  r.d_slope = ds.size() >= 2 ? fit_line(ns, ds).slope : 0.0;

  // eta: least constant bounding the lower half of the orders; the
  // remaining orders then test that the growth really is geometric.
  double log_eta = kNegInf;
  for (int n = 0; n <= N / 2; ++n) {
    const double y = r.envelope(n);
    if (y > kNegInf) log_eta = std::max(log_eta, y / (n + 1));
  }
  if (log_eta == kNegInf) log_eta = 0.0;  // vanishing net
  r.eta = std::exp(log_eta);

  if (ds.size() >= 2 && r.d_slope <= opt.not_analytic_slope)
    r.verdict = Verdict::NotAnalytic;
  else if (r.bound_holds(r.eta, r.form, opt.slack))
    r.verdict = Verdict::Analytic;
  else
    r.verdict = Verdict::Inconclusive;
  return r;
}

SingularSupport singular_support(const FunctionNet& net, const std::vector<double>& probes, double radius,
                                 const EpsilonGrid& grid, const AnalyticityOptions& opt) {
  SingularSupport out;
  for (double p : probes) {
    auto rep = test_real_analytic(net, p, radius, grid, opt);
    if (rep.verdict == Verdict::NotAnalytic) out.singular.push_back(p);
    if (rep.verdict == Verdict::Inconclusive) out.inconclusive.push_back(p);
    out.reports.push_back(std::move(rep));
  }
  return out;
}

// ---- Taylor extension ------------------------------------------------------------

int default_sigma(double eps) {
  const double l = std::log(1 / eps);
  return int(std::ceil(l * l));
}

int TaylorExtension::sigma_at(double eps) const {
  const int s = sigma(eps);
  if (s > budget) throw Error("sigma exceeds the derivative budget");
  return s;
}

std::complex<double> TaylorExtension::operator()(double x, double y, double eps) const {
  const double f0 = net.value(x, eps);
  if (y == 0.0) return f0;
  const int s = sigma_at(eps);
  const auto c = net.taylor_coefficients(x, eps, s);
  // Horner in iy for j >= 1
  std::complex<double> acc = 0.0;
  const std::complex<double> iy(0.0, y);
  for (int j = s; j >= 1; --j) acc = (acc + c[j]) * iy;
  return f0 + acc;
}

std::complex<double> TaylorExtension::dbar(double x, double y, double eps) const {
  const int s = sigma_at(eps);
  const auto c = net.taylor_coefficients(x, eps, s + 1);
  // f^{(s+1)}/s! = (s+1) c_{s+1}
  return 0.5 * (s + 1.0) * c[s + 1] * std::pow(std::complex<double>(0.0, y), s);
}

TaylorExtension taylor_extension(const FunctionNet& net, const Box& interval, double eta,
                                 const EpsilonGrid& grid, const AnalyticityOptions& opt) {
  if (!(eta > 0)) throw Error("eta must be positive");
  if (!net.is_symbolic() || net.dimension() != 1) throw Error("extension needs a symbolic 1D net");
  // Cover the interval by balls of radius r centred r apart.
  const double r = std::min(0.5, interval.width() / 2);
  const int pieces = int(std::ceil(interval.width() / r));
  for (int i = 0; i <= pieces; ++i) {
    const double c = std::min(interval.hi[0] - r, std::max(interval.lo[0] + r, interval.lo[0] + i * r));
    const auto rep = test_real_analytic(net, c, r, grid, opt);
    if (rep.verdict != Verdict::Analytic || rep.eta > eta * std::exp(opt.slack))
      throw Error("analyticity precondition unverified at " + std::to_string(c));
  }
  TaylorExtension ext{net, interval, eta, default_sigma, FunctionNet::kSymbolicMaxOrder - 10};
  return ext;
}

ResidualCertificate dbar_residual(const TaylorExtension& ext, const EpsilonGrid& grid, double rho,
                                  double bound, int points_per_axis) {
  if (!(rho > 0 && rho < 1)) throw Error("rho must lie in (0,1)");
  ResidualCertificate cert;
  for (double e : grid.values()) {
    if (ext.sigma(e) > ext.budget) {
      cert.warning = "grid shrunk: sigma exceeds the derivative budget below eps = " + std::to_string(e);
      break;
    }
    cert.eps.push_back(e);
  }
  if (cert.eps.size() < 3) throw Error("derivative budget leaves fewer than three grid points");

  const double ymax = rho / ext.eta;
  for (double e : cert.eps) {
    const int s = ext.sigma(e);
    double cmax = 0;
    for (double x : sup_sample_points(ext.interval, ext.net.anchors(), points_per_axis))
      cmax = std::max(cmax, std::abs(ext.net.taylor_coefficients(x, e, s + 1)[s + 1]));
    // log of (1/2)(s+1)|c_{s+1}| ymax^s, kept in logs: it underflows quickly
    cert.log_residual.push_back(cmax > 0 ? std::log(0.5 * (s + 1) * cmax) + s * std::log(ymax) : kNegInf);
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < cert.eps.size(); ++i)
    if (cert.log_residual[i] > kNegInf) {
      lx.push_back(std::log(cert.eps[i]));
      ly.push_back(cert.log_residual[i]);
    }
  if (lx.size() < 2 || cert.log_residual.back() == kNegInf) {
    cert.estimate.exponent = kInfinity;
  } else {
    const auto fit = fit_line(lx, ly);
    cert.estimate.exponent = fit.slope;
    cert.estimate.residual = fit.max_residual;
    double ms = kInfinity;
    for (std::size_t i = 1; i < lx.size(); ++i) ms = std::min(ms, (ly[i] - ly[i - 1]) / (lx[i] - lx[i - 1]));
    cert.estimate.min_local_slope = ms;
  }
  cert.estimate.classification = classify(cert.estimate);
  cert.passed = cert.estimate.exponent >= bound;
  return cert;
}

// ---- sub-linearity -----------------------------------------------------------------

SublinearityResult sublinearity_test(const std::vector<double>& p, int k_max) {
  if (p.size() < 5) throw Error("sequence too short");
  const int N = int(p.size()) - 1, n0 = N / 2;
  for (int k = 0; k <= k_max; ++k) {
    bool ok = p[N] + double(k) * N > p[0] + 10;
    for (int n = n0; ok && n < N; ++n) ok = p[n + 1] + double(k) * (n + 1) > p[n] + double(k) * n;
    if (ok) return {true, k};
  }
  return {false, -1};
}

std::vector<ValuationEstimate> derivative_valuations_at(const FunctionNet& net, const GeneralizedPoint& point,
                                                        int max_order, const EpsilonGrid& grid,
                                                        double radius_exponent) {
  const auto tail = grid.tail();
  std::vector<std::vector<double>> m(max_order + 1, std::vector<double>(tail.size(), 0.0));
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double e = tail[i], x = point.coordinate(0, e), h = std::pow(e, radius_exponent);
    // the ball, sampled at 65 points
    for (int j = -32; j <= 32; ++j) {
      const auto d = net.derivatives(x + h * j / 32.0, e, max_order);
      for (int n = 0; n <= max_order; ++n) m[n][i] = std::max(m[n][i], std::abs(d[n]));
    }
  }
  std::vector<ValuationEstimate> out;
  for (int n = 0; n <= max_order; ++n) out.push_back(fit_valuation(tail, m[n]));
  return out;
}

namespace {

// Valuation of exp(logs[i]); a constant factor does not change it, so the
// values are shifted by their maximum first to stay inside double range.
double log_space_valuation(std::span<const double> eps, const std::vector<double>& logs) {
  double top = kNegInf;
  for (double v : logs) top = std::max(top, v);
  std::vector<double> m(logs.size(), 0.0);
  if (top > kNegInf)
    for (std::size_t i = 0; i < logs.size(); ++i) m[i] = std::exp(logs[i] - top);
  return fit_valuation(eps, m).exponent;
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

TaylorConvergence sharp_taylor_convergence(const FunctionNet& net, const GeneralizedPoint& center,
                                           double offset_exponent, int max_order, const EpsilonGrid& grid,
                                           double bound) {
  const int extra = 8;
  const int top = std::min(max_order + extra, net.max_reliable_order());
  const auto tail = grid.tail();
  // logs[n][i] = log |f^{(n)}(x0) / n!| + n * offset * log eps
  std::vector<std::vector<double>> logs(top + 1, std::vector<double>(tail.size(), kNegInf));
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double e = tail[i];
    const auto c = net.taylor_coefficients(center.coordinate(0, e), e, top);
    for (int n = 0; n <= top; ++n)
      if (c[n] != 0.0) logs[n][i] = std::log(std::abs(c[n])) + n * offset_exponent * std::log(e);
  }
  TaylorConvergence out;
  for (int n = 0; n <= max_order; ++n) out.term_valuations.push_back(log_space_valuation(tail, logs[n]));
  for (int n = 0; n <= max_order; ++n) {
    std::vector<double> rem(tail.size(), kNegInf);
    for (int m = n + 1; m <= top; ++m)
      for (std::size_t i = 0; i < tail.size(); ++i) rem[i] = log_add(rem[i], logs[m][i]);
    out.remainder_valuations.push_back(log_space_valuation(tail, rem));
  }
  double prev = -kInfinity;
  bool increasing = true;
  for (double w : out.term_valuations) {
    if (!std::isfinite(w)) continue;
    increasing = increasing && w > prev;
    prev = w;
  }
  // the N-th term and the rest of the series must both be below eps^bound
  const double tail_val = std::min(out.term_valuations.back(), out.remainder_valuations.back());
  out.converges = increasing && tail_val >= bound;
  return out;
}

}  // namespace gfa
