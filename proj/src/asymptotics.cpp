#include "gfa/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace gfa {

EpsilonGrid::EpsilonGrid(std::vector<double> values, std::size_t tail_window)
    : values_(std::move(values)), tail_(tail_window) {
  if (values_.empty()) throw Error("epsilon grid is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double e = values_[i];
    if (!(e > 0.0 && e < 1.0)) throw Error("epsilon grid values must lie in (0,1)");
    if (i > 0 && !(e < values_[i - 1])) throw Error("epsilon grid must be strictly decreasing");
  }
  if (tail_ < 3 || tail_ > values_.size())
    throw Error("tail window must be >= 3 and <= grid length");
}

EpsilonGrid EpsilonGrid::dyadic(int first, int last, std::size_t tail_window) {
  std::vector<double> v;
  for (int k = first; k <= last; ++k) v.push_back(std::ldexp(1.0, -k));
  return EpsilonGrid(std::move(v), tail_window);
}

EpsilonGrid EpsilonGrid::standard() { return dyadic(6, 24, 8); }

std::span<const double> EpsilonGrid::tail() const {
  return std::span<const double>(values_).subspan(values_.size() - tail_);
}

EpsilonGrid EpsilonGrid::truncated_below(double min_eps) const {
  std::vector<double> kept;
  for (double e : values_)
    if (e >= min_eps) kept.push_back(e);
  if (kept.size() < 3) throw Error("epsilon grid too short after truncation");
  const std::size_t tail = std::min(tail_, kept.size());
  return EpsilonGrid(std::move(kept), tail);
}

ScalarNet ScalarNet::from_real(std::function<Real50(double)> f, std::string label) {
  ScalarNet n;
  n.evaluator = [f](double e) { return std::complex<double>(static_cast<double>(f(e))); };
  n.precise = std::move(f);
  n.label = std::move(label);
  return n;
}

ScalarNet ScalarNet::constant(std::complex<double> c) {
  if (c.imag() == 0.0) {
    const double r = c.real();
    return from_real([r](double) { return Real50(r); }, "const");
  }
  return {[c](double) { return c; }, "const", {}};
}

ScalarNet ScalarNet::power(double c, double a) {
  return from_real([c, a](double e) { return Real50(c) * pow(Real50(e), Real50(a)); }, "power");
}

namespace {

template <class Op, class OpP>
ScalarNet combine(const ScalarNet& a, const ScalarNet& b, const char* sym, Op op, OpP opp) {
  ScalarNet n;
  n.evaluator = [a, b, op](double e) { return op(a(e), b(e)); };
  n.label = "(" + a.label + ")" + sym + "(" + b.label + ")";
  if (a.precise && b.precise)
    n.precise = [pa = a.precise, pb = b.precise, opp](double e) { return opp(pa(e), pb(e)); };
  return n;
}

}  // namespace

ScalarNet operator-(const ScalarNet& a, const ScalarNet& b) {
  return combine(a, b, "-", std::minus<>{}, [](const Real50& x, const Real50& y) { return Real50(x - y); });
}

ScalarNet operator+(const ScalarNet& a, const ScalarNet& b) {
  return combine(a, b, "+", std::plus<>{}, [](const Real50& x, const Real50& y) { return Real50(x + y); });
}

ScalarNet operator*(const ScalarNet& a, const ScalarNet& b) {
  return combine(a, b, "*", std::multiplies<>{}, [](const Real50& x, const Real50& y) { return Real50(x * y); });
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::NegligibleAtThreshold: return "negligible-at-threshold";
    case Classification::Moderate: return "moderate";
    case Classification::NotModerateAtThreshold: return "not-moderate-at-threshold";
  }
  return "?";
}

const Thresholds& default_thresholds() {
  static const Thresholds th;
  return th;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n == 0) throw Error("fit_line: size mismatch");
  LineFit f;
  if (n == 1) {
    f.intercept = y[0];
    return f;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i)
    f.max_residual = std::max(f.max_residual, std::abs(y[i] - f.intercept - f.slope * x[i]));
  return f;
}

Classification classify(const ValuationEstimate& est, const Thresholds& th) {
  if (est.infinite()) return Classification::NegligibleAtThreshold;
  auto passes = [&](double bound, double residual_limit) {
    if (est.exponent < bound) return false;
    if (est.residual < residual_limit) return true;
    return est.steady_or_accelerating && est.min_local_slope >= bound;
  };
  if (passes(th.negligible_exponent, th.negligible_residual))
    return Classification::NegligibleAtThreshold;
  if (passes(th.moderate_exponent, th.moderate_residual)) return Classification::Moderate;
  return Classification::NotModerateAtThreshold;
}

ValuationEstimate fit_valuation(std::span<const double> eps, std::span<const double> magnitudes,
                                const Thresholds& th) {
  if (eps.size() != magnitudes.size() || eps.empty()) throw Error("fit_valuation: size mismatch");
  for (double m : magnitudes)
    if (!std::isfinite(m)) throw Error("net not evaluable");

  ValuationEstimate est;
  // Below the floor a sample counts as an exact zero. A net that is zero at
  // the smallest sampled eps is treated as eventually vanishing.
  if (magnitudes.back() < th.absolute_floor) {
    est.exponent = kInfinity;
    est.classification = Classification::NegligibleAtThreshold;
    return est;
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (magnitudes[i] < th.absolute_floor) continue;
    lx.push_back(std::log(eps[i]));
    ly.push_back(std::log(magnitudes[i]));
  }
  if (lx.size() == 1) {
    est.exponent = ly[0] / lx[0];
    est.min_local_slope = est.exponent;
  } else {
    const LineFit f = fit_line(lx, ly);
    est.exponent = f.slope;
    est.residual = f.max_residual;
    std::vector<double> local;
    for (std::size_t i = 1; i < lx.size(); ++i)
      local.push_back((ly[i] - ly[i - 1]) / (lx[i] - lx[i - 1]));
    est.min_local_slope = *std::min_element(local.begin(), local.end());
    est.steady_or_accelerating = local.back() >= local.front() - th.negligible_residual;
  }
  est.classification = classify(est, th);
  return est;
}

ValuationEstimate estimate_valuation(const ScalarNet& net, const EpsilonGrid& grid,
                                     const Thresholds& th) {
  const auto tail = grid.tail();
  std::vector<double> mags(tail.size());
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (net.precise) {
      const Real50 p = net.precise(tail[i]);
      if (!boost::multiprecision::isfinite(p)) throw Error("net not evaluable");
      mags[i] = static_cast<double>(abs(p));
      continue;
    }
    const std::complex<double> v = net(tail[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error("net not evaluable");
    mags[i] = std::abs(v);
  }
  return fit_valuation(tail, mags, th);
}

double sharp_distance(const ScalarNet& r, const ScalarNet& s, const EpsilonGrid& grid,
                      const Thresholds& th) {
  const ValuationEstimate v = estimate_valuation(r - s, grid, th);
  if (v.infinite()) return 0.0;
  return std::exp(-v.exponent);
}

bool sharp_ball_contains(const ScalarNet& center, double radius, const ScalarNet& candidate,
                         const EpsilonGrid& grid, const Thresholds& th) {
  if (!(radius > 0.0 && radius < 1.0)) throw Error("sharp ball radius must lie in (0,1)");
  const ValuationEstimate v = estimate_valuation(center - candidate, grid, th);
  return v.exponent >= -std::log(radius) - th.ball_slack;
}

bool equal_in_generalized_numbers(const ScalarNet& r, const ScalarNet& s, const EpsilonGrid& grid,
                                  const Thresholds& th) {
  return estimate_valuation(r - s, grid, th).classification ==
         Classification::NegligibleAtThreshold;
}

}  // namespace gfa
