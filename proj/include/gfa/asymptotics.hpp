#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace gfa {

/// Error raised by every analysis routine in the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Real50 = boost::multiprecision::cpp_bin_float_50;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Finite, strictly decreasing set of samples of the regularization
/// parameter. The last `tail_window` samples (the smallest) feed every
/// asymptotic regression.
class EpsilonGrid {
public:
  EpsilonGrid(std::vector<double> values, std::size_t tail_window);

  /// eps_k = 2^-k for k = first..last.
  static EpsilonGrid dyadic(int first, int last, std::size_t tail_window);
  /// 2^-6 .. 2^-24, tail window 8.
  static EpsilonGrid standard();

  const std::vector<double>& values() const { return values_; }
  std::size_t tail_window() const { return tail_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> tail() const;
  double smallest() const { return values_.back(); }

  /// Copy restricted to values >= min_eps. Keeps the tail window when possible.
  EpsilonGrid truncated_below(double min_eps) const;

private:
  std::vector<double> values_;
  std::size_t tail_;
};

/// An eps-indexed net of complex numbers. Real nets may also carry a
/// 50-digit evaluator; differences of such nets then keep the digits that
/// cancel in double precision.
struct ScalarNet {
  std::function<std::complex<double>(double)> evaluator;
  std::string label;
  std::function<Real50(double)> precise;

  std::complex<double> operator()(double eps) const { return evaluator(eps); }

  static ScalarNet constant(std::complex<double> c);
  /// eps -> c * eps^a
  static ScalarNet power(double c, double a);
  static ScalarNet from_real(std::function<Real50(double)> f, std::string label);
};

ScalarNet operator-(const ScalarNet& a, const ScalarNet& b);
ScalarNet operator+(const ScalarNet& a, const ScalarNet& b);
ScalarNet operator*(const ScalarNet& a, const ScalarNet& b);

enum class Classification { NegligibleAtThreshold, Moderate, NotModerateAtThreshold };

std::string to_string(Classification c);

struct ValuationEstimate {
  double exponent = 0.0;  ///< may be +inf
  double residual = 0.0;  ///< max |log-log fit deviation|
  Classification classification = Classification::Moderate;
  /// Smallest slope between consecutive retained samples.
  double min_local_slope = 0.0;
  /// Local slopes do not drift downward towards small eps (decay steady or
  /// accelerating). Lets super-polynomial decay count despite a curved fit.
  bool steady_or_accelerating = true;

  bool infinite() const { return exponent == kInfinity; }
};

/// Numerical stand-ins for the quantifiers "for every b" / "there exists a".
struct Thresholds {
  double negligible_exponent = 8.0;
  double negligible_residual = 0.5;
  double moderate_exponent = -64.0;
  double moderate_residual = 1.0;
  double absolute_floor = 1e-300;
  double ball_slack = 0.1;
};

const Thresholds& default_thresholds();

/// Valuation of a sampled magnitude sequence; `eps` and `magnitudes` must be
/// aligned and ordered like an EpsilonGrid tail (decreasing eps).
ValuationEstimate fit_valuation(std::span<const double> eps, std::span<const double> magnitudes,
                                const Thresholds& th = default_thresholds());

Classification classify(const ValuationEstimate& est, const Thresholds& th = default_thresholds());

ValuationEstimate estimate_valuation(const ScalarNet& net, const EpsilonGrid& grid,
                                     const Thresholds& th = default_thresholds());

double sharp_distance(const ScalarNet& r, const ScalarNet& s, const EpsilonGrid& grid,
                      const Thresholds& th = default_thresholds());

bool sharp_ball_contains(const ScalarNet& center, double radius, const ScalarNet& candidate,
                         const EpsilonGrid& grid, const Thresholds& th = default_thresholds());

bool equal_in_generalized_numbers(const ScalarNet& r, const ScalarNet& s, const EpsilonGrid& grid,
                                  const Thresholds& th = default_thresholds());

/// Ordinary least squares y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace gfa
