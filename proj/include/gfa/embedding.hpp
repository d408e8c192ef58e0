#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gfa/asymptotics.hpp"
#include "gfa/distribution.hpp"
#include "gfa/function_nets.hpp"

namespace gfa {

/// phi with Fourier transform the plateau chi (== 1 on |xi| <= 1, 0 past 2),
/// together with its quadrature certificate.
struct Mollifier {
  int moment_order_checked = 0;
  double mass = 0.0;
  std::vector<double> moments;  // moments[m], m = 0..M
  double peak = 0.0;            // phi(0)

  double operator()(double x) const;
  /// phi_eps^{(alpha)}(x) = eps^{-1-alpha} phi^{(alpha)}(x/eps)
  double scaled(double x, double eps, int alpha = 0) const;
};

/// Moments are computed by a Gaussian-summed trapezoid rule; throws with the
/// achieved magnitudes when the certificate fails.
Mollifier build_mollifier(int moment_order = 6, double tolerance = 1e-8);

/// (T * phi_eps) as a symbolic net; the mollifier is the one built above.
FunctionNet embed(const DistributionSpec& dist, const Mollifier& moll,
                  Box domain = Box::interval(-4, 4));
FunctionNet embed(std::string_view dist_text, Box domain = Box::interval(-4, 4));
/// Same with the truncated kernel psi_eps.
FunctionNet embed_truncated(const DistributionSpec& dist, Box domain = Box::interval(-4, 4));

struct NegligibilityCertificate {
  int k = 0, alpha = 0;
  std::vector<double> sups;  // per grid eps
  ValuationEstimate estimate;
};

/// psi_eps(x) = chi(x / sqrt(eps)) phi_eps(x), supported in |x| <= 2 sqrt(eps).
struct TruncatedMollifierNet {
  Mollifier base;
  std::vector<NegligibilityCertificate> certificate;

  static double support_radius(double eps);
  /// psi_eps^{(alpha)}(x)
  double value(double x, double eps, int alpha = 0) const;
  /// (phi_eps - psi_eps)^{(alpha)}(x)
  double difference(double x, double eps, int alpha = 0) const;
};

/// (phi_eps - psi_eps)^{(alpha)}(x), alpha <= 2, in extended precision.
double truncation_difference_precise(double x, double eps, int alpha = 0);

/// Certifies sup_x |x^k (phi_eps - psi_eps)^{(alpha)}| has exponent >= bound
/// for k, alpha in {0,1,2}; the suprema are computed in extended precision.
TruncatedMollifierNet truncate_mollifier(const Mollifier& moll, const EpsilonGrid& grid,
                                         double bound = 8.0);

/// Smooth test function; the support is taken from bump/gbump factors or
/// else [-8, 8].
struct TestFunction {
  Expression expr;
  Box support;

  static TestFunction parse(std::string_view text);
  static TestFunction parse(std::string_view text, Box support);
};

/// exp(-x^2), bump(x), gbump(x).
std::vector<TestFunction> default_test_functions();

/// <T, theta> computed from the distribution side.
double pairing(const DistributionSpec& dist, const TestFunction& theta);
/// int f_eps theta dx by graded Gauss-Legendre panels.
double pairing(const FunctionNet& net, const TestFunction& theta, double eps,
               const std::vector<double>& extra_anchors = {});

struct AssociationDetail {
  std::string test_function;
  std::vector<double> errors;    // |<T - f_eps, theta>| per eps
  std::vector<double> envelope;  // max over eps' <= eps
  double slope = 0.0;
};

struct AssociationResult {
  bool associated = false;
  bool strong = false;
  double slope = 0.0;  // smallest over test functions
  std::vector<AssociationDetail> details;
};

AssociationResult association_test(const FunctionNet& net, const DistributionSpec& dist,
                                   const std::vector<TestFunction>& test_functions,
                                   const EpsilonGrid& grid);

}  // namespace gfa
