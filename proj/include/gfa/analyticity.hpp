#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "gfa/asymptotics.hpp"
#include "gfa/function_nets.hpp"

namespace gfa {

// ---- Stirling forms ----------------------------------------------------------

/// Bound forms for sup |f^{(n)}| eps^a: eta^{n+1} n! or eta^{n+1} n^n.
enum class BoundForm { Factorial, Power };

/// n! <= n^n, so a factorial-form constant works unchanged in power form.
double stirling_to_power(double eta_factorial);
/// n^n <= e^n n!, so a power-form constant eta' gives e * eta' in factorial form.
double stirling_to_factorial(double eta_power);
/// log n! and log of the normalizing term in the given form (log n^n, 0^0 = 1).
double log_bound_term(int n, BoundForm form);

// ---- analyticity tests ---------------------------------------------------------

enum class Verdict { Analytic, NotAnalytic, Inconclusive };
std::string to_string(Verdict v);

struct AnalyticityOptions {
  int max_order = 30;  // capped at the net's reliable order
  int points_per_axis = 256;
  double slack = 0.5;               // exponent units, and e^{slack} on eta
  double not_analytic_slope = -0.5;  // d_n trend at or below this
  BoundForm form = BoundForm::Factorial;
};

struct AnalyticityReport {
  double point = 0.0;
  double radius = 0.0;
  std::vector<double> eps;                     // tail of the grid
  std::vector<std::vector<double>> sups;       // sups[n][i] = M_n(eps_i)
  std::vector<ValuationEstimate> valuations;   // d_n
  double d_slope = 0.0;                        // LS slope of finite d_n against n
  double a = 0.0;
  double eta = 1.0;
  BoundForm form = BoundForm::Factorial;
  Verdict verdict = Verdict::Inconclusive;

  /// max over eps of log(M_n eps^a) - log(bound term), -inf if M_n vanishes.
  double envelope(int n) const;
  /// Whether log(M_n eps^a) <= (n+1)(log eta + slack) + log term + slack for all n, eps.
  bool bound_holds(double eta, BoundForm form, double slack) const;
};

AnalyticityReport test_real_analytic(const FunctionNet& net, double point, double radius,
                                     const EpsilonGrid& grid,
                                     const AnalyticityOptions& opt = {});

struct SingularSupport {
  std::vector<double> singular;
  std::vector<double> inconclusive;
  std::vector<AnalyticityReport> reports;
};

SingularSupport singular_support(const FunctionNet& net, const std::vector<double>& probes,
                                 double radius, const EpsilonGrid& grid,
                                 const AnalyticityOptions& opt = {});

// ---- holomorphic extension by truncated Taylor series ---------------------------

/// sigma(eps) = ceil(ln(1/eps)^2)
int default_sigma(double eps);

struct TaylorExtension {
  FunctionNet net;
  Box interval;
  double eta = 1.0;
  std::function<int(double)> sigma;
  int budget = 160;  // largest usable sigma; sigma + 1 derivatives are needed

  double half_width() const { return 1.0 / eta; }
  int sigma_at(double eps) const;
  /// F_eps(x, y) = f_eps(x) + sum_{1 <= j <= sigma} f^{(j)}_eps(x) (iy)^j / j!
  std::complex<double> operator()(double x, double y, double eps) const;
  /// d-bar F_eps = (1/2) f^{(sigma+1)}(x) (iy)^sigma / sigma!
  std::complex<double> dbar(double x, double y, double eps) const;
};

/// Requires analytic verdicts on a cover of the interval with a common eta
/// (fitted eta <= eta * e^{slack}); throws otherwise.
TaylorExtension taylor_extension(const FunctionNet& net, const Box& interval, double eta,
                                 const EpsilonGrid& grid, const AnalyticityOptions& opt = {});

struct ResidualCertificate {
  std::vector<double> eps;
  std::vector<double> log_residual;  // log sup |dbar F_eps| (may be -inf)
  ValuationEstimate estimate;
  bool passed = false;
  std::string warning;  // set when the grid was shrunk to fit the budget
};

/// Valuation of eps -> sup over interval x {|y| <= rho/eta} of |dbar F_eps|,
/// fitted in log space over the whole (possibly shrunk) grid.
ResidualCertificate dbar_residual(const TaylorExtension& ext, const EpsilonGrid& grid,
                                  double rho = 0.5, double bound = 8.0, int points_per_axis = 128);

// ---- sub-linearity and sharp Taylor convergence --------------------------------

struct SublinearityResult {
  bool sublinear = false;
  int k = -1;  // minimal integer k on [0, k_max], -1 if none
};

/// Exists integer k <= k_max with p_n + k n strictly increasing on [N/2, N]
/// and p_N + k N > p_0 + 10.
SublinearityResult sublinearity_test(const std::vector<double>& p, int k_max = 64);

/// Valuations of eps -> sup over the sharp ball |x - x_eps| <= eps^{r} of |f^{(n)}|.
std::vector<ValuationEstimate> derivative_valuations_at(const FunctionNet& net,
                                                        const GeneralizedPoint& point, int max_order,
                                                        const EpsilonGrid& grid,
                                                        double radius_exponent = 1.0);

struct TaylorConvergence {
  bool converges = false;
  std::vector<double> term_valuations;       // n-th term, +inf when the term vanishes
  std::vector<double> remainder_valuations;  // of sum_{m > N} |term_m|, m up to max_order + 8
};

/// Terms f^{(n)}(x0_eps) (eps^{offset})^n / n!. Converges iff the finite term
/// valuations strictly increase and both the N-th term and the remainder have
/// valuation >= bound (vanishing terms count as +inf).
TaylorConvergence sharp_taylor_convergence(const FunctionNet& net, const GeneralizedPoint& center,
                                           double offset_exponent, int max_order,
                                           const EpsilonGrid& grid, double bound = 8.0);

}  // namespace gfa
