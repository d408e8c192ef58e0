#pragma once

#include <array>
#include <string>
#include <vector>

#include "gfa/analyticity.hpp"
#include "gfa/asymptotics.hpp"
#include "gfa/distribution.hpp"
#include "gfa/function_nets.hpp"

namespace gfa {

// ---- cutoff sequences ----------------------------------------------------------

/// Unit-mass bump c exp(-1/(1-x^2)) on [-1, 1].
double unit_bump(double x);

struct CutoffMember {
  int n = 0;
  std::vector<double> values;           // kappa_n on the window grid
  std::vector<double> derivative_sups;  // sup |kappa_n^{(alpha)}|, alpha = 0..n
  double plateau_error = 0.0;           // max |kappa_n - 1| on K
  double support_leak = 0.0;            // max |kappa_n| outside K_r
};

/// kappa_n = 1_{K_{r/3}} * u_{r/(3n)}^{*n} on a periodic window around K_r,
/// computed from its closed-form spectrum 1^_{K_{r/3}}(xi) u^(r xi / 3n)^n.
/// kappa_n == 1 on K, supp kappa_n in K_{2r/3}, and
/// sup |kappa_n^{(alpha)}| <= C (C n / r)^alpha for alpha <= n.
struct CutoffSequence {
  Box K;
  double r = 0.0;
  int n_max = 0;
  Box window;
  int resolution = 0;
  std::vector<CutoffMember> members;  // members[n - 1]
  double C = 0.0;

  const CutoffMember& member(int n) const { return members.at(n - 1); }
  double spacing() const { return window.width() / resolution; }
  double grid_point(int j) const { return window.lo[0] + j * spacing(); }
  /// Same sequence for K + shift; the samples do not change.
  CutoffSequence translated(double shift) const;
};

/// Throws "refine grid" when the narrowest bump u_{r/(3 n_max)} has fewer
/// than 8 grid points across it, and fails the certificate when the plateau
/// error or the leak outside K_r exceeds the tolerance.
CutoffSequence build_cutoff_sequence(const Box& K, double r, int n_max, int resolution = 4096,
                                     double tolerance = 1e-10);
/// kappa_n == 1 on W and supported in V.
CutoffSequence cutoff_for_neighborhoods(const Box& W, const Box& V, int n_max, int resolution = 4096);

/// Products kappa_n(x) kappa_n(y) of two 1D sequences.
struct CutoffSequence2D {
  CutoffSequence x, y;
  int n_max() const { return x.n_max; }
  /// constant for sup |d^a_x d^b_y| <= C (C n / r)^{a+b}, a + b <= n
  double C = 0.0;
};
/// The spectrum of the widest bump is not resolved to 1e-10 on 512 points, so
/// the 2D certificate uses 1e-7.
CutoffSequence2D build_cutoff_sequence_2d(const Box& K, double r, int n_max, int resolution = 512);

// ---- bounded sequences -----------------------------------------------------------

/// u_{n,eps} = kappa_n f_eps as sampled nets on the cutoff window.
std::vector<FunctionNet> cutoff_products(const FunctionNet& net, const CutoffSequence& cutoffs);

struct BoundedSequenceResult {
  bool bounded = false;
  int m = -1;       // smallest weight exponent that works
  double b = 0.0;   // fitted eps exponent for that m, clamped at 0
};

/// Some (m, b) with m <= 16, b <= 64 and sup (1+|xi|)^{-m} |u^_{n,eps}| = O(eps^{-b})
/// for every member. Members must vanish near their window edges.
BoundedSequenceResult bounded_sequence_check(const std::vector<FunctionNet>& members,
                                             const EpsilonGrid& grid);

// ---- Fourier decay ------------------------------------------------------------------

struct Cone {
  int dimension = 1;
  std::array<double, 2> direction{1.0, 0.0};  // unit vector; in 1D the sign
  double half_angle = 0.0;                    // 2D only
  double xi_min = 16.0;
  double xi_max = 0.0;  // 0: a quarter of the Nyquist frequency

  static Cone ray(int sign);
  static Cone sector(double angle, double half_angle);
  /// Direction test only; the band is applied separately.
  bool contains(double xi, double eta = 0.0) const;
  std::string label() const;
};

/// |F(kappa_n f_eps)| on the DFT bins of the cutoff window.
struct LocalSpectra {
  int dimension = 1;
  std::array<double, 2> center{0.0, 0.0};
  std::vector<double> eps;
  int n_max = 0;
  int size = 0;         // bins per axis
  double length = 0.0;  // window length per axis
  std::vector<std::vector<std::vector<double>>> magnitude;  // [n-1][i][bin], row-major in 2D
  std::vector<std::vector<double>> floor;                   // [n-1][i]: round-off level

  double nyquist() const;
  double frequency(int bin) const;  // angular frequency along one axis
};

/// Throws when the spectrum near the Nyquist frequency exceeds 1e-6 of its peak.
LocalSpectra local_spectra(const FunctionNet& net, const CutoffSequence& cutoffs, const EpsilonGrid& grid);
LocalSpectra local_spectra(const FunctionNet& net, const CutoffSequence2D& cutoffs, const EpsilonGrid& grid);

struct DecayFit {
  double C = 1.0;
  double a = 0.0;
  /// log sup over the cone band of (1+|xi|)^n |u^_{n,eps}|, -inf when nothing
  /// is above round-off; [n-1][i]
  std::vector<std::vector<double>> log_envelope;
  /// min over eps of log(C^{n+1} n^n eps^{-a}) - log envelope, per n
  std::vector<double> margins;
  double worst_margin = kInfinity;
  bool pass = false;
};

/// Bound |u^_{n,eps}(xi)| <= C eps^{-a} (C n / (1+|xi|))^n. a comes from the
/// eps-trend of sup |u^| at each n, C from the larger half of the eps values;
/// pass iff the bound times e^{slack} holds at every tested (n, xi, eps).
DecayFit fourier_decay_fit(const LocalSpectra& spectra, const Cone& cone, double slack = 1.0);
DecayFit fourier_decay_fit(const FunctionNet& net, const CutoffSequence& cutoffs, const Cone& cone,
                           const EpsilonGrid& grid, double slack = 1.0);

// ---- microanalyticity and wave fronts ---------------------------------------------------

enum class MicroVerdict { Microanalytic, Singular, Inconclusive };
std::string to_string(MicroVerdict v);

struct MicrolocalOptions {
  int n_max = 12;
  double radius = 0.25;   // V = ball(x0, r), W = ball(x0, r/3)
  int resolution = 4096;  // 1D; 2D uses resolution_2d per axis
  int resolution_2d = 512;
  int n_max_2d = 8;       // the narrowest bump must span 4 cells at resolution_2d
  double slack = 1.0;     // e on the bound; one more e is inconclusive
  double half_angle = 3.14159265358979323846 / 32;
  int sectors = 64;
};

/// 2^-4 .. 2^-9, all six values in the fit.
EpsilonGrid microlocal_grid();
/// 2^-4 .. 2^-7 for the 2D tests.
EpsilonGrid microlocal_grid_2d();

struct ProbeResult {
  std::array<double, 2> point{0.0, 0.0};
  Cone cone;
  DecayFit fit;
  MicroVerdict verdict = MicroVerdict::Inconclusive;
};

MicroVerdict verdict_from_margin(double worst_margin, double slack);

ProbeResult microanalytic_test(const FunctionNet& net, double x0, int sign, const EpsilonGrid& grid,
                               const MicrolocalOptions& opt = {});

struct WaveFrontReport {
  int dimension = 1;
  std::vector<ProbeResult> probes;
  std::vector<std::array<double, 2>> singular_support;  // points with a singular direction
  std::vector<std::array<double, 2>> inconclusive;      // no singular, some inconclusive direction

  /// (point, direction) pairs with a singular verdict (1D: direction = sign).
  std::vector<std::pair<double, int>> singular_pairs() const;
};

WaveFrontReport wavefront_estimate(const FunctionNet& net, const std::vector<double>& points,
                                   const std::vector<int>& directions, const EpsilonGrid& grid,
                                   const MicrolocalOptions& opt = {});
/// Sectors of the circle around each point (opt.sectors, opt.half_angle).
WaveFrontReport wavefront_estimate_2d(const FunctionNet& net, const std::vector<std::array<double, 2>>& points,
                                      const EpsilonGrid& grid, const MicrolocalOptions& opt = {});

/// Projected singular points equal the analyticity singular support on the
/// shared probes, inconclusive probes excluded on both sides. Throws on
/// mismatched probe sets.
bool projection_check(const WaveFrontReport& report, const SingularSupport& singsupp);

// ---- distribution-level checks --------------------------------------------------------

struct ClassicalDecay {
  std::vector<double> log_envelope;  // per n over the full band
  std::vector<double> margins;       // per n, against C fitted on the lowest eighth of the band
  double C = 1.0;
  double worst_margin = kInfinity;
  MicroVerdict verdict = MicroVerdict::Inconclusive;
};

/// The eps-free bound |F(kappa_n T)(xi)| <= C (C n / (1+|xi|))^n on
/// 16 <= |xi| <= a quarter of the probe Nyquist frequency, with C fitted on
/// the lowest eighth of that band. Point terms are closed form, the rest
/// Gauss panels split at the kinks.
ClassicalDecay classical_decay_test(const DistributionSpec& dist, double x0, int sign,
                                    const MicrolocalOptions& opt = {});

/// Singular points of the catalog terms (with nonzero coefficient) among the
/// probes, paired with both directions.
std::vector<std::pair<double, int>> known_wavefront(const DistributionSpec& dist,
                                                    const std::vector<double>& points);

}  // namespace gfa
