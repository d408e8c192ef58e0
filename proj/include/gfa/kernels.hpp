#pragma once

#include <cmath>
#include <vector>

#include <boost/math/constants/constants.hpp>

namespace gfa::kernels {

// chi: smooth plateau, 1 on |t| <= 1, 0 on |t| >= 2.
// phi: inverse Fourier transform of chi (the mollifier, also exposed as psi).
// Phi: primitive of phi with Phi(-inf) = 0.
// A:   |.| * phi, so A' = 2 Phi - 1 and A'' = 2 phi.

template <class R>
R chi(const R& t) {
  using std::abs;
  using std::exp;
  const R a = abs(t);
  if (a <= 1) return R(1);
  if (a >= 2) return R(0);
  // 1 / (1 + exp(1/(2-a) - 1/(a-1))), written to avoid overflow.
  const R s = R(1) / (2 - a) - R(1) / (a - 1);
  if (s > 0) {
    const R e = exp(-s);
    return e / (1 + e);
  }
  return R(1) / (1 + exp(s));
}

template <class R>
R chi_prime(const R& t) {
  using std::abs;
  const R a = abs(t);
  if (a <= 1 || a >= 2) return R(0);
  const R c = chi(a);
  const R d = -c * (1 - c) * (R(1) / ((2 - a) * (2 - a)) + R(1) / ((a - 1) * (a - 1)));
  return t < 0 ? R(-d) : d;
}

/// Quadrature sums over the spectral support [0,2].
/// Trapezoid on the symmetric interval [-2,2]; the integrands are smooth and
/// compactly supported, so the only error is aliasing from the image at
/// distance 2*pi/h - |u|, which `margin` pushes into the tail of phi.
template <class R>
struct SpectralSums {
  std::vector<R> re, im;  // S_k = sum_j w_j xi_j^k e^{i u xi_j}
  R phi_like_sine;        // sum_j w_j chi(xi_j) sin(u xi_j)/xi_j (j=0 uses the limit u)
  R abs_correction;       // sum_j w_j chi'(xi_j) cos(u xi_j)/xi_j
};

template <class R>
SpectralSums<R> spectral_sums(const R& u, int n, double margin, bool extras) {
  using std::abs;
  using std::ceil;
  using std::cos;
  using std::sin;
  const R pi = boost::math::constants::pi<R>();
  const R L = abs(u) + margin;
  const long m = static_cast<long>(ceil(static_cast<double>(L / pi)));
  const R h = R(2) / m;
  SpectralSums<R> s;
  s.re.assign(n + 1, R(0));
  s.im.assign(n + 1, R(0));
  s.phi_like_sine = R(0);
  s.abs_correction = R(0);
  std::vector<R> pw(n + 1);
  for (long j = 0; j < m; ++j) {
    const R xi = h * j;
    const R c = chi(xi);
    const R w = (j == 0 ? R(0.5) : R(1)) * h;
    const R arg = u * xi;
    const R cs = cos(arg), sn = sin(arg);
    R p = w * c;
    for (int k = 0; k <= n; ++k) {
      s.re[k] += p * cs;
      s.im[k] += p * sn;
      p *= xi;
    }
    if (extras) {
      if (j == 0)
        s.phi_like_sine += w * u;
      else {
        s.phi_like_sine += w * c * sn / xi;
        s.abs_correction += w * chi_prime(xi) * cs / xi;
      }
    }
  }
  return s;
}

template <class R>
std::vector<R> phi_from_sums(const SpectralSums<R>& s, int n) {
  const R pi = boost::math::constants::pi<R>();
  std::vector<R> out(n + 1);
  for (int k = 0; k <= n; ++k) {
    // Re(i^k (re + i im))
    R v;
    switch (k % 4) {
      case 0: v = s.re[k]; break;
      case 1: v = -s.im[k]; break;
      case 2: v = -s.re[k]; break;
      default: v = s.im[k]; break;
    }
    out[k] = v / pi;
  }
  return out;
}

/// phi^{(k)}(u) for k = 0..n.
template <class R>
std::vector<R> phi_derivatives_t(const R& u, int n, double margin) {
  return phi_from_sums(spectral_sums(u, n, margin, false), n);
}

/// Beyond this |u| the kernel and all tabulated derivatives are below double
/// round-off of the quadrature and are returned as exact zeros.
inline constexpr double kPhiCutoff = 800.0;
inline constexpr double kDoubleMargin = 900.0;

double chi(double t);
double phi(double u);
/// phi^{(k)}(u), k = 0..n.
std::vector<double> phi_derivatives(double u, int n);
/// Phi, phi, phi', ... up to the n-th derivative of Phi.
std::vector<double> heaviside_derivatives(double u, int n);
/// A, A' = 2 Phi - 1, A'' = 2 phi, ... up to order n.
std::vector<double> abs_derivatives(double u, int n);
/// Derivatives 0..n of chi itself (used by the expression language).
std::vector<double> chi_derivatives(double t, int n);

/// Catalog kernels: value of K^{(order)} and its next n derivatives.
enum class Kind { Phi, Heaviside, Abs };
std::vector<double> kernel_derivatives(Kind kind, int order, double u, int n);

/// Kernels of the truncated mollifier chi(x/sqrt(eps)) phi_eps(x), written in
/// the scaled variable u = x/eps: psi_t(u) = chi(u sqrt(eps)) phi(u).
/// Same layout as the untruncated versions above.
std::vector<double> truncated_phi_derivatives(double u, int n, double eps);
std::vector<double> truncated_heaviside_derivatives(double u, int n, double eps);
std::vector<double> truncated_abs_derivatives(double u, int n, double eps);
std::vector<double> truncated_kernel_derivatives(Kind kind, int order, double u, int n, double eps);

}  // namespace gfa::kernels
