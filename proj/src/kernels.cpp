#include "gfa/kernels.hpp"

#include <map>
#include <memory>
#include <numbers>

#include "gfa/jet.hpp"

namespace gfa::kernels {

double chi(double t) { return chi<double>(t); }

std::vector<double> phi_derivatives(double u, int n) {
  if (std::abs(u) > kPhiCutoff) return std::vector<double>(n + 1, 0.0);
  return phi_derivatives_t<double>(u, n, kDoubleMargin);
}

double phi(double u) { return phi_derivatives(u, 0)[0]; }

std::vector<double> heaviside_derivatives(double u, int n) {
  std::vector<double> out(n + 1, 0.0);
  if (std::abs(u) > kPhiCutoff) {
    out[0] = u > 0 ? 1.0 : 0.0;
    return out;
  }
  const auto s = spectral_sums<double>(u, n > 0 ? n - 1 : 0, kDoubleMargin, true);
  out[0] = 0.5 + s.phi_like_sine / std::numbers::pi;
  if (n > 0) {
    const auto d = phi_from_sums(s, n - 1);
    for (int k = 1; k <= n; ++k) out[k] = d[k - 1];
  }
  return out;
}

std::vector<double> abs_derivatives(double u, int n) {
  std::vector<double> out(n + 1, 0.0);
  if (std::abs(u) > kPhiCutoff) {
    out[0] = std::abs(u);
    if (n >= 1) out[1] = u > 0 ? 1.0 : -1.0;
    return out;
  }
  const auto s = spectral_sums<double>(u, n >= 2 ? n - 2 : 0, kDoubleMargin, true);
  const double Phi = 0.5 + s.phi_like_sine / std::numbers::pi;
  out[0] = u * (2 * Phi - 1) - 2.0 / std::numbers::pi * s.abs_correction;
  if (n >= 1) out[1] = 2 * Phi - 1;
  if (n >= 2) {
    const auto d = phi_from_sums(s, n - 2);
    for (int k = 2; k <= n; ++k) out[k] = 2 * d[k - 2];
  }
  return out;
}

std::vector<double> chi_derivatives(double t, int n) {
  std::vector<double> out(n + 1, 0.0);
  const double a = std::abs(t);
  // within 1e-4 of the edges every derivative is below e^{-9000}; the jet
  // arithmetic would produce inf * 0 there
  if (a <= 1 + 1e-4 || a >= 2 - 1e-4) {
    out[0] = a <= 1.5 ? 1.0 : 0.0;
    return out;
  }
  using J = Jet<double>;
  const J x = J::variable(t, n);
  const J s = (t < 0 ? -x : x);
  const J e = J(1.0) / (J(2.0) - s) - J(1.0) / (s - J(1.0));
  J c;
  if (e.c[0] > 0) {
    const J w = exp(-e);
    c = w / (J(1.0) + w);
  } else {
    c = J(1.0) / (J(1.0) + exp(e));
  }
  for (int k = 0; k <= n; ++k) out[k] = derivative(c, k);
  return out;
}

std::vector<double> kernel_derivatives(Kind kind, int order, double u, int n) {
  std::vector<double> all;
  switch (kind) {
    case Kind::Phi: all = phi_derivatives(u, order + n); break;
    case Kind::Heaviside: all = heaviside_derivatives(u, order + n); break;
    case Kind::Abs: all = abs_derivatives(u, order + n); break;
  }
  return std::vector<double>(all.begin() + order, all.end());
}

}  // namespace gfa::kernels

namespace gfa::kernels {

namespace {

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// 24-point Gauss-Legendre nodes/weights on [-1,1], computed once by Newton.
struct GaussLegendre24 {
  double x[24], w[24];
  GaussLegendre24() {
    const int n = 24;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (z * p1 - p0) / (z * z - 1);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (z * p1 - p0) / (z * z - 1);
      x[i] = z;
      w[i] = 2 / ((1 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre24& gl24() {
  static const GaussLegendre24 g;
  return g;
}

// The part of phi removed by the truncation, w(t) = (1 - chi(t sqrt eps)) phi(t),
// with running integrals W(u) = int_{-inf}^u w and T(u) = int_{-inf}^u t w.
// On each unit panel w and t w are stored as Legendre series interpolating
// the 24 Gauss nodes, so partial panel integrals are closed form.
class TruncationTail {
public:
  explicit TruncationTail(double eps) : s_(std::sqrt(eps)), start_(1.0 / std::sqrt(eps)) {
    // w vanishes on |t| < start_ and is below round-off past the cutoff.
    if (start_ >= kPhiCutoff) return;
    panels_ = int(std::ceil(kPhiCutoff - start_));
    cw_.assign(std::size_t(panels_) * 24, 0.0);
    ct_.assign(std::size_t(panels_) * 24, 0.0);
    cumW_.assign(panels_ + 1, 0.0);
    cumT_.assign(panels_ + 1, 0.0);
    const auto& g = gl24();
    double P[24][24];  // P[n][i] = P_n(x_i)
    for (int i = 0; i < 24; ++i) {
      P[0][i] = 1;
      P[1][i] = g.x[i];
      for (int n = 2; n < 24; ++n) P[n][i] = ((2 * n - 1) * g.x[i] * P[n - 1][i] - (n - 1) * P[n - 2][i]) / n;
    }
    for (int p = 0; p < panels_; ++p) {
      double fw[24], ft[24];
      for (int i = 0; i < 24; ++i) {
        const double t = start_ + p + 0.5 * (1 + g.x[i]);
        fw[i] = w(t);
        ft[i] = t * fw[i];
      }
      for (int n = 0; n < 24; ++n) {
        double aw = 0, at = 0;
        for (int i = 0; i < 24; ++i) {
          aw += g.w[i] * fw[i] * P[n][i];
          at += g.w[i] * ft[i] * P[n][i];
        }
        cw_[p * 24 + n] = 0.5 * (2 * n + 1) * aw;
        ct_[p * 24 + n] = 0.5 * (2 * n + 1) * at;
      }
      // a panel of width 1 maps to [-1,1] with Jacobian 1/2; int P_0 = 2
      cumW_[p + 1] = cumW_[p] + cw_[p * 24];
      cumT_[p + 1] = cumT_[p] + ct_[p * 24];
    }
  }

  double total_w() const { return panels_ ? 2 * cumW_.back() : 0.0; }

  /// W(u), T(u) for the symmetric w (w even, t w odd).
  std::pair<double, double> running(double u) const {
    if (!panels_) return {0.0, 0.0};
    const double half_w = cumW_.back(), half_t = cumT_.back();
    if (u <= 0) {
      const auto [w, t] = right(-u);  // int_{-u}^{inf} on the right half
      return {w, -t};
    }
    const auto [w, t] = right(u);
    return {half_w + (half_w - w), -half_t + (half_t - t)};
  }

  double w(double t) const { return (1 - chi(t * s_)) * phi(t); }

private:
  double s_, start_;
  int panels_ = 0;
  std::vector<double> cw_, ct_, cumW_, cumT_;

  // int_u^inf w and int_u^inf t w, for u >= 0.
  std::pair<double, double> right(double u) const {
    if (u <= start_) return {cumW_.back(), cumT_.back()};
    const int p = int(u - start_);
    if (p >= panels_) return {0.0, 0.0};
    // int_y^1 P_n = -(P_{n+1}(y) - P_{n-1}(y))/(2n+1) for n >= 1, 1 - y for n = 0
    const double y = 2 * (u - start_ - p) - 1;
    double pm = 1, pc = y, sw = cw_[p * 24] * (1 - y), st = ct_[p * 24] * (1 - y);
    for (int n = 1; n < 24; ++n) {
      const double pn = ((2 * n + 1) * y * pc - n * pm) / (n + 1);
      const double seg = -(pn - pm) / (2 * n + 1);
      sw += cw_[p * 24 + n] * seg;
      st += ct_[p * 24 + n] * seg;
      pm = pc;
      pc = pn;
    }
    return {cumW_.back() - cumW_[p + 1] + 0.5 * sw, cumT_.back() - cumT_[p + 1] + 0.5 * st};
  }
};

const TruncationTail& tail_for(double eps) {
  thread_local std::map<double, std::unique_ptr<TruncationTail>> cache;
  auto& slot = cache[eps];
  if (!slot) slot = std::make_unique<TruncationTail>(eps);
  return *slot;
}

}  // namespace

std::vector<double> truncated_phi_derivatives(double u, int n, double eps) {
  const double s = std::sqrt(eps);
  const auto p = phi_derivatives(u, n);
  const auto c = chi_derivatives(u * s, n);
  std::vector<double> out(n + 1, 0.0);
  for (int a = 0; a <= n; ++a) {
    double sp = 1;
    for (int b = 0; b <= a; ++b) {
      out[a] += binom(a, b) * c[b] * sp * p[a - b];
      sp *= s;
    }
  }
  return out;
}

std::vector<double> truncated_heaviside_derivatives(double u, int n, double eps) {
  std::vector<double> out(n + 1, 0.0);
  // outside supp psi the primitive is constant; Phi - W would only cancel to round-off
  const double R = 2 / std::sqrt(eps);
  if (u <= -R) return out;
  if (u >= R) {
    out[0] = 1 - tail_for(eps).total_w();
    return out;
  }
  const auto [W, T] = tail_for(eps).running(u);
  (void)T;
  out[0] = heaviside_derivatives(u, 0)[0] - W;
  if (n > 0) {
    const auto d = truncated_phi_derivatives(u, n - 1, eps);
    for (int k = 1; k <= n; ++k) out[k] = d[k - 1];
  }
  return out;
}

std::vector<double> truncated_abs_derivatives(double u, int n, double eps) {
  std::vector<double> out(n + 1, 0.0);
  const auto& tail = tail_for(eps);
  const double Wt = tail.total_w();
  const double R = 2 / std::sqrt(eps);
  if (std::abs(u) >= R) {
    // |u - t| is linear on supp psi, and psi has no first moment
    const double sign = u > 0 ? 1.0 : -1.0;
    out[0] = sign * u * (1 - Wt);
    if (n >= 1) out[1] = sign * (1 - Wt);
    return out;
  }
  const auto [W, T] = tail.running(u);
  // int |u - t| w(t) dt = u (2W - Wt) - (2T - Tt), Tt = 0 by symmetry
  const double removed = u * (2 * W - Wt) - 2 * T;
  out[0] = abs_derivatives(u, 0)[0] - removed;
  if (n >= 1) out[1] = 2 * truncated_heaviside_derivatives(u, 0, eps)[0] - (1 - Wt);
  if (n >= 2) {
    const auto d = truncated_phi_derivatives(u, n - 2, eps);
    for (int k = 2; k <= n; ++k) out[k] = 2 * d[k - 2];
  }
  return out;
}

std::vector<double> truncated_kernel_derivatives(Kind kind, int order, double u, int n, double eps) {
  std::vector<double> all;
  switch (kind) {
    case Kind::Phi: all = truncated_phi_derivatives(u, order + n, eps); break;
    case Kind::Heaviside: all = truncated_heaviside_derivatives(u, order + n, eps); break;
    case Kind::Abs: all = truncated_abs_derivatives(u, order + n, eps); break;
  }
  return std::vector<double>(all.begin() + order, all.end());
}

}  // namespace gfa::kernels
