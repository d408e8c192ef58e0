#include "gfa/microlocal.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <tuple>

#include "gfa/spectral.hpp"

namespace gfa {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double raw_bump(double x) {
  const double s = 1 - x * x;
  return s > 0 ? std::exp(-1 / s) : 0.0;
}

double bump_mass() {
  static const double m = boost::math::quadrature::tanh_sinh<double>().integrate(raw_bump, -1.0, 1.0);
  return m;
}

std::size_t next_pow2(double v) {
  std::size_t p = 1;
  while (double(p) < v) p <<= 1;
  return p;
}

// u^(delta * 2 pi m / L) for m = 0..N/2, by a trapezoid rule whose DFT bins
// land exactly on those frequencies: P nodes with P h = L / delta.
std::vector<double> bump_spectrum(int N, double L, double delta) {
  const std::size_t P = next_pow2(std::max(2.0 * N, 1024.0 * L / delta));
  const double h = L / (delta * double(P));
  std::vector<double> s(P, 0.0);
  for (std::size_t j = 0; j < P; ++j) {
    const double x = (j < P / 2 ? double(j) : double(j) - double(P)) * h;
    s[j] = unit_bump(x);
  }
  const auto F = spectral::fft_real(s);
  std::vector<double> out(N / 2 + 1);
  for (int m = 0; m <= N / 2; ++m) out[m] = h * F[m].real();
  return out;
}

int signed_bin(int k, int N) { return k <= N / 2 ? k : k - N; }

// Fourier-series coefficients of kappa_n relative to the window origin:
// kappa(x) = sum_k c_k e^{i xi_k (x - lo)}.
spectral::cvec cutoff_coefficients(const CutoffSequence& s, int n, const std::vector<double>& uhat) {
  const int N = s.resolution;
  const double L = s.window.width();
  const double c = s.K.center();
  const double w = s.K.width() / 2 + s.r / 3;
  spectral::cvec out(N);
  for (int k = 0; k < N; ++k) {
    const int m = signed_bin(k, N);
    const double xi = 2 * kPi * m / L;
    const double ind = m == 0 ? 2 * w : 2 * std::sin(w * xi) / xi;
    const double u = std::pow(uhat[std::abs(m)], n);
    out[k] = ind * u * std::exp(cd(0, -(c - s.window.lo[0]) * xi)) / L;
  }
  return out;
}

std::vector<double> synthesize(const spectral::cvec& coef, double L, int derivative) {
  const int N = int(coef.size());
  spectral::cvec d(N);
  for (int k = 0; k < N; ++k) {
    const int m = signed_bin(k, N);
    if (derivative > 0 && 2 * std::abs(m) == N) continue;
    d[k] = coef[k] * std::pow(cd(0, 2 * kPi * m / L), derivative);
  }
  const auto v = spectral::fft(d, +1);
  std::vector<double> out(N);
  for (int j = 0; j < N; ++j) out[j] = v[j].real();
  return out;
}

}  // namespace

double unit_bump(double x) { return raw_bump(x) / bump_mass(); }

CutoffSequence CutoffSequence::translated(double shift) const {
  CutoffSequence s = *this;
  for (int a = 0; a < K.dimension; ++a) {
    s.K.lo[a] += shift;
    s.K.hi[a] += shift;
    s.window.lo[a] += shift;
    s.window.hi[a] += shift;
  }
  return s;
}

CutoffSequence build_cutoff_sequence(const Box& K, double r, int n_max, int resolution, double tolerance) {
  if (K.dimension != 1) throw Error("cutoff sequence: 1D box expected");
  if (!(r > 0)) throw Error("cutoff margin must be positive");
  if (n_max < 1 || n_max > 12) throw Error("cutoff order must lie in 1..12");
  CutoffSequence s;
  s.K = K;
  s.r = r;
  s.n_max = n_max;
  s.resolution = resolution;
  const double L = K.width() + 4 * r;
  s.window = Box::interval(K.center() - L / 2, K.center() + L / 2);
  const double h = L / resolution;
  const double narrow = r / (3.0 * n_max);
  if (narrow < 4 * h)
    throw Error("refine grid: bump half-width " + std::to_string(narrow) + " spans fewer than 4 cells of " +
                std::to_string(h));

  double logC = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const auto uhat = bump_spectrum(resolution, L, r / (3.0 * n));
    const auto coef = cutoff_coefficients(s, n, uhat);
    CutoffMember m;
    m.n = n;
    m.values = synthesize(coef, L, 0);
    for (int j = 0; j < resolution; ++j) {
      const double x = s.grid_point(j);
      if (K.contains(x)) m.plateau_error = std::max(m.plateau_error, std::abs(m.values[j] - 1));
      if (x < K.lo[0] - r || x > K.hi[0] + r) m.support_leak = std::max(m.support_leak, std::abs(m.values[j]));
    }
    for (int a = 0; a <= n; ++a) {
      const auto d = a == 0 ? m.values : synthesize(coef, L, a);
      double sup = 0;
      for (double v : d) sup = std::max(sup, std::abs(v));
      m.derivative_sups.push_back(sup);
      if (sup > 0) logC = std::max(logC, (std::log(sup) - a * std::log(n / r)) / (a + 1));
    }
    if (m.plateau_error > tolerance || m.support_leak > tolerance)
      throw Error("cutoff certificate failed at n = " + std::to_string(n));
    s.members.push_back(std::move(m));
  }
  s.C = std::exp(logC);
  return s;
}

CutoffSequence cutoff_for_neighborhoods(const Box& W, const Box& V, int n_max, int resolution) {
  if (!V.contains(W)) throw Error("W must lie inside V");
  const double gap = std::min(W.lo[0] - V.lo[0], V.hi[0] - W.hi[0]);
  if (!(gap > 0)) throw Error("W must lie strictly inside V");
  return build_cutoff_sequence(W, gap, n_max, resolution);
}

CutoffSequence2D build_cutoff_sequence_2d(const Box& K, double r, int n_max, int resolution) {
  if (K.dimension != 2) throw Error("cutoff sequence: 2D box expected");
  CutoffSequence2D s{build_cutoff_sequence(Box::interval(K.lo[0], K.hi[0]), r, n_max, resolution, 1e-7),
                     build_cutoff_sequence(Box::interval(K.lo[1], K.hi[1]), r, n_max, resolution, 1e-7)};
  double logC = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const auto& sx = s.x.member(n).derivative_sups;
    const auto& sy = s.y.member(n).derivative_sups;
    for (int a = 0; a <= n; ++a)
      for (int b = 0; a + b <= n; ++b) {
        const double v = sx[a] * sy[b];
        if (v > 0) logC = std::max(logC, (std::log(v) - (a + b) * std::log(n / r)) / (a + b + 1));
      }
  }
  s.C = std::exp(logC);
  return s;
}

// ---- bounded sequences ------------------------------------------------------------

std::vector<FunctionNet> cutoff_products(const FunctionNet& net, const CutoffSequence& cutoffs) {
  if (net.dimension() != 1) throw Error("cutoff products: 1D net expected");
  if (!net.domain().contains(cutoffs.window)) throw Error("cutoff window outside the net domain");
  const SpatialGrid grid(cutoffs.window, cutoffs.resolution);
  std::vector<FunctionNet> out;
  for (int n = 1; n <= cutoffs.n_max; ++n) {
    const auto kappa = cutoffs.member(n).values;
    auto sampler = [net, kappa, grid](double eps) {
      auto v = net.sample(grid, eps);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] *= kappa[j];
      return v;
    };
    out.push_back(FunctionNet::sampled(sampler, grid, "kappa_" + std::to_string(n) + " f"));
  }
  return out;
}

BoundedSequenceResult bounded_sequence_check(const std::vector<FunctionNet>& members, const EpsilonGrid& grid) {
  constexpr int kMaxM = 16;
  constexpr double kMaxB = 64;
  // sups[m][i]: max over members of sup_xi (1+|xi|)^{-m} |u^|
  std::vector<std::vector<double>> sups(kMaxM + 1, std::vector<double>(grid.size(), 0.0));
  for (const auto& u : members) {
    if (u.dimension() != 1) throw Error("bounded sequence: 1D members expected");
    const SpatialGrid g = u.sample_grid() ? *u.sample_grid() : SpatialGrid::standard(u.domain());
    const int N = g.points_per_axis;
    const double L = g.bounds.width(), h = L / N;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto v = u.sample(g, grid.values()[i]);
      double peak = 0, edge = 0;
      for (int j = 0; j < N; ++j) {
        peak = std::max(peak, std::abs(v[j]));
        if (j < N / 20 || j >= N - N / 20) edge = std::max(edge, std::abs(v[j]));
      }
      if (edge > 1e-12 * std::max(peak, 1e-300) && edge > 0)
        throw Error("member not compactly supported in its window: " + u.label());
      const auto F = spectral::fft_real(v);
      for (int k = 0; k < N; ++k) {
        const double mag = h * std::abs(F[k]);
        const double w = std::log1p(std::abs(spectral::bin_frequency(k, N, L)));
        for (int m = 0; m <= kMaxM; ++m) sups[m][i] = std::max(sups[m][i], mag * std::exp(-m * w));
      }
    }
  }
  BoundedSequenceResult res;
  for (int m = 0; m <= kMaxM; ++m) {
    const auto est = fit_valuation(grid.tail(), std::span<const double>(sups[m]).last(grid.tail().size()));
    const double b = est.infinite() ? 0.0 : std::max(0.0, -est.exponent);
    if (b <= kMaxB) {
      res.bounded = true;
      res.m = m;
      res.b = b;
      return res;
    }
  }
  return res;
}

// ---- Fourier decay --------------------------------------------------------------------

Cone Cone::ray(int sign) {
  if (sign != 1 && sign != -1) throw Error("1D direction must be +1 or -1");
  Cone c;
  c.direction = {double(sign), 0.0};
  return c;
}

Cone Cone::sector(double angle, double half_angle) {
  Cone c;
  c.dimension = 2;
  c.direction = {std::cos(angle), std::sin(angle)};
  c.half_angle = half_angle;
  return c;
}

bool Cone::contains(double xi, double eta) const {
  if (dimension == 1) return xi * direction[0] > 0;
  const double norm = std::hypot(xi, eta);
  if (norm == 0) return false;
  const double cosang = (xi * direction[0] + eta * direction[1]) / norm;
  return cosang >= std::cos(half_angle) - 1e-12;
}

std::string Cone::label() const {
  if (dimension == 1) return direction[0] > 0 ? "+1" : "-1";
  return "angle " + std::to_string(std::atan2(direction[1], direction[0]));
}

double LocalSpectra::nyquist() const { return kPi * size / length; }
double LocalSpectra::frequency(int bin) const { return spectral::bin_frequency(bin, size, length); }

namespace {

// Round-off level of |F(kappa_n f)|: relative to the product itself, and to
// f alone since the cutoff is only zero to about 1e-15 off its support.
constexpr double kFloor = 1e-12;
constexpr double kLeakFloor = 1e-13;
constexpr double kAliasRatio = 1e-6;

void check_aliasing(const std::vector<double>& mag, double floor, int N, int dim) {
  double peak = 0, edge = 0;
  for (std::size_t b = 0; b < mag.size(); ++b) {
    peak = std::max(peak, mag[b]);
    const int k0 = dim == 1 ? int(b) : int(b) / N, k1 = dim == 1 ? 0 : int(b) % N;
    const int m = std::max(std::abs(signed_bin(k0, N)), std::abs(signed_bin(k1, N)));
    if (16 * m >= 7 * N) edge = std::max(edge, mag[b]);
  }
  if (edge > floor && edge > kAliasRatio * peak)
    throw Error("aliasing detected: spectrum near Nyquist is " + std::to_string(edge / peak) + " of its peak");
}

}  // namespace

LocalSpectra local_spectra(const FunctionNet& net, const CutoffSequence& cutoffs, const EpsilonGrid& grid) {
  if (net.dimension() != 1) throw Error("local spectra: 1D net expected");
  if (!net.domain().contains(cutoffs.window)) throw Error("cutoff window outside the net domain");
  LocalSpectra S;
  S.center = {cutoffs.K.center(), 0.0};
  S.eps = grid.values();
  S.n_max = cutoffs.n_max;
  S.size = cutoffs.resolution;
  S.length = cutoffs.window.width();
  const int N = S.size;
  const double h = cutoffs.spacing();
  S.magnitude.assign(S.n_max, std::vector<std::vector<double>>(S.eps.size()));
  S.floor.assign(S.n_max, std::vector<double>(S.eps.size()));
  const SpatialGrid g(cutoffs.window, N);
  for (std::size_t i = 0; i < S.eps.size(); ++i) {
    const auto f = net.sample(g, S.eps[i]);
    double fl1 = 0;
    for (double v : f) fl1 += std::abs(v);
    for (int n = 1; n <= S.n_max; ++n) {
      const auto& kappa = cutoffs.member(n).values;
      std::vector<double> u(N);
      double l1 = 0;
      for (int j = 0; j < N; ++j) {
        u[j] = kappa[j] * f[j];
        l1 += std::abs(u[j]);
      }
      // the cutoff's own error rings across the whole band
      const auto& mem = cutoffs.member(n);
      l1 += std::max(kLeakFloor, std::max(mem.plateau_error, mem.support_leak)) / kFloor * fl1;
      const auto F = spectral::fft_real(u);
      auto& mag = S.magnitude[n - 1][i];
      mag.resize(N);
      for (int k = 0; k < N; ++k) mag[k] = h * std::abs(F[k]);
      S.floor[n - 1][i] = kFloor * h * l1;
      check_aliasing(mag, S.floor[n - 1][i], N, 1);
    }
  }
  return S;
}

LocalSpectra local_spectra(const FunctionNet& net, const CutoffSequence2D& cutoffs, const EpsilonGrid& grid) {
  if (net.dimension() != 2) throw Error("local spectra: 2D net expected");
  const Box window = Box::rect(cutoffs.x.window.lo[0], cutoffs.x.window.hi[0], cutoffs.y.window.lo[0],
                               cutoffs.y.window.hi[0]);
  if (!net.domain().contains(window)) throw Error("cutoff window outside the net domain");
  if (cutoffs.x.resolution != cutoffs.y.resolution ||
      std::abs(cutoffs.x.window.width() - cutoffs.y.window.width()) > 1e-12)
    throw Error("2D cutoffs need a square window");
  LocalSpectra S;
  S.dimension = 2;
  S.center = {cutoffs.x.K.center(), cutoffs.y.K.center()};
  S.eps = grid.values();
  S.n_max = cutoffs.n_max();
  S.size = cutoffs.x.resolution;
  S.length = cutoffs.x.window.width();
  const int N = S.size;
  const double h = cutoffs.x.spacing();
  S.magnitude.assign(S.n_max, std::vector<std::vector<double>>(S.eps.size()));
  S.floor.assign(S.n_max, std::vector<double>(S.eps.size()));
  const SpatialGrid g(window, N);
  for (std::size_t i = 0; i < S.eps.size(); ++i) {
    const auto f = net.sample(g, S.eps[i]);  // index = ix * N + iy
    double fl1 = 0;
    for (double v : f) fl1 += std::abs(v);
    for (int n = 1; n <= S.n_max; ++n) {
      const auto& kx = cutoffs.x.member(n).values;
      const auto& ky = cutoffs.y.member(n).values;
      std::vector<double> u(std::size_t(N) * N);
      double l1 = 0;
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
          const std::size_t idx = std::size_t(a) * N + b;
          u[idx] = f[idx] * kx[a] * ky[b];
          l1 += std::abs(u[idx]);
        }
      const auto& mx = cutoffs.x.member(n);
      const auto& my = cutoffs.y.member(n);
      const double ring = std::max({mx.plateau_error, mx.support_leak}) + std::max({my.plateau_error, my.support_leak});
      l1 += std::max(kLeakFloor, ring) / kFloor * fl1;
      const auto F = spectral::fft2_real(u, N, N);
      auto& mag = S.magnitude[n - 1][i];
      mag.resize(F.size());
      for (std::size_t k = 0; k < F.size(); ++k) mag[k] = h * h * std::abs(F[k]);
      S.floor[n - 1][i] = kFloor * h * h * l1;
      check_aliasing(mag, S.floor[n - 1][i], N, 2);
    }
  }
  return S;
}

DecayFit fourier_decay_fit(const LocalSpectra& S, const Cone& cone, double slack) {
  if (cone.dimension != S.dimension) throw Error("cone dimension does not match the spectra");
  const double top = cone.xi_max > 0 ? cone.xi_max : S.nyquist() / 4;
  if (top > S.nyquist() / 2) throw Error("cone band beyond the Nyquist limit");
  if (cone.xi_min >= top) throw Error("cone band is empty");

  // bins in the cone band and their weights log(1+|xi|)
  std::vector<std::size_t> bins;
  std::vector<double> logw;
  const int N = S.size;
  const std::size_t total = S.dimension == 1 ? std::size_t(N) : std::size_t(N) * N;
  for (std::size_t b = 0; b < total; ++b) {
    const double xi = S.frequency(S.dimension == 1 ? int(b) : int(b) / N);
    const double eta = S.dimension == 1 ? 0.0 : S.frequency(int(b) % N);
    const double norm = std::hypot(xi, eta);
    if (norm < cone.xi_min || norm > top || !cone.contains(xi, eta)) continue;
    bins.push_back(b);
    logw.push_back(std::log1p(norm));
  }
  if (bins.empty()) throw Error("cone band holds no frequency bins");

  const std::size_t m = S.eps.size();
  DecayFit fit;
  fit.log_envelope.assign(S.n_max, std::vector<double>(m, kNegInf));
  std::vector<std::vector<double>> plain(S.n_max, std::vector<double>(m, 0.0));
  for (int n = 1; n <= S.n_max; ++n)
    for (std::size_t i = 0; i < m; ++i) {
      const auto& mag = S.magnitude[n - 1][i];
      const double fl = S.floor[n - 1][i];
      for (std::size_t t = 0; t < bins.size(); ++t) {
        const double v = mag[bins[t]];
        if (!(v > fl)) continue;
        plain[n - 1][i] = std::max(plain[n - 1][i], v);
        fit.log_envelope[n - 1][i] = std::max(fit.log_envelope[n - 1][i], std::log(v) + n * logw[t]);
      }
    }

  // a from the eps-trend of sup |u^| at each n
  double amax = 0.0;
  for (int n = 1; n <= S.n_max; ++n) {
    const auto est = fit_valuation(S.eps, plain[n - 1]);
    if (std::isfinite(est.exponent)) amax = std::max(amax, -est.exponent);
  }
  fit.a = amax;

  // C from the larger half of the eps values, all n
  const std::size_t half = (m + 1) / 2;
  double logC = kNegInf;
  auto compensated = [&](int n, std::size_t i) { return fit.log_envelope[n - 1][i] + fit.a * std::log(S.eps[i]); };
  for (int n = 1; n <= S.n_max; ++n)
    for (std::size_t i = 0; i < half; ++i) {
      const double E = compensated(n, i);
      if (E > kNegInf) logC = std::max(logC, (E - n * std::log(double(n))) / (n + 1));
    }
  if (logC == kNegInf) logC = 0.0;
  fit.C = std::exp(logC);

  fit.margins.assign(S.n_max, kInfinity);
  for (int n = 1; n <= S.n_max; ++n)
    for (std::size_t i = 0; i < m; ++i) {
      const double E = compensated(n, i);
      if (E == kNegInf) continue;
      const double bound = (n + 1) * logC + n * std::log(double(n));
      fit.margins[n - 1] = std::min(fit.margins[n - 1], bound - E);
    }
  fit.worst_margin = *std::min_element(fit.margins.begin(), fit.margins.end());
  fit.pass = fit.worst_margin >= -slack;
  return fit;
}

DecayFit fourier_decay_fit(const FunctionNet& net, const CutoffSequence& cutoffs, const Cone& cone,
                           const EpsilonGrid& grid, double slack) {
  return fourier_decay_fit(local_spectra(net, cutoffs, grid), cone, slack);
}

// ---- microanalyticity and wave fronts ----------------------------------------------------

std::string to_string(MicroVerdict v) {
  switch (v) {
    case MicroVerdict::Microanalytic: return "microanalytic";
    case MicroVerdict::Singular: return "singular";
    case MicroVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

EpsilonGrid microlocal_grid() { return EpsilonGrid::dyadic(4, 9, 6); }
EpsilonGrid microlocal_grid_2d() { return EpsilonGrid::dyadic(4, 7, 4); }

MicroVerdict verdict_from_margin(double worst_margin, double slack) {
  if (worst_margin >= -slack) return MicroVerdict::Microanalytic;
  if (worst_margin >= -2 * slack) return MicroVerdict::Inconclusive;
  return MicroVerdict::Singular;
}

namespace {

// kappa_n == 1 on W = ball(x0, r/3), supported in V = ball(x0, r). The
// samples do not depend on x0, so one sequence is built and translated.
CutoffSequence probe_cutoffs(double x0, const MicrolocalOptions& opt) {
  static thread_local std::map<std::tuple<double, int, int>, CutoffSequence> cache;
  const auto key = std::make_tuple(opt.radius, opt.n_max, opt.resolution);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, cutoff_for_neighborhoods(Box::ball(0, opt.radius / 3), Box::ball(0, opt.radius),
                                                     opt.n_max, opt.resolution)).first;
  return it->second.translated(x0);
}

CutoffSequence2D probe_cutoffs_2d(double x0, double y0, const MicrolocalOptions& opt) {
  static thread_local std::map<std::tuple<double, int, int>, CutoffSequence2D> cache;
  const auto key = std::make_tuple(opt.radius, opt.n_max_2d, opt.resolution_2d);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const double w = opt.radius / 3;
    it = cache.emplace(key, build_cutoff_sequence_2d(Box::rect(-w, w, -w, w), 2 * opt.radius / 3, opt.n_max_2d,
                                                     opt.resolution_2d)).first;
  }
  return {it->second.x.translated(x0), it->second.y.translated(y0), it->second.C};
}

void summarize(WaveFrontReport& r) {
  std::vector<std::array<double, 2>> seen;
  for (const auto& p : r.probes)
    if (std::find(seen.begin(), seen.end(), p.point) == seen.end()) seen.push_back(p.point);
  for (const auto& pt : seen) {
    bool singular = false, unsure = false;
    for (const auto& p : r.probes) {
      if (p.point != pt) continue;
      singular = singular || p.verdict == MicroVerdict::Singular;
      unsure = unsure || p.verdict == MicroVerdict::Inconclusive;
    }
    if (singular)
      r.singular_support.push_back(pt);
    else if (unsure)
      r.inconclusive.push_back(pt);
  }
}

}  // namespace

ProbeResult microanalytic_test(const FunctionNet& net, double x0, int sign, const EpsilonGrid& grid,
                               const MicrolocalOptions& opt) {
  const auto S = local_spectra(net, probe_cutoffs(x0, opt), grid);
  ProbeResult p;
  p.point = {x0, 0.0};
  p.cone = Cone::ray(sign);
  p.fit = fourier_decay_fit(S, p.cone, opt.slack);
  p.verdict = verdict_from_margin(p.fit.worst_margin, opt.slack);
  return p;
}

std::vector<std::pair<double, int>> WaveFrontReport::singular_pairs() const {
  std::vector<std::pair<double, int>> out;
  for (const auto& p : probes)
    if (p.verdict == MicroVerdict::Singular) out.emplace_back(p.point[0], p.cone.direction[0] > 0 ? 1 : -1);
  return out;
}

WaveFrontReport wavefront_estimate(const FunctionNet& net, const std::vector<double>& points,
                                   const std::vector<int>& directions, const EpsilonGrid& grid,
                                   const MicrolocalOptions& opt) {
  WaveFrontReport r;
  for (double x0 : points) {
    const auto S = local_spectra(net, probe_cutoffs(x0, opt), grid);
    for (int sign : directions) {
      ProbeResult p;
      p.point = {x0, 0.0};
      p.cone = Cone::ray(sign);
      p.fit = fourier_decay_fit(S, p.cone, opt.slack);
      p.verdict = verdict_from_margin(p.fit.worst_margin, opt.slack);
      r.probes.push_back(std::move(p));
    }
  }
  summarize(r);
  return r;
}

WaveFrontReport wavefront_estimate_2d(const FunctionNet& net, const std::vector<std::array<double, 2>>& points,
                                      const EpsilonGrid& grid, const MicrolocalOptions& opt) {
  if (opt.sectors < 1) throw Error("need at least one sector");
  WaveFrontReport r;
  r.dimension = 2;
  for (const auto& pt : points) {
    const auto S = local_spectra(net, probe_cutoffs_2d(pt[0], pt[1], opt), grid);
    for (int k = 0; k < opt.sectors; ++k) {
      ProbeResult p;
      p.point = pt;
      p.cone = Cone::sector(2 * kPi * k / opt.sectors, opt.half_angle);
      p.fit = fourier_decay_fit(S, p.cone, opt.slack);
      p.verdict = verdict_from_margin(p.fit.worst_margin, opt.slack);
      r.probes.push_back(std::move(p));
    }
  }
  summarize(r);
  return r;
}

bool projection_check(const WaveFrontReport& report, const SingularSupport& singsupp) {
  if (report.dimension != 1) throw Error("projection check: 1D report expected");
  auto has = [](const std::vector<double>& v, double x) {
    return std::any_of(v.begin(), v.end(), [x](double y) { return std::abs(x - y) < 1e-12; });
  };
  std::vector<double> wf_points, an_points;
  for (const auto& p : report.probes)
    if (!has(wf_points, p.point[0])) wf_points.push_back(p.point[0]);
  for (const auto& rep : singsupp.reports) an_points.push_back(rep.point);
  if (wf_points.size() != an_points.size() ||
      !std::all_of(wf_points.begin(), wf_points.end(), [&](double x) { return has(an_points, x); }))
    throw Error("probe mismatch between the wave front report and the singular support");

  std::vector<double> wf_sing, wf_unsure;
  for (const auto& pt : report.singular_support) wf_sing.push_back(pt[0]);
  for (const auto& pt : report.inconclusive) wf_unsure.push_back(pt[0]);
  for (double x : wf_points) {
    if (has(wf_unsure, x) || has(singsupp.inconclusive, x)) continue;
    if (has(wf_sing, x) != has(singsupp.singular, x)) return false;
  }
  return true;
}

namespace {

// kappa^{(j)}(x) from the Fourier series, for points off the window grid.
double series_eval(const spectral::cvec& coef, double L, double t, int j) {
  const int N = int(coef.size());
  const cd step = std::exp(cd(0, 2 * kPi * t / L));
  cd rot = 1.0, acc = 0.0;
  for (int m = 0; m < N / 2; ++m) {
    const cd d = j == 0 ? cd(1.0) : std::pow(cd(0, 2 * kPi * m / L), j);
    acc += (m == 0 ? 1.0 : 2.0) * coef[m] * d * rot;
    rot *= step;
  }
  return acc.real();
}

struct Node {
  double x, w;
};

// Gauss panels on [a, b] split at the given points, at most `width` wide.
std::vector<Node> panel_nodes(double a, double b, std::vector<double> cuts, double width) {
  using G = boost::math::quadrature::gauss<double, 20>;
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Node> out;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = std::max(a, cuts[s]), hi = std::min(b, cuts[s + 1]);
    if (!(hi > lo)) continue;
    const int panels = int(std::ceil((hi - lo) / width));
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * h;
      for (std::size_t q = 0; q < G::abscissa().size(); ++q) {
        const double z = G::abscissa()[q], w = G::weights()[q] * h / 2;
        out.push_back({mid + z * h / 2, w});
        if (z != 0) out.push_back({mid - z * h / 2, w});
      }
    }
  }
  return out;
}

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

ClassicalDecay classical_decay_test(const DistributionSpec& dist, double x0, int sign,
                                    const MicrolocalOptions& opt) {
  if (sign != 1 && sign != -1) throw Error("direction must be +1 or -1");
  const auto s = probe_cutoffs(x0, opt);
  const int N = s.resolution;
  const double L = s.window.width();
  const double lo = s.window.lo[0];
  const double top = kPi * N / L / 4;
  const double fit_top = top / 8;
  std::vector<double> xis;
  constexpr int count = 160;  // log-spaced, no DFT bins involved
  for (int b = 0; b < count; ++b) xis.push_back(sign * 16 * std::pow(top / 16, b / double(count - 1)));

  // kappa_n vanishes outside ball(x0, 7r/9)
  const double reach = 0.8 * opt.radius;
  std::vector<double> cuts;
  std::vector<const DistributionTerm*> points, regular;
  for (const auto& t : dist.terms) {
    if (t.coefficient == 0) continue;
    if (t.kind == DistKind::Delta || t.kind == DistKind::DeltaDerivative) {
      if (std::abs(t.location - x0) < reach) points.push_back(&t);
    } else {
      regular.push_back(&t);
      if (t.kind != DistKind::Smooth) cuts.push_back(t.location);
    }
  }
  const auto nodes = panel_nodes(x0 - reach, x0 + reach, cuts, 8.0 / top);
  std::vector<double> g(nodes.size(), 0.0);
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    for (const auto* t : regular) {
      const double u = nodes[q].x - t->location;
      switch (t->kind) {
        case DistKind::Heaviside: g[q] += t->coefficient * (u > 0 ? 1.0 : 0.0); break;
        case DistKind::AbsX: g[q] += t->coefficient * std::abs(u); break;
        default: g[q] += t->coefficient * t->smooth->eval(u, 0.0, 1.0); break;
      }
    }
  }

  ClassicalDecay out;
  std::vector<std::vector<double>> logs(s.n_max);  // log (1+|xi|)^n |F|, -inf below the floor
  for (int n = 1; n <= s.n_max; ++n) {
    const auto coef = cutoff_coefficients(s, n, bump_spectrum(N, L, s.r / (3.0 * n)));
    std::vector<double> kg(nodes.size());
    double scale = 0;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      kg[q] = g[q] == 0 ? 0.0 : g[q] * series_eval(coef, L, nodes[q].x - lo, 0);
      scale += nodes[q].w * std::abs(kg[q]);
    }
    struct PointData {
      double c, p;
      int k;
      std::vector<double> kappa;  // kappa^{(j)}(p), j = 0..k
    };
    std::vector<PointData> pd;
    for (const auto* t : points) {
      PointData d{t->coefficient, t->location, t->kind == DistKind::Delta ? 0 : t->order, {}};
      for (int j = 0; j <= d.k; ++j) {
        d.kappa.push_back(series_eval(coef, L, d.p - lo, j));
        scale += std::abs(d.c * d.kappa.back());
      }
      pd.push_back(std::move(d));
    }
    const double floor = kFloor * scale;
    for (double xi : xis) {
      cd F = 0;
      for (std::size_t q = 0; q < nodes.size(); ++q)
        if (kg[q] != 0) F += nodes[q].w * kg[q] * std::exp(cd(0, -xi * nodes[q].x));
      // <d^k delta_p, kappa e^{-i x xi}> = (-1)^k (kappa e^{-i x xi})^{(k)}(p)
      for (const auto& d : pd) {
        cd acc = 0;
        for (int j = 0; j <= d.k; ++j) acc += binom(d.k, j) * d.kappa[j] * std::pow(cd(0, -xi), d.k - j);
        F += d.c * (d.k % 2 ? -1.0 : 1.0) * acc * std::exp(cd(0, -xi * d.p));
      }
      const double mag = std::abs(F);
      logs[n - 1].push_back(mag > floor ? std::log(mag) + n * std::log1p(std::abs(xi)) : kNegInf);
    }
  }

  double logC = 0;
  for (int n = 1; n <= s.n_max; ++n)
    for (std::size_t b = 0; b < xis.size(); ++b)
      if (std::abs(xis[b]) <= fit_top && std::isfinite(logs[n - 1][b]))
        logC = std::max(logC, (logs[n - 1][b] - n * std::log(double(n))) / (n + 1));
  out.C = std::exp(logC);
  for (int n = 1; n <= s.n_max; ++n) {
    double env = kNegInf, margin = kInfinity;
    for (double v : logs[n - 1]) {
      env = std::max(env, v);
      if (std::isfinite(v)) margin = std::min(margin, (n + 1) * logC + n * std::log(double(n)) - v);
    }
    out.log_envelope.push_back(env);
    out.margins.push_back(margin);
    out.worst_margin = std::min(out.worst_margin, margin);
  }
  out.verdict = verdict_from_margin(out.worst_margin, opt.slack);
  return out;
}

std::vector<std::pair<double, int>> known_wavefront(const DistributionSpec& dist,
                                                    const std::vector<double>& points) {
  std::vector<std::pair<double, int>> out;
  for (double x : points) {
    // merge equal terms first so that cancelling coefficients drop out
    std::map<std::pair<int, int>, double> sum;
    for (const auto& t : dist.terms)
      if (t.kind != DistKind::Smooth && std::abs(t.location - x) < 1e-12)
        sum[{int(t.kind), t.kind == DistKind::DeltaDerivative ? t.order : 0}] += t.coefficient;
    if (std::any_of(sum.begin(), sum.end(), [](const auto& e) { return e.second != 0; })) {
      out.emplace_back(x, -1);
      out.emplace_back(x, 1);
    }
  }
  return out;
}

}  // namespace gfa
