#include "gfa/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gfa/asymptotics.hpp"

namespace gfa::spectral {

namespace {

struct Buffer {
  fftw_complex* p;
  explicit Buffer(std::size_t n) : p(fftw_alloc_complex(n)) {
    if (!p) throw Error("fftw allocation failed");
  }
  ~Buffer() { fftw_free(p); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
};

cvec run(const cvec& in, int n0, int n1, int sign) {
  const std::size_t n = in.size();
  Buffer a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.p[i][0] = in[i].real();
    a.p[i][1] = in[i].imag();
  }
  fftw_plan plan = n1 > 0 ? fftw_plan_dft_2d(n0, n1, a.p, b.p, sign, FFTW_ESTIMATE)
                          : fftw_plan_dft_1d(n0, a.p, b.p, sign, FFTW_ESTIMATE);
  if (!plan) throw Error("fftw planning failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  cvec out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {b.p[i][0], b.p[i][1]};
  return out;
}

}  // namespace

cvec fft(const cvec& data, int sign) { return run(data, int(data.size()), 0, sign); }

cvec fft_real(const std::vector<double>& samples) {
  return fft(cvec(samples.begin(), samples.end()), FFTW_FORWARD);
}

cvec fft2_real(const std::vector<double>& samples, int n0, int n1) {
  if (std::size_t(n0) * std::size_t(n1) != samples.size()) throw Error("fft2: shape mismatch");
  return run(cvec(samples.begin(), samples.end()), n0, n1, FFTW_FORWARD);
}

double bin_frequency(int k, int n, double length) {
  const int m = k <= n / 2 ? k : k - n;
  return 2 * std::numbers::pi * m / length;
}

std::vector<double> derivative(const std::vector<double>& samples, double length, int order) {
  const int n = int(samples.size());
  cvec s = fft_real(samples);
  for (int k = 0; k < n; ++k) {
    // The Nyquist bin has no well-defined odd derivative.
    if (n % 2 == 0 && k == n / 2 && order % 2 == 1) {
      s[k] = 0;
      continue;
    }
    const std::complex<double> ik(0.0, bin_frequency(k, n, length));
    s[k] *= std::pow(ik, order);
  }
  const cvec back = fft(s, FFTW_BACKWARD);
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = back[k].real() / n;
  return out;
}

}  // namespace gfa::spectral
