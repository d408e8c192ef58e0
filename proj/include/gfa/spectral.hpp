#pragma once

#include <complex>
#include <vector>

namespace gfa::spectral {

using cvec = std::vector<std::complex<double>>;

/// Forward DFT of real samples, full length (not the half spectrum).
cvec fft_real(const std::vector<double>& samples);
/// In-place style complex DFT; sign = -1 forward, +1 backward (unnormalized).
cvec fft(const cvec& data, int sign);
/// Row-major n0 x n1 forward transform of real data (full complex output).
cvec fft2_real(const std::vector<double>& samples, int n0, int n1);

/// Angular frequency of DFT bin k for n samples over a period `length`.
double bin_frequency(int k, int n, double length);

/// d^order/dx^order of periodic samples on [0, length) via the spectrum.
std::vector<double> derivative(const std::vector<double>& samples, double length, int order);

}  // namespace gfa::spectral
