#include "doctest.h"
#include "gfa/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

using namespace gfa;
namespace K = gfa::kernels;
using boost::math::quadrature::gauss_kronrod;

namespace {

// Oracle: adaptive Gauss-Kronrod on the spectral side, split at the
// plateau edge.
double oracle_phi_k(double u, int k) {
  auto f = [u, k](double xi) {
    return K::chi<double>(xi) * std::pow(xi, k) * std::cos(u * xi + k * M_PI / 2);
  };
  const double a = gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14);
  const double b = gauss_kronrod<double, 61>::integrate(f, 1.0, 2.0, 15, 1e-14);
  return (a + b) / M_PI;
}

double oracle_physical(const std::function<double(double)>& f, double a, double b) {
  double total = 0;
  for (double s = a; s < b; s += 1.0)
    total += gauss_kronrod<double, 61>::integrate(f, s, std::min(s + 1.0, b), 0, 1e-14);
  return total;
}

}  // namespace

TEST_CASE("plateau function") {
  CHECK(K::chi(0.0) == 1.0);
  CHECK(K::chi(1.0) == 1.0);
  CHECK(K::chi(-0.9) == 1.0);
  CHECK(K::chi(2.0) == 0.0);
  CHECK(K::chi(1.5) == doctest::Approx(0.5));
  CHECK(K::chi(1.3) + K::chi(1.7) == doctest::Approx(1.0));
  const auto d = K::chi_derivatives(1.3, 3);
  const double h = 1e-4;
  CHECK(d[1] == doctest::Approx((K::chi(1.3 + h) - K::chi(1.3 - h)) / (2 * h)).epsilon(1e-6));
  CHECK(d[2] == doctest::Approx((K::chi(1.3 + h) - 2 * K::chi(1.3) + K::chi(1.3 - h)) / (h * h)).epsilon(1e-4));
  CHECK(d[1] == doctest::Approx(K::chi_prime<double>(1.3)).epsilon(1e-12));
}

TEST_CASE("mollifier values and derivatives agree with the oracle") {
  for (double u : {0.0, 0.5, 1.0, 3.7, 10.0, 25.0, -7.5}) {
    const auto d = K::phi_derivatives(u, 8);
    for (int k = 0; k <= 8; ++k) CHECK(std::abs(d[k] - oracle_phi_k(u, k)) < 1e-12);
  }
  CHECK(K::phi(0.0) > 0.47);
  CHECK(K::phi(0.0) < 0.48);
  CHECK(K::phi(1e4) == 0.0);
}

TEST_CASE("mollifier decays faster than the tenth power") {
  // |phi(u)| (1+u)^10 stays bounded: it peaks in the interior and then falls.
  double best = 0, where = 0;
  for (double u = 0; u <= 400; u += 0.5) {
    const double w = std::abs(K::phi(u)) * std::pow(1 + u, 10);
    if (w > best) {
      best = w;
      where = u;
    }
  }
  CHECK(where > 50);
  CHECK(where < 300);
  CHECK(best < 1e15);
  const double tail = std::abs(oracle_phi_k(390.0, 0)) * std::pow(391.0, 10);
  CHECK(tail < 0.1 * best);
}

TEST_CASE("heaviside kernel") {
  CHECK(K::heaviside_derivatives(0.0, 0)[0] == doctest::Approx(0.5).epsilon(1e-14));
  for (double u : {0.5, 2.0, 6.0}) {
    const double want = 0.5 + oracle_physical([](double t) { return K::phi(t); }, 0.0, u);
    CHECK(K::heaviside_derivatives(u, 0)[0] == doctest::Approx(want).epsilon(1e-12));
    CHECK(K::heaviside_derivatives(-u, 0)[0] == doctest::Approx(1 - want).epsilon(1e-12));
  }
  CHECK(K::heaviside_derivatives(900.0, 0)[0] == 1.0);
  const auto d = K::heaviside_derivatives(1.2, 3);
  const auto p = K::phi_derivatives(1.2, 2);
  for (int k = 1; k <= 3; ++k) CHECK(d[k] == doctest::Approx(p[k - 1]));
}

TEST_CASE("absolute value kernel") {
  const double a0 = oracle_physical([](double t) { return 2 * t * K::phi(t); }, 0.0, 400.0);
  CHECK(K::abs_derivatives(0.0, 0)[0] == doctest::Approx(a0).epsilon(1e-8));
  CHECK(K::abs_derivatives(700.0, 0)[0] == doctest::Approx(700.0).epsilon(1e-12));
  const double u = 1.7, h = 1e-3;
  const auto d = K::abs_derivatives(u, 3);
  const double fd2 = (K::abs_derivatives(u + h, 0)[0] - 2 * d[0] + K::abs_derivatives(u - h, 0)[0]) / (h * h);
  CHECK(fd2 == doctest::Approx(2 * K::phi(u)).epsilon(1e-5));
  CHECK(d[2] == doctest::Approx(2 * K::phi(u)).epsilon(1e-12));
  // Symmetric kernel: A is even.
  CHECK(K::abs_derivatives(-u, 0)[0] == doctest::Approx(d[0]).epsilon(1e-13));
}

TEST_CASE("multiprecision kernel agrees with double") {
  using R = boost::multiprecision::cpp_bin_float_50;
  const auto mp = K::phi_derivatives_t<R>(R(12.5), 3, 2000.0);
  const auto dd = K::phi_derivatives(12.5, 3);
  for (int k = 0; k <= 3; ++k) CHECK(static_cast<double>(mp[k]) == doctest::Approx(dd[k]).epsilon(1e-10));
}
