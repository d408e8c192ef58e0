#include "doctest.h"
#include "gfa/jet.hpp"

#include <cmath>

using namespace gfa;
using J = Jet<double>;

namespace {
double fact(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}
}  // namespace

TEST_CASE("elementary jets match closed-form derivatives") {
  const int n = 20;
  const double x0 = 0.3;
  const J x = J::variable(x0, n);
  const J e = exp(x * 2.0);
  const J s = sin(x), c = cos(x);
  const J l = log(x);
  for (int k = 0; k <= n; ++k) {
    CHECK(derivative(e, k) == doctest::Approx(std::pow(2.0, k) * std::exp(2 * x0)).epsilon(1e-12));
    CHECK(derivative(s, k) == doctest::Approx(std::sin(x0 + k * M_PI / 2)).epsilon(1e-12));
    CHECK(derivative(c, k) == doctest::Approx(std::cos(x0 + k * M_PI / 2)).epsilon(1e-12));
    if (k >= 1)
      CHECK(derivative(l, k) ==
            doctest::Approx((k % 2 ? 1.0 : -1.0) * fact(k - 1) / std::pow(x0, k)).epsilon(1e-10));
  }
  const J sh = sinh(x), ch = cosh(x);
  for (int k = 0; k <= n; ++k) {
    CHECK(derivative(sh, k) == doctest::Approx(k % 2 ? std::cosh(x0) : std::sinh(x0)));
    CHECK(derivative(ch, k) == doctest::Approx(k % 2 ? std::sinh(x0) : std::cosh(x0)));
  }
}

TEST_CASE("algebraic identities hold coefficientwise") {
  const int n = 15;
  const J x = J::variable(0.7, n);
  const J a = sqrt(x) * sqrt(x) - x;
  const J b = tanh(x) - sinh(x) / cosh(x);
  const J c = sech(x) - J(1.0) / cosh(x);
  const J d = pow(x, 2.5) - x * x * sqrt(x);
  const J e = pow(x, -3.0) * x * x * x - J(1.0);
  const J f = log(exp(x)) - x;
  for (int k = 0; k <= n; ++k) {
    CHECK(std::abs(a.at(k)) < 1e-12);
    CHECK(std::abs(b.at(k)) < 1e-12);
    CHECK(std::abs(c.at(k)) < 1e-12);
    CHECK(std::abs(d.at(k)) < 1e-11);
    CHECK(std::abs(e.at(k)) < 1e-9);
    CHECK(std::abs(f.at(k)) < 1e-12);
  }
}

TEST_CASE("sech stays finite where cosh overflows") {
  const double eps = std::ldexp(1.0, -24);
  const J x = J::variable(0.5, 6);
  const J v = x * sech(x * (1.0 / eps));
  for (int k = 0; k <= 6; ++k) CHECK(std::isfinite(v.at(k)));
  CHECK(v.at(0) == 0.0);
}

TEST_CASE("t sech(t/eps) at the origin follows the Euler numbers") {
  const double eps = 0.1;
  const int n = 7;
  const J x = J::variable(0.0, n);
  const J v = x * sech(x * (1.0 / eps));
  // sech(t) = 1 - t^2/2 + 5 t^4/24 - 61 t^6/720
  const double E[] = {1, -1, 5, -61};
  for (int m = 0; m < 4; ++m) {
    CHECK(v.at(2 * m + 1) == doctest::Approx(E[m] / fact(2 * m) / std::pow(eps, 2 * m)).epsilon(1e-12));
    CHECK(std::abs(v.at(2 * m)) < 1e-12);
  }
}

TEST_CASE("composition through a derivative oracle matches the native jet") {
  auto exp_oracle = [](double u, int m) { return std::vector<double>(m + 1, std::exp(u)); };
  const J x = J::variable(0.2, 12);
  const J g = sin(x) * 3.0;
  const J a = apply_scalar(exp_oracle, g);
  const J b = exp(g);
  for (int k = 0; k <= 12; ++k) CHECK(a.at(k) == doctest::Approx(b.at(k)).epsilon(1e-12));
  const J lin = x * 2.0 - J(0.1);
  const J c = apply_scalar(exp_oracle, lin), d = exp(lin);
  for (int k = 0; k <= 12; ++k) CHECK(c.at(k) == doctest::Approx(d.at(k)).epsilon(1e-12));
}

TEST_CASE("nested jets give mixed partials") {
  using J2 = Jet<J>;
  const int n = 6;
  const J2 x = J2::variable(J(0.0), n);
  const J2 y = J2::constant(J::variable(0.0, n));
  const J2 f = exp(x * y);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      const double expect = a == b ? 1.0 / fact(a) : 0.0;
      CHECK(f.at(a).at(b) == doctest::Approx(expect).epsilon(1e-12));
    }
  auto exp_oracle = [](double u, int m) { return std::vector<double>(m + 1, std::exp(u)); };
  const J2 g = apply_scalar(exp_oracle, x * y + x);
  const J2 h = exp(x * y + x);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) CHECK(g.at(a).at(b) == doctest::Approx(h.at(a).at(b)).epsilon(1e-12));
}

TEST_CASE("abs and domain errors") {
  CHECK(abs(J::variable(-2.0, 3)).at(1) == -1.0);
  CHECK_THROWS_AS(abs(J::variable(0.0, 3)), Error);
  CHECK_THROWS_AS(log(J::variable(-1.0, 3)), Error);
  CHECK_THROWS_AS(pow(J::variable(-1.0, 3), 0.5), Error);
  CHECK(pow(J::variable(-2.0, 3), 3.0).at(0) == -8.0);
}
