#include "doctest.h"
#include "gfa/asymptotics.hpp"

#include <cmath>
#include <random>

using namespace gfa;

namespace {

// Independent slope oracle: normal equations solved via 2x2 Cramer.
double oracle_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = double(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalarNet net(std::function<double(double)> f) {
  return {[f](double e) { return std::complex<double>(f(e)); }, "test", {}};
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(EpsilonGrid({0.5, 0.6, 0.1}, 3), Error);
  CHECK_THROWS_AS(EpsilonGrid({0.5, 0.25}, 3), Error);
  CHECK_THROWS_AS(EpsilonGrid({1.5, 0.25, 0.1}, 3), Error);
  const auto g = EpsilonGrid::standard();
  CHECK(g.size() == 19);
  CHECK(g.tail().size() == 8);
  CHECK(g.smallest() == doctest::Approx(std::ldexp(1.0, -24)));
}

TEST_CASE("valuation of pure powers") {
  const auto g = EpsilonGrid::standard();
  const auto v = estimate_valuation(ScalarNet::power(1.0, 2.0), g);
  CHECK(std::abs(v.exponent - 2.0) <= 0.01);
  CHECK(v.classification == Classification::Moderate);

  const auto z = estimate_valuation(ScalarNet::constant(0.0), g);
  CHECK(z.infinite());
  CHECK(z.classification == Classification::NegligibleAtThreshold);

  const auto inv = estimate_valuation(ScalarNet::power(5.0, -3.0), g);
  CHECK(inv.exponent == doctest::Approx(-3.0).epsilon(1e-9));
}

TEST_CASE("valuation of a two-term net matches the oracle slope") {
  const auto g = EpsilonGrid::standard();
  auto f = [](double e) { return 3 * std::pow(e, 1.5) + e * e * e; };
  const auto v = estimate_valuation(net(f), g);
  std::vector<double> lx, ly;
  for (double e : g.tail()) {
    lx.push_back(std::log(e));
    ly.push_back(std::log(f(e)));
  }
  CHECK(v.exponent == doctest::Approx(oracle_slope(lx, ly)).epsilon(1e-12));
  CHECK(std::abs(v.exponent - 1.5) <= 0.02);
}

TEST_CASE("not evaluable nets raise") {
  const auto g = EpsilonGrid::standard();
  CHECK_THROWS_WITH_AS(estimate_valuation(net([](double) { return NAN; }), g),
                       "net not evaluable", Error);
}

TEST_CASE("classification thresholds") {
  const auto g = EpsilonGrid::standard();
  CHECK(estimate_valuation(net([](double e) { return std::exp(-1.0 / e); }), g).classification ==
        Classification::NegligibleAtThreshold);
  CHECK(estimate_valuation(net([](double e) { return std::exp(std::log(e) * std::log(e)); }), g).classification ==
        Classification::NotModerateAtThreshold);
  CHECK(estimate_valuation(ScalarNet::power(1, 9), g).classification ==
        Classification::NegligibleAtThreshold);
  CHECK(estimate_valuation(ScalarNet::power(1, -10), g).classification ==
        Classification::Moderate);
}

TEST_CASE("sharp distance and balls") {
  const auto g = EpsilonGrid::standard();
  const auto zero = ScalarNet::constant(0.0);
  const auto e1 = ScalarNet::power(1, 1);
  const auto e2 = ScalarNet::power(1, 2);
  CHECK(sharp_distance(e1, e1, g) == 0.0);
  CHECK(std::abs(sharp_distance(e1, zero, g) - std::exp(-1.0)) <= 0.004);
  CHECK(std::abs(sharp_distance(e2, e2 + ScalarNet::power(1, 3), g) - std::exp(-3.0)) <= 0.001);

  CHECK(sharp_ball_contains(zero, std::exp(-2.0), ScalarNet::power(1, 3), g));
  CHECK_FALSE(sharp_ball_contains(zero, std::exp(-2.0), e1, g));
  CHECK(sharp_ball_contains(e1, std::exp(-1.0), e1 + ScalarNet::power(1, 1.2), g));
  CHECK_THROWS_AS(sharp_ball_contains(zero, 1.5, e1, g), Error);
  CHECK_THROWS_AS(sharp_ball_contains(zero, 0.0, e1, g), Error);

  const auto tiny = ScalarNet::from_real([](double e) { return exp(Real50(-1.0) / e); }, "tiny");
  CHECK(equal_in_generalized_numbers(e1, e1 + tiny, g));
  CHECK_FALSE(equal_in_generalized_numbers(e1, e1 + ScalarNet::power(1, 5), g));
  CHECK(equal_in_generalized_numbers(e2, e2, g));
}

TEST_CASE("property: sharp distance is ultrametric and scales") {
  const auto g = EpsilonGrid::standard();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ex(-4.0, 6.0), co(0.5, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = ScalarNet::power(co(rng), ex(rng));
    const auto b = ScalarNet::power(co(rng), ex(rng));
    const auto c = ScalarNet::power(co(rng), ex(rng));
    const double dab = sharp_distance(a, b, g), dbc = sharp_distance(b, c, g),
                 dac = sharp_distance(a, c, g);
    CHECK(dac <= std::max(dab, dbc) * std::exp(0.05));

    // Scaling by eps^k multiplies the distance by e^{-k}.
    const double k = 2.0;
    const auto ek = ScalarNet::power(1.0, k);
    CHECK(sharp_distance(a * ek, b * ek, g) == doctest::Approx(dab * std::exp(-k)).epsilon(1e-2));
  }
}

TEST_CASE("property: scaling by constants does not move the exponent") {
  const auto g = EpsilonGrid::standard();
  for (double c : {1e-6, -3e-3, 0.5, 7.0, -2e4, 1e6})
    for (double a : {-2.0, 0.0, 1.5, 4.0})
      CHECK(std::abs(estimate_valuation(ScalarNet::power(c, a), g).exponent - a) <= 0.01);
}

TEST_CASE("property: valuation is additive under products") {
  const auto g = EpsilonGrid::standard();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ex(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double p = ex(rng), q = ex(rng);
    const auto v = estimate_valuation(ScalarNet::power(2, p) * ScalarNet::power(3, q), g);
    CHECK(v.exponent == doctest::Approx(p + q).epsilon(1e-9));
  }
}

TEST_CASE("property: eps |log eps| has valuation just below one") {
  const auto g = EpsilonGrid::standard();
  const auto v = estimate_valuation(net([](double e) { return e * std::abs(std::log(e)); }), g);
  CHECK(v.exponent >= 0.9);
  CHECK(v.exponent <= 1.0);
}

TEST_CASE("super-polynomial decay is negligible despite a curved fit") {
  const auto g = EpsilonGrid::standard();
  const auto n = ScalarNet::from_real([](double e) { return exp(-Real50(1) / cbrt(Real50(e))); }, "d");
  const auto v = estimate_valuation(n, g);
  CHECK(v.residual > 0.5);
  CHECK(v.exponent > 8);
  CHECK(v.classification == Classification::NegligibleAtThreshold);
}
