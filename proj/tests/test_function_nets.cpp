#include "doctest.h"
#include "gfa/function_nets.hpp"
#include "gfa/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

using namespace gfa;

namespace {

const char* kExample1 = "x/cosh(x/eps)";

double oracle_phi0() {
  auto f = [](double xi) { return kernels::chi<double>(xi); };
  using boost::math::quadrature::gauss_kronrod;
  return (gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 0) +
          gauss_kronrod<double, 61>::integrate(f, 1.0, 2.0, 15, 1e-15)) /
         M_PI;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(SpatialGrid(Box::interval(0, 1), 100), Error);
  CHECK_THROWS_AS(SpatialGrid(Box::interval(0, 1), 32), Error);
  CHECK(SpatialGrid::standard(Box::interval(0, 1)).points_per_axis == 4096);
  CHECK(SpatialGrid::standard(Box::rect(0, 1, 0, 1)).points_per_axis == 512);
  CHECK_THROWS_AS(Box::interval(1, 1), Error);
}

TEST_CASE("seminorm examples") {
  const auto one = FunctionNet::symbolic("1", Box::interval(-2, 2));
  CHECK(seminorm(one, 0, Box::interval(-1, 1), 0.01) == 1.0);
  const auto x = FunctionNet::symbolic("x", Box::interval(-2, 2));
  CHECK(seminorm(x, 1, Box::interval(-2, 2), 0.01) == 2.0);
  const auto delta = FunctionNet::symbolic("emb(delta)", Box::interval(-2, 2));
  const double eps = std::ldexp(1.0, -10);
  const double want = oracle_phi0() * 1024;
  CHECK(std::abs(seminorm(delta, 0, Box::interval(-1, 1), eps) / want - 1) < 0.01);
}

TEST_CASE("classification examples") {
  const auto g = EpsilonGrid::standard();
  const auto e2 = FunctionNet::symbolic("eps^2", Box::interval(-1, 1));
  const auto c = classify_function_net(e2, g, Box::interval(-1, 1), 3, 256);
  CHECK(std::abs(c.per_order[0].exponent - 2.0) < 0.01);
  for (const auto& v : c.per_order) CHECK(v.exponent >= 2.0 - 0.01);

  const auto ex1 = FunctionNet::symbolic(kExample1, Box::interval(-3, 3));
  const auto away = classify_function_net(ex1, g, Box::interval(1, 2), 4, 512);
  for (const auto& v : away.per_order) CHECK(v.exponent >= 8.0);
  CHECK(away.overall == Classification::NegligibleAtThreshold);

  const auto near = classify_function_net(ex1, g, Box::interval(-1, 1), 3, 512);
  for (int n = 0; n <= 3; ++n) CHECK(std::abs(near.per_order[n].exponent - (1 - n)) < 0.05);
  CHECK(near.overall == Classification::Moderate);
}

TEST_CASE("evaluation at generalized points") {
  const auto g = EpsilonGrid::standard();
  const auto ex1 = FunctionNet::symbolic(kExample1, Box::interval(-3, 3));
  const auto at1 = estimate_valuation(evaluate_at_point(ex1, GeneralizedPoint::classical(1.0)), g);
  CHECK(at1.classification == Classification::NegligibleAtThreshold);

  const auto xe = GeneralizedPoint::net(ScalarNet::power(1, 1), Box::interval(-1, 1));
  const auto net = evaluate_at_point(ex1, xe);
  CHECK(net(0.01).real() == doctest::Approx(0.01 / std::cosh(1.0)).epsilon(1e-12));
  CHECK(std::abs(estimate_valuation(net, g).exponent - 1.0) < 1e-6);

  const auto c = FunctionNet::symbolic("3.5", Box::interval(-1, 1));
  CHECK(evaluate_at_point(c, GeneralizedPoint::classical(0.3))(0.1).real() == 3.5);

  const auto far = GeneralizedPoint::net(ScalarNet::constant(5.0), Box::interval(4, 6));
  CHECK_THROWS_AS(evaluate_at_point(c, far)(0.1), Error);
}

TEST_CASE("property: derivative oracle agrees with finite differences") {
  const double eps = std::ldexp(1.0, -10);
  for (const char* text : {kExample1, "emb(heaviside)", "exp(-x^2)*sin(x/eps)"}) {
    const auto net = FunctionNet::symbolic(text, Box::interval(-1, 1));
    for (double x : {0.0, 1.7 * eps, -2.3 * eps, 0.2}) {
      const auto d = net.derivatives(x, eps, 3);
      const double h = eps * 1e-2;
      for (int k = 1; k <= 3; ++k) {
        auto lower = [&](double t) { return net.derivatives(t, eps, k - 1)[k - 1]; };
        const double fd = (8 * (lower(x + h) - lower(x - h)) - (lower(x + 2 * h) - lower(x - 2 * h))) / (12 * h);
        const double scale = std::max(std::abs(d[k]), 1e-3 * std::pow(eps, -double(k)));
        CHECK(std::abs(fd - d[k]) <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("property: seminorms increase with the order") {
  const double eps = std::ldexp(1.0, -12);
  for (const char* text : {kExample1, "emb(delta)", "emb(absx)", "sin(x)"}) {
    const auto net = FunctionNet::symbolic(text, Box::interval(-1, 1));
    double prev = 0;
    for (int nu = 0; nu <= 4; ++nu) {
      const double s = seminorm(net, nu, Box::interval(-0.5, 0.5), eps, 256);
      CHECK(s >= prev);
      prev = s;
    }
  }
}

TEST_CASE("property: classification is stable under grid doubling") {
  const auto g = EpsilonGrid::standard();
  for (const char* text : {kExample1, "emb(delta)", "emb(heaviside)", "emb(smooth(sin(x)))",
                           "abs(log(eps))*psi(x*abs(log(eps)))"}) {
    const auto net = FunctionNet::symbolic(text, Box::interval(-1, 1));
    const auto a = classify_function_net(net, g, Box::interval(-1, 1), 2, 1024);
    const auto b = classify_function_net(net, g, Box::interval(-1, 1), 2, 2048);
    CHECK(a.overall == b.overall);
    for (int k = 0; k <= 2; ++k) {
      CHECK(a.per_order[k].classification == b.per_order[k].classification);
      CHECK(std::abs(a.per_order[k].exponent - b.per_order[k].exponent) < 0.05);
    }
  }
}

TEST_CASE("sampled nets use spectral derivatives") {
  const SpatialGrid grid(Box::interval(0, 2 * M_PI), 64);
  const auto net = FunctionNet::sampled(
      [](double eps) {
        std::vector<double> v(64);
        for (int i = 0; i < 64; ++i) v[i] = eps * std::sin(3 * (2 * M_PI * i / 64));
        return v;
      },
      grid);
  CHECK(net.max_reliable_order() == 12);
  const auto s = derivative_sups(net, 5, grid.bounds, 0.5);
  CHECK(s[5] == doctest::Approx(0.5 * 243).epsilon(1e-9));
  CHECK(net.derivatives(0.4, 0.5, 2)[2] == doctest::Approx(-0.5 * 9 * std::sin(1.2)).epsilon(1e-9));
  CHECK_THROWS_WITH_AS(seminorm(net, 13, grid.bounds, 0.5), "derivative order exceeds oracle", Error);
  const auto c = classify_function_net(net, EpsilonGrid::standard(), grid.bounds, 4);
  CHECK(std::abs(c.per_order[4].exponent - 1) < 1e-9);
}

TEST_CASE("two-dimensional nets") {
  const auto net = FunctionNet::symbolic("exp(x+2*y)", Box::rect(-1, 1, -1, 1));
  const auto s = derivative_sups(net, 3, Box::rect(0, 1, 0, 1), 0.1, 64);
  for (int k = 0; k <= 3; ++k) CHECK(s[k] == doctest::Approx(std::pow(2.0, k) * std::exp(3.0)).epsilon(1e-12));
  const auto d = net.derivatives(0.1, 0.2, 0.1, 2);
  CHECK(d[1][1] == doctest::Approx(2 * std::exp(0.5)));
  const auto h = FunctionNet::symbolic("Phi(x/eps)", Box::rect(-1, 1, -1, 1));
  const auto c = classify_function_net(h, EpsilonGrid::dyadic(3, 8, 4), Box::rect(-0.5, 0.5, -0.5, 0.5), 1, 64);
  CHECK(std::abs(c.per_order[1].exponent + 1) < 0.05);
}
