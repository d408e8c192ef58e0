#include "doctest.h"
#include "gfa/distribution.hpp"
#include "gfa/expression.hpp"
#include "gfa/kernels.hpp"

#include <cmath>

using namespace gfa;
using J = Jet<double>;

TEST_CASE("precedence and associativity") {
  CHECK(Expression::parse("1+2*3")(0, 0.1) == 7);
  CHECK(Expression::parse("2^3^2")(0, 0.1) == 512);
  CHECK(Expression::parse("-2^2")(0, 0.1) == -4);
  CHECK(Expression::parse("2^-1")(0, 0.1) == 0.5);
  CHECK(Expression::parse("(1+2)*3 - 4/2")(0, 0.1) == 7);
  CHECK(Expression::parse("x*eps")(3, 0.5) == 1.5);
  CHECK(Expression::parse("1e-3*x")(2, 0.5) == doctest::Approx(2e-3));
  CHECK(Expression::parse("x*y").eval(2.0, 3.0, 0.5) == 6);
}

TEST_CASE("syntax errors carry offsets") {
  auto offset_of = [](const char* s) -> long {
    try {
      Expression::parse(s);
    } catch (const ParseError& e) {
      return long(e.offset());
    }
    return -1;
  };
  CHECK(offset_of("x++") == 2);
  CHECK(offset_of("2x") == 1);
  CHECK(offset_of("sin x") == 4);
  CHECK(offset_of("foo(x)") == 0);
  CHECK(offset_of("(x") == 2);
  CHECK(offset_of("x)") == 1);
  CHECK(offset_of("") == 0);
  try {
    Expression::parse("x++");
  } catch (const ParseError& e) {
    CHECK(e.diagnostic() == "x++\n  ^ unexpected '+'");
  }
}

TEST_CASE("example nets parse and evaluate") {
  const auto e1 = Expression::parse("x/cosh(x/eps)");
  CHECK(e1(0.5, 0.1) == doctest::Approx(0.5 / std::cosh(5.0)));
  CHECK(e1(0.5, 1e-6) == 0.0);  // would be 0.5/inf without the sech rewrite
  const auto e2 = Expression::parse("abs(log(eps))*psi(x*abs(log(eps)))");
  const double L = std::abs(std::log(0.01));
  CHECK(e2(0.2, 0.01) == doctest::Approx(L * kernels::phi(0.2 * L)));
  CHECK(e2.uses_eps());
  CHECK_FALSE(e2.uses_y());
}

TEST_CASE("jets through expressions match closed forms") {
  const auto e = Expression::parse("exp(-x^2)*sin(3*x)");
  const J x = J::variable(0.4, 6);
  const J v = e.eval(x, J(0.0), 0.1);
  const J w = exp(-(x * x)) * sin(x * 3.0);
  for (int k = 0; k <= 6; ++k) CHECK(v.at(k) == doctest::Approx(w.at(k)).epsilon(1e-13));
}

TEST_CASE("kernel functions differentiate consistently") {
  const auto e = Expression::parse("Phi(2*x)");
  const J v = e.eval(J::variable(0.3, 3), J(0.0), 0.1);
  const auto d = kernels::phi_derivatives(0.6, 2);
  CHECK(derivative(v, 1) == doctest::Approx(2 * d[0]).epsilon(1e-12));
  CHECK(derivative(v, 2) == doctest::Approx(4 * d[1]).epsilon(1e-12));
  CHECK(derivative(v, 3) == doctest::Approx(8 * d[2]).epsilon(1e-12));
  // bump is flat outside (-1,1)
  CHECK(Expression::parse("bump(x)")(1.5, 0.1) == 0.0);
  CHECK(Expression::parse("bump(x)")(0.0, 0.1) == doctest::Approx(std::exp(-1.0)));
  CHECK(Expression::parse("gbump(x)")(0.6, 0.1) == doctest::Approx(std::exp(-1.0 / 0.8)));
  CHECK(Expression::parse("chi(x)")(1.5, 0.1) == doctest::Approx(0.5));
}

TEST_CASE("distribution catalog parsing") {
  const auto d = DistributionSpec::parse("2*delta@0.5 - ddelta 1 + heaviside + absx@-1 + smooth(exp(-x^2))");
  REQUIRE(d.terms.size() == 5);
  CHECK(d.terms[0].coefficient == 2.0);
  CHECK(d.terms[0].location == 0.5);
  CHECK(d.terms[1].kind == DistKind::DeltaDerivative);
  CHECK(d.terms[1].order == 1);
  CHECK(d.terms[1].coefficient == -1.0);
  CHECK(d.terms[3].location == -1.0);
  CHECK(d.singular_points() == std::vector<double>{-1.0, 0.0, 0.5});
  CHECK(DistributionSpec::parse("smooth:sin(x)+x").terms.size() == 1);
  CHECK_THROWS_AS(DistributionSpec::parse("gamma"), ParseError);
  CHECK_THROWS_AS(DistributionSpec::parse("ddelta"), ParseError);
}

TEST_CASE("emb binds embedded distributions") {
  const double eps = 1.0 / 64;
  const auto e = Expression::parse("emb(delta)");
  CHECK(e(0.0, eps) == doctest::Approx(kernels::phi(0.0) / eps));
  const auto h = Expression::parse("emb(heaviside)");
  CHECK(h(0.0, eps) == doctest::Approx(0.5).epsilon(1e-12));
  try {
    Expression::parse("x+emb(gamma)");
    FAIL("expected parse error");
  } catch (const ParseError& err) {
    CHECK(err.offset() == 6);
  }
}

TEST_CASE("embedding is linear and commutes with derivatives") {
  const double eps = std::ldexp(1.0, -8);
  const auto a = DistributionSpec::parse("3*delta + heaviside@0.25");
  const auto d1 = DistributionSpec::parse("delta"), d2 = DistributionSpec::parse("heaviside@0.25");
  const auto dd = DistributionSpec::parse("ddelta 1");
  for (double x = -0.05; x <= 0.05; x += 0.00731) {
    CHECK(a.embedded(x, eps) == doctest::Approx(3 * d1.embedded(x, eps) + d2.embedded(x, eps)).epsilon(1e-15));
    const J jd = d1.embedded(J::variable(x, 1), eps);
    const double want = jd.at(1);
    CHECK(dd.embedded(x, eps) == doctest::Approx(want).epsilon(1e-8));
  }
}
