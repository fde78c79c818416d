#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "revsurf/expr.hpp"
#include "revsurf/quad.hpp"
#include "test_support.hpp"

using revsurf::Expr;
using revsurf::parse_expression;
using revsurf::integrate;
using revsurf::cumulative;
using revsurf::CumulativeIntegral;
using revsurf::QuadError;
using revsurf::kPi;

namespace {

// Checks that `anti` is an antiderivative of `integrand` by symbolic
// differentiation, at 100 random points. Oracle expressions get pinned
// this way before being trusted against the quadrature.
void require_antiderivative(const char* anti, const char* integrand,
                            double lo, double hi) {
  const Expr d = parse_expression(anti).differentiate();
  const Expr f = parse_expression(integrand);
  for (int i = 0; i < 100; ++i) {
    const double t = testsupport::uniform(lo, hi);
    const double a = d.evaluate(t);
    const double b = f.evaluate(t);
    REQUIRE(std::fabs(a - b) <= 1e-9 * (1.0 + std::fabs(b)));
  }
}

std::function<double(double)> fn(const char* text) {
  return [e = parse_expression(text)](double t) { return e.evaluate(t); };
}

}  // namespace

TEST_CASE("fixed definite integrals") {
  // Orthogonality of sin(u) and sin(2u) over a full period.
  CHECK(std::fabs(integrate(fn("sin(t)*sin(2*t)"), 0.0, 2.0 * kPi)) <= 1e-10);

  // Antiderivative of sin(u)^2*cos(2u) is sin(2u)/4 - u/4 - sin(4u)/16;
  // verified symbolically, then the definite value over [0, pi] is -pi/4.
  require_antiderivative("sin(2*t)/4-t/4-sin(4*t)/16", "sin(t)^2*cos(2*t)",
                         0.0, kPi);
  const double v = integrate(fn("sin(t)^2*cos(2*t)"), 0.0, kPi);
  CHECK(v == doctest::Approx(-kPi / 4.0).epsilon(1e-12));
  CHECK(std::fabs(v - (-0.7853981633974483)) <= 1e-10);

  CHECK(integrate(fn("1"), 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

  // Orientation: swapped bounds flip the sign.
  const double fwd = integrate(fn("exp(t)"), 0.0, 1.0);
  const double rev = integrate(fn("exp(t)"), 1.0, 0.0);
  CHECK(fwd == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  CHECK(fwd == -rev);

  CHECK(integrate(fn("t"), 2.0, 2.0) == 0.0);
}

TEST_CASE("integrate meets the mixed tolerance on oscillatory input") {
  // integral of sin(20u) over [0, 3] = (1 - cos(60)) / 20
  const double exact = (1.0 - std::cos(60.0)) / 20.0;
  const double got = integrate(fn("sin(20*t)"), 0.0, 3.0, 1e-12);
  CHECK(std::fabs(got - exact) <= 1e-12 * (1.0 + std::fabs(got)) * 10);
}

TEST_CASE("integrate reports failures") {
  // Pole inside the interval: subdivision cannot win.
  CHECK_THROWS_AS(integrate(fn("1/t"), -1.0, 1.0), revsurf::Error);
  // Non-finite sample surfaces as QuadError with the interval attached.
  try {
    integrate([](double u) { return u > 0.5 ? std::nan("") : 1.0; }, 0.0, 1.0);
    FAIL("no error");
  } catch (const QuadError& e) {
    CHECK(e.a >= 0.0);
    CHECK(e.b <= 1.0);
    CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
  }
}

TEST_CASE("cumulative of a constant") {
  const CumulativeIntegral s = cumulative([](double) { return 2.0; }, -1.0, 3.0);
  CHECK(s.value(0.0) == 0.0);  // exact anchor
  for (int i = 0; i < 100; ++i) {
    const double t = testsupport::uniform(-1.0, 3.0);
    CHECK(s.value(t) == doctest::Approx(2.0 * t).epsilon(1e-13));
  }
  CHECK(s.value(-1.0) == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(s.value(3.0) == doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("cumulative matches closed forms densely") {
  // Antiderivative of u*sin(2u) is (sin(2u) - 2u*cos(2u)) / 4.
  require_antiderivative("(sin(2*t)-2*t*cos(2*t))/4", "t*sin(2*t)", -1.0, 1.0);
  // Antiderivative of u*cos(2u) is u*sin(2u)/2 + (cos(2u) - 1) / 4.
  require_antiderivative("t*sin(2*t)/2+(cos(2*t)-1)/4", "t*cos(2*t)", -1.0, 1.0);

  const CumulativeIntegral F = cumulative(fn("t*sin(2*t)"), -1.0, 1.0);
  const CumulativeIntegral G = cumulative(fn("t*cos(2*t)"), -1.0, 1.0);
  const Expr Fc = parse_expression("(sin(2*t)-2*t*cos(2*t))/4");
  const Expr Gc = parse_expression("t*sin(2*t)/2+(cos(2*t)-1)/4");
  for (int i = 0; i <= 2000; ++i) {
    const double t = -1.0 + 2.0 * i / 2000.0;
    CHECK(std::fabs(F.value(t) - Fc.evaluate(t)) <= 1e-9);
    CHECK(std::fabs(G.value(t) - Gc.evaluate(t)) <= 1e-9);
  }
}

TEST_CASE("cumulative and integrate agree (additivity across routes)") {
  // The two use different algorithms, Gauss-Kronrod bisection versus
  // Chebyshev panels, so this is a genuine cross-check.
  const char* text = "sin(3*t)+t^2/(1+cos(t)^2)";
  const CumulativeIntegral s = cumulative(fn(text), -2.0, 5.0, 1e-11);
  for (int i = 0; i < 100; ++i) {
    const double a = testsupport::uniform(-2.0, 5.0);
    const double b = testsupport::uniform(-2.0, 5.0);
    const double via_dense = s.value(b) - s.value(a);
    const double via_gk = integrate(fn(text), a, b, 1e-11);
    CHECK(std::fabs(via_dense - via_gk) <=
          2e-11 * (1.0 + std::fabs(via_dense)) + 2e-10);
  }
}

TEST_CASE("cumulative derivative consistency") {
  const char* text = "exp(0-t^2)*cos(4*t)";
  const CumulativeIntegral s = cumulative(fn(text), -3.0, 3.0);
  const Expr f = parse_expression(text);
  for (int i = 0; i < 100; ++i) {
    const double t = testsupport::uniform(-2.9, 2.9);
    const double fv = f.evaluate(t);
    const double h = 1e-5;
    const double fd = (s.value(t + h) - s.value(t - h)) / (2.0 * h);
    CHECK(std::fabs(fd - fv) <= 1e-5 * (1.0 + std::fabs(fv)));
    // The stored interpolant reproduces f directly too.
    CHECK(std::fabs(s.derivative(t) - fv) <= 1e-9 * (1.0 + std::fabs(fv)));
  }
}

TEST_CASE("cumulative breakpoints and values line up") {
  const CumulativeIntegral s = cumulative(fn("sin(2*t)"), 0.0, 4.0 * kPi);
  const auto& bp = s.breakpoints();
  const auto& vals = s.values();
  REQUIRE(bp.size() == vals.size());
  REQUIRE(bp.size() >= 2);
  CHECK(bp.front() == 0.0);
  CHECK(bp.back() == 4.0 * kPi);
  CHECK(std::is_sorted(bp.begin(), bp.end()));
  for (std::size_t i = 0; i < bp.size(); ++i)
    CHECK(s.value(bp[i]) == doctest::Approx(vals[i]).epsilon(1e-14));
  // anchor boundary holds exactly
  bool has_zero = false;
  for (std::size_t i = 0; i < bp.size(); ++i)
    if (bp[i] == 0.0) {
      has_zero = true;
      CHECK(vals[i] == 0.0);
    }
  CHECK(has_zero);
  CHECK(s.degree() >= 3);
}

TEST_CASE("cumulative rejects bad domains and bad samples") {
  CHECK_THROWS_AS(cumulative(fn("t"), 1.0, 2.0), revsurf::Error);
  CHECK_THROWS_AS(cumulative(fn("t"), -2.0, -1.0), revsurf::Error);
  CHECK_THROWS_AS(cumulative(fn("t"), 1.0, 1.0), revsurf::Error);
  CHECK_THROWS_AS(cumulative(fn("1/(t-1)"), 0.0, 2.0), revsurf::Error);
  const CumulativeIntegral s = cumulative(fn("t"), 0.0, 1.0);
  CHECK_THROWS_AS(s.value(1.5), revsurf::Error);
  CHECK_THROWS_AS(s.value(-0.5), revsurf::Error);
}

TEST_CASE("default tolerance is 1e-10") {
  CHECK(revsurf::kDefaultTol == 1e-10);
}
