#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "revsurf/profile.hpp"
#include "test_support.hpp"

using namespace revsurf;

namespace {

ProblemSpec make_spec(const char* l, const char* m, double c1, double c2,
                      double t_min, double t_max) {
  ProblemSpec s;
  s.l = parse_expression(l);
  s.m = parse_expression(m);
  s.c1 = c1;
  s.c2 = c2;
  s.t_min = t_min;
  s.t_max = t_max;
  return s;
}

}  // namespace

TEST_CASE("validate catches structural problems") {
  ProblemSpec s = make_spec("t", "1", 0.1, 0.1, -1.0, 1.0);
  CHECK_NOTHROW(s.validate());

  ProblemSpec no_zero = make_spec("t", "1", 0.1, 0.1, 0.5, 1.0);
  CHECK_THROWS_AS(no_zero.validate(), ConfigError);

  ProblemSpec empty = make_spec("t", "1", 0.1, 0.1, 1.0, -1.0);
  CHECK_THROWS_AS(empty.validate(), ConfigError);

  ProblemSpec center = make_spec("t", "1", 0.0, 0.0, -1.0, 1.0);
  CHECK_THROWS_AS(center.validate(), ConfigError);

  ProblemSpec bad_L = make_spec("t", "1", 0.1, 0.1, -1.0, 1.0);
  bad_L.L = -2.0;
  CHECK_THROWS_AS(bad_L.validate(), ConfigError);
}

TEST_CASE("validate audits a redundant H against m") {
  ProblemSpec good = make_spec("t", "1", 0.1, 0.1, -1.0, 1.0);
  good.H_display = parse_expression("1/t");
  CHECK_NOTHROW(good.validate());

  ProblemSpec bad = make_spec("t", "1", 0.1, 0.1, -1.0, 1.0);
  bad.H_display = parse_expression("2/t");
  CHECK_THROWS_AS(bad.validate(), AuditError);
}

TEST_CASE("anchor values at t = 0") {
  const ProblemSpec s = make_spec("t", "1", 0.1, 0.1, -1.0, 1.0);
  const ProfileIntegrals in = ProfileIntegrals::build(s);
  const CurveSample p = profile_point(s, in, 0.0);
  CHECK(p.eta == 0.0);
  CHECK(p.F == 0.0);
  CHECK(p.G == 0.0);
  CHECK(p.x == 0.0);
  // radius at the anchor is the norm of the constants
  CHECK(p.y == doctest::Approx(std::sqrt(0.02)).epsilon(1e-15));
  CHECK(p.phi == doctest::Approx(std::atan2(-0.1, 0.1)).epsilon(1e-15));
}

TEST_CASE("cylinder closed forms") {
  // l = 1, m = 1, c = (1/2, 0): eta = 2t, F = (1-cos 2t)/2, G = sin(2t)/2,
  // y = 1/2, x = t, phi = 0. A plain cylinder of radius 1/2 with H = 1.
  ProblemSpec s = make_spec("1", "1", 0.5, 0.0, 0.0, 1.0);
  s.H_display = parse_expression("1");
  const auto samples = trace(s, 101);
  REQUIRE(samples.size() == 101);
  for (const auto& p : samples) {
    CHECK(std::fabs(p.y - 0.5) <= 1e-8);
    CHECK(std::fabs(p.x - p.t) <= 1e-8);
    CHECK(std::fabs(p.phi) <= 1e-9);
    CHECK(std::fabs(p.F - 0.5 * (1.0 - std::cos(2.0 * p.t))) <= 1e-9);
    CHECK(std::fabs(p.G - 0.5 * std::sin(2.0 * p.t)) <= 1e-9);
    CHECK(std::fabs(ode_residual(s, p)) <= 1e-9);
  }
}

TEST_CASE("torus end-to-end closed form") {
  // l = 3/10 and m = H*l for the torus with tube radius 3/10 around
  // radius 1 gives exactly x = 3/10 sin t, y = 1 + 3/10 cos t and
  // phi = -t. Independent of every other oracle in the suite.
  ProblemSpec s = make_spec("3/10", "(3/10*cos(t)/(1+3/10*cos(t))+1)/2", 1.3,
                            0.0, -kPi, kPi);
  const auto samples = trace(s, 501);
  for (const auto& p : samples) {
    CHECK(std::fabs(p.x - 0.3 * std::sin(p.t)) <= 1e-8);
    CHECK(std::fabs(p.y - (1.0 + 0.3 * std::cos(p.t))) <= 1e-8);
    CHECK(std::fabs(p.phi - (-p.t)) <= 1e-8);
    CHECK(std::fabs(ode_residual(s, p)) <= 1e-9);
  }
}

TEST_CASE("sample invariants along a singular fixture") {
  // l = t vanishes at 0, the curve has a cusp there; the tangent field
  // stays unit and smooth anyway.
  const ProblemSpec s = make_spec("t", "1", 0.1, 0.1, -1.0, 1.0);
  const auto samples = trace(s, 2001);
  for (const auto& p : samples) {
    CHECK(std::fabs(p.tangent_dir.norm() - 1.0) <= 1e-12);
    CHECK(std::fabs(p.frontal_normal.norm() - 1.0) <= 1e-12);
    CHECK(std::fabs(p.tangent_dir.dot(p.frontal_normal)) <= 1e-12);
    // frontal_normal is the tangent turned a quarter left
    const Vec2 r = p.tangent_dir.rotated(0.5 * kPi);
    CHECK(std::fabs(r.x - p.frontal_normal.x) <= 1e-12);
    CHECK(std::fabs(r.y - p.frontal_normal.y) <= 1e-12);
    // tangent_dir agrees with (cos phi, sin phi)
    CHECK(std::fabs(p.tangent_dir.x - std::cos(p.phi)) <= 1e-12);
    CHECK(std::fabs(p.tangent_dir.y - std::sin(p.phi)) <= 1e-12);
    CHECK(p.y > 0.0);
  }

  // (x', y') = l * tangent_dir, checked with fourth order central
  // differences of the traced positions. The speed of the curve is |l|.
  const double h = (s.t_max - s.t_min) / 2000.0;
  auto d5 = [&](auto get, std::size_t i) {
    return (get(samples[i - 2]) - 8.0 * get(samples[i - 1]) +
            8.0 * get(samples[i + 1]) - get(samples[i + 2])) /
           (12.0 * h);
  };
  // The fixture passes very close to the center near t = 0.546 where
  // the tangent spins fast; the stencil truncation grows like
  // l*(dphi)^4 there, so the tolerance tracks the observed rotation.
  for (std::size_t i = 2; i + 2 < samples.size(); ++i) {
    const double xp = d5([](const CurveSample& q) { return q.x; }, i);
    const double yp = d5([](const CurveSample& q) { return q.y; }, i);
    const auto& p = samples[i];
    double dphi = 0.0;
    for (std::size_t j = i - 2; j < i + 2; ++j)
      dphi = std::max(dphi, std::fabs(samples[j + 1].phi - samples[j].phi));
    const double tol =
        1e-6 + std::fabs(p.l_val) * dphi * dphi * dphi * dphi;
    CHECK(std::fabs(xp - p.l_val * p.tangent_dir.x) <= tol);
    CHECK(std::fabs(yp - p.l_val * p.tangent_dir.y) <= tol);
    CHECK(std::fabs(std::hypot(xp, yp) - std::fabs(p.l_val)) <= tol);
  }
}

TEST_CASE("ode residual on singular fixtures") {
  {
    const ProblemSpec s = make_spec("t", "1", 0.1, 0.1, -1.0, 1.0);
    const ProfileIntegrals in = ProfileIntegrals::build(s);
    for (double t : {-0.9, -0.5, 0.25, 0.5, 0.75})
      CHECK(std::fabs(ode_residual(s, profile_point(s, in, t))) <= 1e-8);
  }
  {
    const ProblemSpec s =
        make_spec("sin(t)^2", "1", 0.1, 0.1, 0.0, 2.0 * kPi);
    const ProfileIntegrals in = ProfileIntegrals::build(s);
    for (double t : {0.3, kPi / 4.0, 2.0, 4.0, 5.9})
      CHECK(std::fabs(ode_residual(s, profile_point(s, in, t))) <= 1e-8);
  }
}

TEST_CASE("trace grid is uniform and hits 0 when the grid admits it") {
  const ProblemSpec s = make_spec("t", "1", 0.1, 0.1, -1.0, 1.0);
  const auto samples = trace(s, 2001);
  CHECK(samples.front().t == -1.0);
  CHECK(samples.back().t == 1.0);
  CHECK(samples[1000].t == 0.0);
  const double h = 2.0 / 2000.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    CHECK(std::fabs(samples[i].t - (-1.0 + h * static_cast<double>(i))) <=
          1e-15);
}

TEST_CASE("profile_point matches trace") {
  const ProblemSpec s = make_spec("sin(t)", "1", 1.0, 0.75, 0.0, 4.0 * kPi);
  const ProfileIntegrals in = ProfileIntegrals::build(s);
  const auto samples = trace(s, 801);
  for (std::size_t i = 0; i < samples.size(); i += 97) {
    const CurveSample q = profile_point(s, in, samples[i].t);
    CHECK(std::fabs(q.x - samples[i].x) <= 1e-10);
    CHECK(std::fabs(q.y - samples[i].y) <= 1e-10);
    CHECK(std::fabs(q.phi - samples[i].phi) <= 1e-9);
  }
}

TEST_CASE("periodic fixture repeats in y") {
  // l = sin t, m = 1 over [0, 4pi]: the curve is 2pi periodic, so y at
  // t and t + 2pi agree on matching grid points.
  const ProblemSpec s = make_spec("sin(t)", "1", 1.0, 0.75, 0.0, 4.0 * kPi);
  const auto samples = trace(s, 2001);  // index shift 1000 covers 2pi
  for (std::size_t i = 0; i + 1000 < samples.size(); i += 13)
    CHECK(std::fabs(samples[i + 1000].y - samples[i].y) <= 1e-6);
}

TEST_CASE("y collapse is reported with the location") {
  // l = 1, m = 1, c = (1, 0): y = |cos t| hits zero at pi/2.
  const ProblemSpec s = make_spec("1", "1", 1.0, 0.0, 0.0, 2.0);
  try {
    trace(s, 201);
    FAIL("no YCollapseError");
  } catch (const YCollapseError& e) {
    CHECK(std::fabs(e.t - 0.5 * kPi) <= 1e-2);
  }
}

TEST_CASE("reconstructed mean curvature at regular points") {
  // m recovered as (l cos(phi)/y - phi') / 2 with phi' by finite
  // differences of the traced phi.
  const ProblemSpec s = make_spec("t", "1", 0.1, 0.1, -1.0, 1.0);
  const auto samples = trace(s, 2001);
  const double h = 2.0 / 2000.0;
  for (std::size_t i = 2; i + 2 < samples.size(); ++i) {
    const auto& p = samples[i];
    if (std::fabs(p.l_val) < 0.05) continue;  // singular neighbourhood
    const double phip =
        (samples[i - 2].phi - 8.0 * samples[i - 1].phi +
         8.0 * samples[i + 1].phi - samples[i + 2].phi) /
        (12.0 * h);
    const double m_rec = 0.5 * (p.l_val * std::cos(p.phi) / p.y - phip);
    const double m_true = s.m.evaluate(p.t);
    // Truncation of the phi stencil scales like phi' * (dphi)^4 in the
    // fast turning stretch around the near collapse at t = 0.546.
    double dphi = 0.0;
    for (std::size_t j = i - 2; j < i + 2; ++j)
      dphi = std::max(dphi, std::fabs(samples[j + 1].phi - samples[j].phi));
    const double tol = 1e-5 * (1.0 + std::fabs(m_true)) +
                       (dphi / h) * dphi * dphi * dphi * dphi;
    CHECK(std::fabs(m_rec - m_true) <= tol);
  }
}
