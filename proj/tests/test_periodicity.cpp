#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "revsurf/periodicity.hpp"
#include "revsurf/profile.hpp"
#include "revsurf/quad.hpp"
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

TEST_CASE("resonant closure: sine speed over a full turn is periodic") {
  const ProblemSpec s = make_spec("sin(t)", "1", 1.0, 0.75, 0.0, 4.0 * kPi);
  const auto r = check(s, 2.0 * kPi);
  CHECK(r.L == 2.0 * kPi);
  CHECK(r.branch == PeriodBranch::Resonant);
  CHECK(std::fabs(r.eta_L - 4.0 * kPi) <= 1e-9);
  CHECK(std::fabs(r.F_L) <= 1e-9);
  CHECK(std::fabs(r.G_L) <= 1e-9);
  CHECK(r.residual <= 1e-8);
  CHECK(r.periodic);
  CHECK_FALSE(r.ambiguous);
  CHECK(r.phi0_limit_direction);
  REQUIRE(r.T.has_value());

  // The verdict must show in the trace itself: y repeats and x shifts
  // by T across one period.
  const auto tr = trace(s, 1601);
  double worst_y = 0.0, worst_x = 0.0;
  for (std::size_t i = 0; i + 800 < tr.size(); ++i) {
    worst_y = std::max(worst_y, std::fabs(tr[i + 800].y - tr[i].y));
    worst_x = std::max(worst_x, std::fabs(tr[i + 800].x - tr[i].x - *r.T));
  }
  CHECK(worst_y <= 1e-6);
  CHECK(worst_x <= 1e-6);
}

TEST_CASE("resonant non closure: squared sine leaves a quarter pi residue") {
  const ProblemSpec s = make_spec("sin(t)^2", "1", 0.1, 0.1, 0.0, 2.0 * kPi);
  const auto r = check(s, kPi);
  CHECK(r.branch == PeriodBranch::Resonant);
  CHECK(std::fabs(r.eta_L - 2.0 * kPi) <= 1e-9);
  CHECK(std::fabs(r.F_L) <= 1e-9);
  CHECK(std::fabs(r.residual - 0.25 * kPi) <= 1e-8);
  CHECK_FALSE(r.periodic);
  CHECK_FALSE(r.ambiguous);
  CHECK(r.phi0_limit_direction);
  CHECK_FALSE(r.T.has_value());
}

TEST_CASE("resonant non closure: cosine speed with oscillating turning") {
  const ProblemSpec s =
      make_spec("cos(t)", "sin(t)", 0.1, 0.1, 0.0, 4.0 * kPi);
  const auto r = check(s, 2.0 * kPi);
  CHECK(r.branch == PeriodBranch::Resonant);
  CHECK(std::fabs(r.eta_L) <= 1e-9);
  CHECK(std::fabs(r.F_L - 1.507978323787942) <= 1e-8);
  CHECK(std::fabs(r.G_L - 3.294992750410940) <= 1e-8);
  CHECK(std::fabs(r.residual - 3.294992750410940) <= 1e-8);
  CHECK_FALSE(r.periodic);
  CHECK_FALSE(r.phi0_limit_direction);
  CHECK_FALSE(r.T.has_value());

  // One shot adaptive quadrature with the closed form turning integral
  // eta = 2 (1 - cos t) must agree with the panel route inside check.
  const double F_direct = integrate(
      [](double u) { return std::cos(u) * std::sin(2.0 * (1.0 - std::cos(u))); },
      0.0, 2.0 * kPi, 1e-12);
  const double G_direct = integrate(
      [](double u) { return std::cos(u) * std::cos(2.0 * (1.0 - std::cos(u))); },
      0.0, 2.0 * kPi, 1e-12);
  CHECK(std::fabs(F_direct - r.F_L) <= 1e-9);
  CHECK(std::fabs(G_direct - r.G_L) <= 1e-9);
}

TEST_CASE("shift laws propagate eta, F and G across one period") {
  using testsupport::uniform;
  const ProblemSpec specs[] = {
      make_spec("sin(t)", "1", 1.0, 0.75, 0.0, 4.0 * kPi),
      make_spec("cos(t)", "sin(t)", 0.1, 0.1, 0.0, 4.0 * kPi),
  };
  const double L = 2.0 * kPi;
  for (const auto& s : specs) {
    const auto in = ProfileIntegrals::build(s, 0.0, 2.0 * L, s.tol);
    const double eta_L = in.eta(L), F_L = in.F(L), G_L = in.G(L);
    const double ce = std::cos(eta_L), se = std::sin(eta_L);
    for (int i = 0; i < 10; ++i) {
      const double u = uniform(0.0, L);
      CHECK(std::fabs(in.eta(u + L) - in.eta(u) - eta_L) <=
            1e-8 * (1.0 + std::fabs(eta_L)));
      CHECK(std::fabs(in.F(u + L) - (F_L + se * in.G(u) + ce * in.F(u))) <=
            1e-8 * (1.0 + std::fabs(F_L)));
      CHECK(std::fabs(in.G(u + L) - (G_L + ce * in.G(u) - se * in.F(u))) <=
            1e-8 * (1.0 + std::fabs(G_L)));
    }
  }
}

TEST_CASE("generic closure: constant speed reproduces the cylinder") {
  const auto pc =
      periodic_constants(parse_expression("1"), parse_expression("1"),
                         0.5 * kPi);
  REQUIRE(pc.has_value());
  CHECK(std::fabs(pc->c1 - 0.5) <= 1e-10);
  CHECK(std::fabs(pc->c2) <= 1e-10);
  CHECK_FALSE(pc->collapse_t.has_value());

  const ProblemSpec s = make_spec("1", "1", pc->c1, pc->c2, 0.0, kPi);
  const auto r = check(s, 0.5 * kPi);
  CHECK(r.branch == PeriodBranch::Generic);
  CHECK(std::fabs(r.residual) <= 1e-9);
  CHECK(r.periodic);
  CHECK_FALSE(r.ambiguous);
  CHECK_FALSE(r.phi0_limit_direction);
  REQUIRE(r.T.has_value());
  CHECK(std::fabs(*r.T - 0.5 * kPi) <= 1e-8);

  const auto tr = trace(s, 401);
  for (const auto& p : tr) {
    CHECK(std::fabs(p.y - 0.5) <= 1e-8);
    CHECK(std::fabs(p.x - p.t) <= 1e-8);
  }
}

TEST_CASE("generic speed with negative l at zero flips the start angle") {
  const ProblemSpec s = make_spec("-1", "1", 0.5, 0.0, 0.0, kPi);
  const auto r = check(s, 0.5 * kPi);
  CHECK(r.branch == PeriodBranch::Generic);
  CHECK(std::fabs(r.phi0 - kPi) <= 1e-12);
  CHECK_FALSE(r.phi0_limit_direction);
  CHECK(r.periodic);
}

TEST_CASE("vanishing closure integrals put the center at the origin") {
  const auto pc = periodic_constants(parse_expression("cos(t)-5*cos(2*t)"),
                                     parse_expression("1/4"), 2.0 * kPi);
  REQUIRE(pc.has_value());
  CHECK(std::fabs(pc->c1) <= 1e-9);
  CHECK(std::fabs(pc->c2) <= 1e-9);
  // F and G both start at zero, so this center makes the radius vanish
  // at the start of the period.
  REQUIRE(pc->collapse_t.has_value());
  CHECK(std::fabs(*pc->collapse_t) <= 1e-6);
}

TEST_CASE("resonant data has no distinguished center") {
  CHECK_FALSE(periodic_constants(parse_expression("sin(t)"),
                                 parse_expression("1"), 2.0 * kPi)
                  .has_value());
}

TEST_CASE("near resonance with conflicting branch verdicts is flagged") {
  // m just off 1 leaves eta(L) short of two full turns by ~8e-10,
  // inside the resonant band but with a live generic criterion.
  const char* m_off = "1+159/50000000";
  const ProblemSpec probe = make_spec("sin(t)", m_off, 1.0, 0.0, 0.0, 4.0 * kPi);
  const auto first = check(probe, 2.0 * kPi);
  CHECK(first.branch == PeriodBranch::Resonant);
  CHECK_FALSE(first.periodic);
  CHECK_FALSE(first.ambiguous);

  // Center chosen to zero the generic residual exactly; the resonant
  // criterion still fails on |F_L|, so the two branches disagree.
  const double phi_star =
      std::atan2(first.F_L, first.G_L) - 0.5 * first.eta_L;
  const ProblemSpec tuned = make_spec("sin(t)", m_off, std::cos(phi_star),
                                      -std::sin(phi_star), 0.0, 4.0 * kPi);
  const auto r = check(tuned, 2.0 * kPi);
  CHECK(r.branch == PeriodBranch::Resonant);
  CHECK(r.residual > 1e-8);
  CHECK_FALSE(r.periodic);
  CHECK(r.ambiguous);
}

TEST_CASE("the audit rejects a wrong period and bad arguments") {
  const ProblemSpec s = make_spec("sin(t)", "1", 1.0, 0.75, 0.0, 4.0 * kPi);
  CHECK_THROWS_AS(check(s, kPi), AuditError);
  CHECK_THROWS_AS(
      check(make_spec("sin(t)", "t", 1.0, 0.75, 0.0, 4.0 * kPi), 2.0 * kPi),
      AuditError);
  CHECK_THROWS_AS(check(s, 0.0), Error);
  CHECK_THROWS_AS(check(s, -1.0), Error);
  CHECK_THROWS_AS(periodic_constants(parse_expression("1"),
                                     parse_expression("1"), -2.0),
                  Error);
}
