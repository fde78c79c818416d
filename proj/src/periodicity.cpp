#include "revsurf/periodicity.hpp"

#include <cmath>
#include <random>

#include "revsurf/profile.hpp"
#include "revsurf/quad.hpp"

namespace revsurf {

namespace {

constexpr double kBranchTol = 1e-9;

// Below this gap the resonance is treated as exact and no generic
// verdict is formed at all; its denominator 2 sin(eta_L / 2) carries
// no information there.
constexpr double kExactResonance = 1e-13;

// Signed closure residual off resonance. The determinant form comes
// from eliminating the center constants from the closure system; it
// factors as 2 sin(eta_L / 2) times the half angle form
//   cos(phi0 + eta_L/2) F_L - sin(phi0 + eta_L/2) G_L,
// and the factor is divided back out so the residual stays comparable
// with F_L and G_L in scale.
double generic_residual(double phi0, double eta_L, double F_L, double G_L) {
  const double n1 = F_L * (1.0 - std::cos(eta_L)) + G_L * std::sin(eta_L);
  const double n2 = G_L * (1.0 - std::cos(eta_L)) - F_L * std::sin(eta_L);
  const double det = -std::cos(phi0) * n2 - std::sin(phi0) * n1;
  return det / (2.0 * std::sin(0.5 * eta_L));
}

double resonant_residual(double F_L, double G_L) {
  return std::max(std::fabs(F_L), std::fabs(G_L));
}

}  // namespace

PeriodicityReport check(const ProblemSpec& spec, double L) {
  if (!std::isfinite(L) || L <= 0.0)
    throw Error("period L must be positive and finite");

  // The declared period has to be an actual period of the data before
  // any conclusion about the curve makes sense.
  std::mt19937 gen(0x51c6a7b3u);
  std::uniform_real_distribution<double> pick(0.0, L);
  for (int i = 0; i < 50; ++i) {
    const double t = pick(gen);
    const double l0 = spec.l.evaluate(t), l1 = spec.l.evaluate(t + L);
    if (std::fabs(l1 - l0) > 1e-9 * (1.0 + std::fabs(l0)))
      throw AuditError("l does not have period " + format_double(L) +
                       ": mismatch at t = " + format_double(t));
    const double m0 = spec.m.evaluate(t), m1 = spec.m.evaluate(t + L);
    if (std::fabs(m1 - m0) > 1e-9 * (1.0 + std::fabs(m0)))
      throw AuditError("m does not have period " + format_double(L) +
                       ": mismatch at t = " + format_double(t));
  }

  const ProfileIntegrals in =
      ProfileIntegrals::build(spec, 0.0, 2.0 * L, spec.tol);

  PeriodicityReport r;
  r.L = L;
  r.eta_L = in.eta(L);
  r.F_L = in.F(L);
  r.G_L = in.G(L);

  // eta(u + L) - eta(u) is constant for periodic m; drift here means
  // the quadrature, not the input, is at fault.
  for (int i = 0; i < 10; ++i) {
    const double u = pick(gen);
    if (std::fabs(in.eta(u + L) - in.eta(u) - r.eta_L) >
        1e-8 * (1.0 + std::fabs(r.eta_L)))
      throw Error("turning integral failed the period shift check at u = " +
                  format_double(u));
  }

  const double l_at_0 = spec.l.evaluate(0.0);
  const double l_tol =
      1e-8 * (1.0 + std::fabs(spec.l.differentiate().evaluate(0.0)));
  r.phi0 = std::atan2(-spec.c2, spec.c1);
  if (l_at_0 < -l_tol)
    r.phi0 += r.phi0 > 0.0 ? -kPi : kPi;
  else if (std::fabs(l_at_0) <= l_tol)
    r.phi0_limit_direction = true;

  const double gap = std::fabs(1.0 - std::cos(r.eta_L));
  const double period_tol = 1e-8 * (1.0 + std::fabs(r.F_L) + std::fabs(r.G_L));

  if (gap <= kBranchTol) {
    r.branch = PeriodBranch::Resonant;
    r.residual = resonant_residual(r.F_L, r.G_L);
    r.periodic = r.residual <= period_tol;
    if (gap > kExactResonance) {
      const bool other =
          std::fabs(generic_residual(r.phi0, r.eta_L, r.F_L, r.G_L)) <=
          period_tol;
      r.ambiguous = other != r.periodic;
    }
  } else {
    r.branch = PeriodBranch::Generic;
    r.residual = generic_residual(r.phi0, r.eta_L, r.F_L, r.G_L);
    const double half = std::cos(r.phi0 + 0.5 * r.eta_L) * r.F_L -
                        std::sin(r.phi0 + 0.5 * r.eta_L) * r.G_L;
    if (std::fabs(std::fabs(r.residual) - std::fabs(half)) >
        1e-9 * (1.0 + std::fabs(half)))
      throw Error(
          "determinant and half angle forms of the closure residual disagree");
    r.periodic = std::fabs(r.residual) <= period_tol;
    if (gap <= 10.0 * kBranchTol)
      r.ambiguous = (resonant_residual(r.F_L, r.G_L) <= period_tol) != r.periodic;
  }

  if (r.periodic) r.T = in.x(L);
  return r;
}

std::optional<PeriodicConstants> periodic_constants(const Expr& l,
                                                    const Expr& m, double L,
                                                    double tol) {
  if (!std::isfinite(L) || L <= 0.0)
    throw Error("period L must be positive and finite");

  const CumulativeIntegral eta =
      cumulative([&m](double u) { return 2.0 * m.evaluate(u); }, 0.0, L, tol);
  const CumulativeIntegral F = cumulative(
      [&l, &eta](double u) { return l.evaluate(u) * std::sin(eta.value(u)); },
      0.0, L, tol);
  const CumulativeIntegral G = cumulative(
      [&l, &eta](double u) { return l.evaluate(u) * std::cos(eta.value(u)); },
      0.0, L, tol);

  const double eta_L = eta.value(L);
  const double gap = 1.0 - std::cos(eta_L);
  if (std::fabs(gap) <= kBranchTol) return std::nullopt;

  const double F_L = F.value(L), G_L = G.value(L);
  PeriodicConstants pc;
  pc.c1 = (F_L * gap + G_L * std::sin(eta_L)) / (2.0 * gap);
  pc.c2 = (G_L * gap - F_L * std::sin(eta_L)) / (2.0 * gap);

  const RadiusMinimum rm = min_radius(F, G, pc.c1, pc.c2, 0.0, L);
  if (rm.y <= 1e-12 * (1.0 + std::fabs(pc.c1) + std::fabs(pc.c2)))
    pc.collapse_t = rm.t;
  return pc;
}

}  // namespace revsurf
