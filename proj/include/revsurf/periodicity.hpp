#ifndef REVSURF_PERIODICITY_HPP
#define REVSURF_PERIODICITY_HPP

#include <optional>

#include "revsurf/common.hpp"
#include "revsurf/expr.hpp"
#include "revsurf/profile.hpp"

namespace revsurf {

// Which of the two period criteria applies, decided by the turning
// number of the tangent over one period: Resonant when eta(L) is a
// multiple of 2 pi (|1 - cos eta(L)| <= 1e-9), Generic otherwise.
enum class PeriodBranch { Generic, Resonant };

struct PeriodicityReport {
  double L = 0.0;
  double eta_L = 0.0;
  double F_L = 0.0;
  double G_L = 0.0;
  PeriodBranch branch = PeriodBranch::Generic;

  // Initial tangent angle atan2(-c2, c1), rotated by pi when l(0) is
  // strictly negative. When l(0) itself vanishes to tolerance the
  // reported angle is only the limit direction of the tangent and the
  // flag records that.
  double phi0 = 0.0;
  bool phi0_limit_direction = false;

  // Generic branch: signed left minus right of the closure condition
  //   cos(phi0 + eta_L/2) F_L = sin(phi0 + eta_L/2) G_L,
  // evaluated in determinant form. Resonant branch: max(|F_L|, |G_L|),
  // which must vanish for closure. Periodic exactly when |residual| is
  // at most 1e-8 * (1 + |F_L| + |G_L|).
  double residual = 0.0;
  bool periodic = false;

  // Set when eta_L sits near the resonance threshold and the two
  // branch criteria disagree about the verdict.
  bool ambiguous = false;

  // Translation of x per period, measured as x(L). Present only when
  // the curve is periodic: y then repeats and x shifts by T, giving an
  // invariant generalized helicoidal surface when T != 0.
  std::optional<double> T;
};

// Tests whether the profile curve of spec closes up (in y, up to an x
// translation) under t -> t + L. Audits that l and m really have
// period L (AuditError otherwise) and that the integrals obey their
// period shift laws. L must be positive; the integrals are built over
// [0, 2L] regardless of the spec domain.
PeriodicityReport check(const ProblemSpec& spec, double L);

// Center constants returned by the generic branch solver. collapse_t
// is set when the induced radius hits zero somewhere in [0, L]: the
// constants solve the closure equations but the curve they define
// degenerates there.
struct PeriodicConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<double> collapse_t;
};

// The unique (c1, c2) making the curve periodic for the given l, m and
// L, when eta(L) is off resonance:
//   c1 = (F_L (1 - cos eta_L) + G_L sin eta_L) / (2 (1 - cos eta_L))
//   c2 = (G_L (1 - cos eta_L) - F_L sin eta_L) / (2 (1 - cos eta_L)).
// On resonance every choice of constants behaves the same and no
// distinguished solution exists, so nullopt is returned.
std::optional<PeriodicConstants> periodic_constants(const Expr& l,
                                                    const Expr& m, double L,
                                                    double tol = kDefaultTol);

}  // namespace revsurf

#endif
