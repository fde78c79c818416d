#pragma once

#include <string>
#include <vector>

#include "revsurf/common.hpp"
#include "revsurf/profile.hpp"

namespace revsurf {

// Cusp type of the profile curve at a zero of l. The names give the
// orders j/i of the normal form (t^i, t^j + ...): ThreeTwo is the
// ordinary cusp (t^2, t^3). Degenerate collects every zero of l whose
// type is not settled by derivatives up to fifth order.
enum class CuspClass { ThreeTwo, FiveTwo, FourThree, FiveThree, Degenerate };

// "3/2-cusp", "5/2-cusp", "4/3-cusp", "5/3-cusp" or "degenerate".
std::string cusp_name(CuspClass c);

// Classification of one singular parameter of the profile curve,
// together with the derivative data the decision was based on.
struct SingularPointReport {
  double p = 0.0;

  // Jet of the data functions at p. eta' = 2m, so eta1 = 2 m(p),
  // eta2 = 2 m'(p) and eta3 = 2 m''(p); l1, l2 are l'(p), l''(p).
  double l1 = 0.0;
  double l2 = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta3 = 0.0;

  CuspClass cusp_class = CuspClass::Degenerate;

  // The curve is a front near p exactly when eta1 is nonzero. 3/2 and
  // 4/3 cusps are fronts; 5/2 and 5/3 cusps are frontals only.
  bool is_front = false;

  // Label for the ring this point sweeps out on the revolved surface,
  // "3/2-cuspidal edge" and so on, or "unclassified singularity".
  std::string surface_label;

  // Nonempty when a decision quantity fell inside the ambiguity band
  // around the zero tolerance; the class is then Degenerate.
  std::string warning;
};

// All parameters in [t_min, t_max] with l = 0, sorted and de-duplicated.
// Sign changes are bracketed on a dense grid and refined by safeguarded
// Newton steps on l; zeros of even order, which do not change sign, are
// picked up as local minima of |l| and refined by Newton on l'. Throws
// RootError when a bracketed refinement fails to converge.
std::vector<double> find_singular_points(const ProblemSpec& spec);

// Classifies the singular point p from symbolic derivatives of l and m.
// Requires |l(p)| within the zero tolerance. Decision quantities are
// compared against zero_tol = 1e-8 * (1 + jet scale); a value inside
// (zero_tol, 10 zero_tol] is ambiguous and forces Degenerate with a
// warning instead of a guess.
SingularPointReport classify(const ProblemSpec& spec, double p);

// Relative tolerance for the jet criteria below.
struct JetTolerances {
  double rel = 1e-3;
};

// Classifies from the derivative vectors d2 = alpha'', ..., d5 of a
// plane curve alpha at a point where alpha' vanishes. Criteria in
// order: det(d2, d3) != 0 gives ThreeTwo; d2 != 0 with d3 = k d2 and
// det(d2, 3 d5 - 10 k d4) != 0 gives FiveTwo; d2 = 0 with
// det(d3, d4) != 0 gives FourThree; d2 = 0 with det(d3, d5) != 0 gives
// FiveThree. Zero tests are relative to the magnitudes of the vectors
// entering them, floored at one. When d2 is nonzero but d3 neither
// parallels it nor makes det(d2, d3) fire, the input is inconsistent:
// the result is Degenerate and *inconsistent is set when a flag is
// supplied.
CuspClass classify_jet(const Vec2& d2, const Vec2& d3, const Vec2& d4,
                       const Vec2& d5, const JetTolerances& tol = {},
                       bool* inconsistent = nullptr);

// Diagnostics filled by cross_check.
struct CrossCheckInfo {
  CuspClass symbolic = CuspClass::Degenerate;
  CuspClass numeric = CuspClass::Degenerate;
  Vec2 d2{}, d3{}, d4{}, d5{};
  double det23 = 0.0;
  double det52 = 0.0;
  double det34 = 0.0;
  double det35 = 0.0;
  bool jet_inconsistent = false;
};

// Validates classify(spec, p) along an independent route: the curve
// derivative (x', y') is sampled from tightly integrated profile data
// around p, differentiated by second order central stencils at three
// step sizes, Richardson extrapolated, and classified with
// classify_jet. Returns whether the two labels agree. The stencil
// window p +- 0.02 must lie inside the domain.
bool cross_check(const ProblemSpec& spec, double p,
                 CrossCheckInfo* info = nullptr);

}  // namespace revsurf
