#ifndef REVSURF_PROFILE_HPP
#define REVSURF_PROFILE_HPP

#include <optional>
#include <vector>

#include "revsurf/expr.hpp"
#include "revsurf/quad.hpp"

namespace revsurf {

// Input data for one surface of revolution. The surface is
//   s(t, theta) = (x(t), y(t) cos theta, y(t) sin theta)
// with profile curve (x(t), y(t)) reconstructed from a speed function l
// and the product m = H*l, where H is the target mean curvature.
// m is the primary input because it stays smooth where H blows up at
// the singular points of the curve (the zeros of l).
struct ProblemSpec {
  Expr l;                        // signed speed of the profile curve
  Expr m;                        // H*l, must be smooth on the domain
  std::optional<Expr> H_display; // H itself, for reporting only
  double c1 = 0.0, c2 = 0.0;     // integration constants (center offsets)
  double t_min = 0.0, t_max = 0.0;  // domain, must contain 0
  std::optional<double> L;       // candidate period of l and m
  double tol = kDefaultTol;      // quadrature tolerance

  // Structural checks plus, when H_display is present, a consistency
  // audit of H*l against m at up to 50 random regular points. Throws
  // ConfigError or AuditError.
  void validate() const;

  // Radius below which the curve counts as collapsed.
  double y_floor() const;
};

// One evaluated point of the profile curve.
//
// eta is the turning integral of 2m from 0 to t, F and G the integrals
// of l*sin(eta) and l*cos(eta). The radius is
//   y = sqrt((F - c1)^2 + (G - c2)^2),
// u_vec = (-(F - c1), G - c2), and the unit tangent direction is
// u_vec rotated by -eta and normalized; phi is its continuously
// unwrapped angle, so tangent_dir = (cos phi, sin phi) and the profile
// derivative is (x', y') = l_val * tangent_dir. frontal_normal is the
// tangent rotated by +pi/2; it stays defined at singular points, which
// is what makes the curve a frontal.
struct CurveSample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double eta = 0.0;
  double F = 0.0;
  double G = 0.0;
  double l_val = 0.0;
  Vec2 u_vec{};
  double phi = 0.0;
  Vec2 tangent_dir{};
  Vec2 frontal_normal{};
};

// The four dense integrals underlying the curve: eta, F, G and x
// itself, built once over a window and shared by every query. Note the
// window must contain 0, where all four vanish. Immutable after build
// and safe for concurrent reads.
class ProfileIntegrals {
 public:
  static ProfileIntegrals build(const ProblemSpec& spec);
  static ProfileIntegrals build(const ProblemSpec& spec, double t_min,
                                double t_max, double tol);

  double eta(double t) const { return eta_.value(t); }
  double F(double t) const { return F_.value(t); }
  double G(double t) const { return G_.value(t); }
  double x(double t) const { return x_.value(t); }

  double y(double t) const;
  Vec2 u_vec(double t) const;

  double t_min() const { return eta_.t_min(); }
  double t_max() const { return eta_.t_max(); }

  // Unwrapped tangent angle at t, continuous along the walk from the
  // anchor at 0 where phi(0) = atan2(-c2, c1).
  double phi(double t) const;

  // Upper bound |eta'| + |x'| / y on the turning speed |phi'| of the
  // tangent angle, used to keep unwrapping steps below half a branch.
  double turn_rate(double t) const;

 private:
  ProfileIntegrals(CumulativeIntegral eta, CumulativeIntegral F,
                   CumulativeIntegral G, CumulativeIntegral x, double c1,
                   double c2, double floor);

  CumulativeIntegral eta_, F_, G_, x_;
  double c1_, c2_, y_floor_, phi_anchor_;
};

struct RadiusMinimum {
  double t = 0.0;
  double y = 0.0;
};

// Global minimum of the radius hypot(F - c1, G - c2) over [lo, hi]:
// a dense scan with golden section refinement of every candidate
// basin. Integrand samples alone could straddle a collapse without
// ever landing on it, so build runs this before integrating x.
RadiusMinimum min_radius(const CumulativeIntegral& F,
                         const CumulativeIntegral& G, double c1, double c2,
                         double lo, double hi);

// Evaluates one curve point, using integrals shared across calls.
// Throws YCollapseError when the radius falls to the floor.
CurveSample profile_point(const ProblemSpec& spec,
                          const ProfileIntegrals& integrals, double t);

// Uniformly samples the curve over the spec domain with n_samples >= 2
// points, sharing one set of integrals and unwrapping phi sequentially
// (with internal refinement wherever a step would exceed pi/2).
std::vector<CurveSample> trace(const ProblemSpec& spec, int n_samples);

// Residual of the governing equation 2 m y - l cos(phi) + y phi' at a
// sample, with phi' taken from the angle form -2m + x'/y and x' rebuilt
// from the sample's F, G, eta fields. Near zero exactly when the
// integral fields and the unwrapped phi agree.
double ode_residual(const ProblemSpec& spec, const CurveSample& sample);

}  // namespace revsurf

#endif
