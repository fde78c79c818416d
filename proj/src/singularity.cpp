#include "revsurf/singularity.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "revsurf/expr.hpp"

namespace revsurf {

namespace {

double zero_tol(double scale) { return 1e-8 * (1.0 + scale); }

// A quantity is Zero below the tolerance, NonZero above ten times it,
// and Ambiguous in between. Ambiguity never picks a branch.
enum class ZState { Zero, Ambiguous, NonZero };

ZState zstate(double v, double tol) {
  const double a = std::fabs(v);
  if (a <= tol) return ZState::Zero;
  if (a <= 10.0 * tol) return ZState::Ambiguous;
  return ZState::NonZero;
}

// Newton polish of a zero already located to grid accuracy, clamped to
// [lo, hi]. Handles both simple zeros (quadratic convergence) and even
// order zeros (the step contracts linearly toward the minimum).
double polish_zero(const Expr& f, const Expr& fp, double t0, double lo,
                   double hi) {
  double t = t0;
  for (int iter = 0; iter < 80; ++iter) {
    const double ft = f.evaluate(t);
    if (ft == 0.0) return t;
    const double d = fp.evaluate(t);
    if (d == 0.0) return t;
    const double next = std::clamp(t - ft / d, lo, hi);
    if (std::fabs(next - t) <= 1e-15 * (1.0 + std::fabs(t))) return next;
    t = next;
  }
  return t;
}

// Safeguarded Newton for a sign change of f inside [a, b]: every
// iterate stays bracketed, with bisection as the fallback step.
double refine_bracket(const Expr& f, const Expr& fp, double a, double b) {
  double fa = f.evaluate(a);
  if (fa == 0.0) return a;
  if (f.evaluate(b) == 0.0) return b;
  double t = 0.5 * (a + b);
  for (int iter = 0; iter < 100; ++iter) {
    const double ft = f.evaluate(t);
    if (ft == 0.0) return t;
    if ((ft < 0.0) == (fa < 0.0)) {
      a = t;
      fa = ft;
    } else {
      b = t;
    }
    if (b - a <= 1e-15 * (1.0 + std::fabs(t))) return 0.5 * (a + b);
    const double d = fp.evaluate(t);
    double next = d != 0.0 ? t - ft / d : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    t = next;
  }
  throw RootError("root refinement did not converge in [" + format_double(a) +
                      ", " + format_double(b) + "]",
                  a, b);
}

// Newton on f' toward the minimum of |f| near t0, kept inside [lo, hi].
// Convergence is not required; the caller filters on the residual.
double refine_minimum(const Expr& fp, const Expr& fpp, double t0, double lo,
                      double hi) {
  double t = t0;
  for (int iter = 0; iter < 120; ++iter) {
    const double d1 = fp.evaluate(t);
    const double d2 = fpp.evaluate(t);
    if (d1 == 0.0 || d2 == 0.0) return t;
    const double next = std::clamp(t - d1 / d2, lo, hi);
    if (std::fabs(next - t) <= 1e-15 * (1.0 + std::fabs(t))) return next;
    t = next;
  }
  return t;
}

std::string cusp_ratio(CuspClass c) {
  switch (c) {
    case CuspClass::ThreeTwo:
      return "3/2";
    case CuspClass::FiveTwo:
      return "5/2";
    case CuspClass::FourThree:
      return "4/3";
    case CuspClass::FiveThree:
      return "5/3";
    case CuspClass::Degenerate:
      break;
  }
  return "";
}

}  // namespace

std::string cusp_name(CuspClass c) {
  if (c == CuspClass::Degenerate) return "degenerate";
  return cusp_ratio(c) + "-cusp";
}

std::vector<double> find_singular_points(const ProblemSpec& spec) {
  const Expr lp = spec.l.differentiate();
  const Expr lpp = lp.differentiate();

  const int n = 4096;
  const double h = (spec.t_max - spec.t_min) / n;
  std::vector<double> grid(n + 1), lv(n + 1);
  for (int i = 0; i <= n; ++i) {
    grid[i] = i == n ? spec.t_max : spec.t_min + h * i;
    lv[i] = spec.l.evaluate(grid[i]);
  }

  const auto local_scale = [&](double t) {
    return std::max(std::fabs(lp.evaluate(t)), std::fabs(lpp.evaluate(t)));
  };

  std::vector<double> roots;

  // Grid values already at zero to rounding, including the endpoints.
  for (int i = 0; i <= n; ++i) {
    if (std::fabs(lv[i]) <= 1e-12 * (1.0 + local_scale(grid[i]))) {
      const double lo = std::max(spec.t_min, grid[i] - h);
      const double hi = std::min(spec.t_max, grid[i] + h);
      roots.push_back(polish_zero(spec.l, lp, grid[i], lo, hi));
    }
  }

  // Sign changes between adjacent grid values.
  for (int i = 0; i < n; ++i) {
    if (lv[i] != 0.0 && lv[i + 1] != 0.0 && (lv[i] < 0.0) != (lv[i + 1] < 0.0))
      roots.push_back(refine_bracket(spec.l, lp, grid[i], grid[i + 1]));
  }

  // Local minima of |l| below sqrt(zero_tol) catch zeros of even order,
  // which never change sign. The refined point only counts when the
  // residual actually drops below the zero tolerance.
  for (int i = 0; i <= n; ++i) {
    const double a1 = std::fabs(lv[i]);
    if (i > 0 && a1 > std::fabs(lv[i - 1])) continue;
    if (i < n && a1 > std::fabs(lv[i + 1])) continue;
    if (a1 >= std::sqrt(zero_tol(local_scale(grid[i])))) continue;
    const double lo = grid[i > 0 ? i - 1 : 0];
    const double hi = grid[i < n ? i + 1 : n];
    const double t = refine_minimum(lp, lpp, grid[i], lo, hi);
    if (std::fabs(spec.l.evaluate(t)) <= zero_tol(local_scale(t)))
      roots.push_back(t);
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (const double r : roots) {
    if (!out.empty() && r - out.back() <= 1e-7 * (1.0 + std::fabs(r))) {
      if (std::fabs(spec.l.evaluate(r)) < std::fabs(spec.l.evaluate(out.back())))
        out.back() = r;
    } else {
      out.push_back(r);
    }
  }
  return out;
}

SingularPointReport classify(const ProblemSpec& spec, double p) {
  const Expr lp = spec.l.differentiate();
  const Expr lpp = lp.differentiate();
  const Expr mp = spec.m.differentiate();
  const Expr mpp = mp.differentiate();

  SingularPointReport r;
  r.p = p;
  r.l1 = lp.evaluate(p);
  r.l2 = lpp.evaluate(p);
  r.eta1 = 2.0 * spec.m.evaluate(p);
  r.eta2 = 2.0 * mp.evaluate(p);
  r.eta3 = 2.0 * mpp.evaluate(p);

  const double scale = std::max({std::fabs(r.l1), std::fabs(r.l2),
                                 std::fabs(r.eta1), std::fabs(r.eta2),
                                 std::fabs(r.eta3)});
  const double zt = zero_tol(scale);
  if (std::fabs(spec.l.evaluate(p)) > zt)
    throw Error("classify called away from a zero of l, t = " +
                format_double(p));

  // The branches consult each quantity through this gate; an ambiguous
  // value fails every branch and is remembered for the warning.
  bool ambiguous = false;
  const auto is = [&](double v, double tol, ZState want) {
    const ZState s = zstate(v, tol);
    if (s == ZState::Ambiguous) {
      ambiguous = true;
      return false;
    }
    return s == want;
  };

  const double q = r.l2 * r.eta2 - r.l1 * r.eta3;
  const double qt =
      zero_tol(std::fabs(r.l2 * r.eta2) + std::fabs(r.l1 * r.eta3));

  using Z = ZState;
  if (is(r.l1, zt, Z::NonZero) && is(r.eta1, zt, Z::NonZero))
    r.cusp_class = CuspClass::ThreeTwo;
  else if (is(r.l1, zt, Z::NonZero) && is(r.eta1, zt, Z::Zero) &&
           is(q, qt, Z::NonZero))
    r.cusp_class = CuspClass::FiveTwo;
  else if (is(r.l1, zt, Z::Zero) && is(r.eta1, zt, Z::NonZero) &&
           is(r.l2, zt, Z::NonZero))
    r.cusp_class = CuspClass::FourThree;
  else if (is(r.l1, zt, Z::Zero) && is(r.eta1, zt, Z::Zero) &&
           is(r.eta2, zt, Z::NonZero) && is(r.l2, zt, Z::NonZero))
    r.cusp_class = CuspClass::FiveThree;
  else
    r.cusp_class = CuspClass::Degenerate;

  r.is_front = std::fabs(r.eta1) > zt;
  if (r.cusp_class == CuspClass::Degenerate) {
    r.surface_label = "unclassified singularity";
    if (ambiguous)
      r.warning =
          "decision quantity inside the ambiguity band of the zero tolerance";
  } else {
    r.surface_label = cusp_ratio(r.cusp_class) + "-cuspidal edge";
  }
  return r;
}

CuspClass classify_jet(const Vec2& d2, const Vec2& d3, const Vec2& d4,
                       const Vec2& d5, const JetTolerances& tol,
                       bool* inconsistent) {
  if (inconsistent) *inconsistent = false;
  // Each test is scaled by the magnitudes entering it, floored at one,
  // so a large fifth derivative cannot drown out a clear low order
  // determinant.
  const auto nonzero_det = [&](const Vec2& a, const Vec2& b) {
    return std::fabs(a.det(b)) >
           tol.rel * (1.0 + a.norm()) * (1.0 + b.norm());
  };

  if (nonzero_det(d2, d3)) return CuspClass::ThreeTwo;
  if (d2.norm() > tol.rel * (1.0 + d2.norm())) {
    const double k = d3.dot(d2) / d2.dot(d2);
    if ((d3 - d2 * k).norm() > tol.rel * (1.0 + d3.norm())) {
      if (inconsistent) *inconsistent = true;
      return CuspClass::Degenerate;
    }
    const Vec2 w = d5 * 3.0 - d4 * (10.0 * k);
    if (nonzero_det(d2, w)) return CuspClass::FiveTwo;
    return CuspClass::Degenerate;
  }
  if (nonzero_det(d3, d4)) return CuspClass::FourThree;
  if (nonzero_det(d3, d5)) return CuspClass::FiveThree;
  return CuspClass::Degenerate;
}

bool cross_check(const ProblemSpec& spec, double p, CrossCheckInfo* info) {
  const double half_window = 0.02;
  if (p - half_window < spec.t_min || p + half_window > spec.t_max)
    throw Error("cross check window around t = " + format_double(p) +
                " leaves the domain");

  const SingularPointReport sym = classify(spec, p);

  const ProfileIntegrals in =
      ProfileIntegrals::build(spec, spec.t_min, spec.t_max, 1e-13);
  // (x', y') = l e with e the unit tangent; no angle unwrapping needed.
  const auto g = [&](double t) {
    return in.u_vec(t).rotated(-in.eta(t)) * (spec.l.evaluate(t) / in.y(t));
  };

  // Samples at p + k h for k in {-8,-4,-2,-1,0,1,2,4,8} cover central
  // stencils at step sizes h, 2h and 4h.
  const double h = 0.0025;
  const std::array<int, 9> off = {-8, -4, -2, -1, 0, 1, 2, 4, 8};
  std::array<Vec2, 9> s;
  for (std::size_t i = 0; i < off.size(); ++i) s[i] = g(p + off[i] * h);
  const auto at = [&](int k) {
    for (std::size_t i = 0; i < off.size(); ++i)
      if (off[i] == k) return s[i];
    throw Error("internal stencil offset lookup failed");
  };

  // Second order central stencils for the first four derivatives of g.
  struct Jet {
    Vec2 d1, d2, d3, d4;
  };
  const auto stencil = [&](int k) {
    const double step = k * h;
    const Vec2 m2 = at(-2 * k), m1 = at(-k), z = at(0), p1 = at(k),
               p2 = at(2 * k);
    Jet J;
    J.d1 = (p1 - m1) / (2.0 * step);
    J.d2 = (p1 - z * 2.0 + m1) / (step * step);
    J.d3 = (p2 - p1 * 2.0 + m1 * 2.0 - m2) / (2.0 * step * step * step);
    J.d4 = (p2 - p1 * 4.0 + z * 6.0 - m1 * 4.0 + m2) /
           (step * step * step * step);
    return J;
  };
  const Jet fine = stencil(1), mid = stencil(2), coarse = stencil(4);

  // Two Richardson levels remove the h^2 and h^4 error terms.
  const auto extrapolate = [](Vec2 f, Vec2 m, Vec2 c) {
    const Vec2 a = (f * 4.0 - m) / 3.0;
    const Vec2 b = (m * 4.0 - c) / 3.0;
    return (a * 16.0 - b) / 15.0;
  };
  const Vec2 d2 = extrapolate(fine.d1, mid.d1, coarse.d1);
  const Vec2 d3 = extrapolate(fine.d2, mid.d2, coarse.d2);
  const Vec2 d4 = extrapolate(fine.d3, mid.d3, coarse.d3);
  const Vec2 d5 = extrapolate(fine.d4, mid.d4, coarse.d4);

  bool inconsistent = false;
  const CuspClass numeric = classify_jet(d2, d3, d4, d5, {}, &inconsistent);

  if (info) {
    info->symbolic = sym.cusp_class;
    info->numeric = numeric;
    info->d2 = d2;
    info->d3 = d3;
    info->d4 = d4;
    info->d5 = d5;
    info->det23 = d2.det(d3);
    const double n2 = d2.dot(d2);
    const double k = n2 > 0.0 ? d3.dot(d2) / n2 : 0.0;
    info->det52 = d2.det(d5 * 3.0 - d4 * (10.0 * k));
    info->det34 = d3.det(d4);
    info->det35 = d3.det(d5);
    info->jet_inconsistent = inconsistent;
  }
  return numeric == sym.cusp_class;
}

}  // namespace revsurf
