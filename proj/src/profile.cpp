#include "revsurf/profile.hpp"

#include <cmath>
#include <random>

namespace revsurf {

double ProblemSpec::y_floor() const {
  return 1e-12 * (1.0 + std::fabs(c1) + std::fabs(c2));
}

void ProblemSpec::validate() const {
  if (!(t_min < t_max))
    throw ConfigError("domain is empty: t_min = " + format_double(t_min) +
                      ", t_max = " + format_double(t_max));
  if (t_min > 0.0 || t_max < 0.0)
    throw ConfigError("domain [" + format_double(t_min) + ", " +
                      format_double(t_max) +
                      "] must contain 0, where the integrals are anchored");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (L && !(*L > 0.0)) throw ConfigError("period L must be positive");
  if (std::hypot(c1, c2) <= y_floor())
    throw ConfigError(
        "constants c1, c2 are the curve center offsets and may not both "
        "vanish: the radius would be zero at t = 0");

  if (!H_display) return;

  // H is redundant next to m = H*l; make sure the caller's H actually
  // matches at regular points. Poles of H sit at zeros of l, so samples
  // too close to those are skipped.
  std::mt19937 gen(123456789u);
  std::uniform_real_distribution<double> dist(t_min, t_max);
  int audited = 0;
  for (int draws = 0; draws < 1000 && audited < 50; ++draws) {
    const double t = dist(gen);
    const double lv = l.evaluate_unchecked(t);
    const double mv = m.evaluate_unchecked(t);
    const double hv = H_display->evaluate_unchecked(t);
    if (!std::isfinite(lv) || !std::isfinite(mv) || !std::isfinite(hv))
      continue;
    if (std::fabs(lv) <= 1e-4 || std::fabs(hv) > 1e8) continue;
    ++audited;
    if (std::fabs(hv * lv - mv) > 1e-8 * (1.0 + std::fabs(mv)))
      throw AuditError(
          "H is inconsistent with m at t = " + format_double(t) +
          ": H*l = " + format_double(hv * lv) + ", m = " + format_double(mv));
  }
}

ProfileIntegrals::ProfileIntegrals(CumulativeIntegral eta, CumulativeIntegral F,
                                   CumulativeIntegral G, CumulativeIntegral x,
                                   double c1, double c2, double floor)
    : eta_(std::move(eta)),
      F_(std::move(F)),
      G_(std::move(G)),
      x_(std::move(x)),
      c1_(c1),
      c2_(c2),
      y_floor_(floor),
      phi_anchor_(std::atan2(-c2, c1)) {}

ProfileIntegrals ProfileIntegrals::build(const ProblemSpec& spec) {
  return build(spec, spec.t_min, spec.t_max, spec.tol);
}

ProfileIntegrals ProfileIntegrals::build(const ProblemSpec& spec, double t_min,
                                         double t_max, double tol) {
  const Expr l = spec.l;
  const Expr m = spec.m;
  const double c1 = spec.c1, c2 = spec.c2;
  const double floor = spec.y_floor();

  CumulativeIntegral eta = cumulative(
      [&m](double u) { return 2.0 * m.evaluate(u); }, t_min, t_max, tol);
  CumulativeIntegral F = cumulative(
      [&l, &eta](double u) { return l.evaluate(u) * std::sin(eta.value(u)); },
      t_min, t_max, tol);
  CumulativeIntegral G = cumulative(
      [&l, &eta](double u) { return l.evaluate(u) * std::cos(eta.value(u)); },
      t_min, t_max, tol);
  // The radius y = |(F - c1, G - c2)| must stay positive everywhere.
  const RadiusMinimum rm = min_radius(F, G, c1, c2, t_min, t_max);
  if (rm.y <= floor)
    throw YCollapseError(
        "profile radius collapsed to zero at t = " + format_double(rm.t),
        rm.t);

  // x' = (F'(G - c2) - G'(F - c1)) / y, the radial part of the speed
  // removed.
  CumulativeIntegral x = cumulative(
      [&](double u) {
        const double e = eta.value(u);
        const double lv = l.evaluate(u);
        const double Fp = lv * std::sin(e), Gp = lv * std::cos(e);
        const double Fv = F.value(u) - c1, Gv = G.value(u) - c2;
        const double y = std::hypot(Fv, Gv);
        if (y <= floor)
          throw YCollapseError(
              "profile radius collapsed to zero at t = " + format_double(u),
              u);
        return (Fp * Gv - Gp * Fv) / y;
      },
      t_min, t_max, tol);

  return ProfileIntegrals(std::move(eta), std::move(F), std::move(G),
                          std::move(x), c1, c2, floor);
}

RadiusMinimum min_radius(const CumulativeIntegral& F,
                         const CumulativeIntegral& G, double c1, double c2,
                         double lo, double hi) {
  const auto y_of = [&](double u) {
    return std::hypot(F.value(u) - c1, G.value(u) - c2);
  };
  const int n = 4096;
  const double h = (hi - lo) / n;
  std::vector<double> yv(n + 1);
  for (int i = 0; i <= n; ++i) yv[i] = y_of(lo + h * i);

  int coarse = 0;
  for (int i = 1; i <= n; ++i)
    if (yv[i] < yv[coarse]) coarse = i;
  RadiusMinimum best{lo + h * coarse, yv[coarse]};

  // Refine every basin that could undercut the coarse winner. The
  // threshold keeps refinement away from benign wide minima.
  const double thresh = 1e-2 * (1.0 + std::fabs(c1) + std::fabs(c2));
  for (int i = 0; i <= n; ++i) {
    const bool left_ok = i == 0 || yv[i] <= yv[i - 1];
    const bool right_ok = i == n || yv[i] <= yv[i + 1];
    if (!(left_ok && right_ok)) continue;
    if (yv[i] >= thresh && i != coarse) continue;
    double a = lo + h * (i > 0 ? i - 1 : 0);
    double b = lo + h * (i < n ? i + 1 : n);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::fabs(a)); ++it) {
      const double p = a + 0.382 * (b - a), q = a + 0.618 * (b - a);
      if (y_of(p) < y_of(q)) b = q; else a = p;
    }
    const double t_at = 0.5 * (a + b);
    const double y_at = y_of(t_at);
    if (y_at < best.y) best = {t_at, y_at};
  }
  return best;
}

double ProfileIntegrals::y(double t) const {
  return std::hypot(F_.value(t) - c1_, G_.value(t) - c2_);
}

Vec2 ProfileIntegrals::u_vec(double t) const {
  return {-(F_.value(t) - c1_), G_.value(t) - c2_};
}

double ProfileIntegrals::turn_rate(double t) const {
  return std::fabs(eta_.derivative(t)) + std::fabs(x_.derivative(t)) / y(t);
}

namespace {

// Raw tangent angle in (-pi, pi]: the angle of u_vec rotated by -eta.
double raw_angle(const ProfileIntegrals& in, double t) {
  const Vec2 u = in.u_vec(t);
  const Vec2 e = u.rotated(-in.eta(t));
  return std::atan2(e.y, e.x);
}

// Continues the unwrapped angle from (t_a, phi_a) to t_b. Picking the
// nearest lift of the raw angle is only sound when the true change is
// below half a turn; a change near a full turn would alias back to a
// small one and silently drop a branch. The step is therefore bisected
// until width * turn_rate bounds the change away from that, and the
// nearest lift must additionally stay within pi/2.
double continue_angle(const ProfileIntegrals& in, double t_a, double phi_a,
                      double t_b, int depth = 0) {
  const double raw = raw_angle(in, t_b);
  const double lifted =
      raw + 2.0 * kPi * std::round((phi_a - raw) / (2.0 * kPi));
  if (t_a == t_b) return lifted;
  const double width = std::fabs(t_b - t_a);
  const double rate = std::max(in.turn_rate(t_a), in.turn_rate(t_b));
  if (width * rate <= 0.25 * kPi && std::fabs(lifted - phi_a) <= 0.5 * kPi)
    return lifted;
  if (depth > 48)
    throw Error("tangent angle unwrapping failed to settle near t = " +
                format_double(t_b));
  const double mid = 0.5 * (t_a + t_b);
  const double phi_mid = continue_angle(in, t_a, phi_a, mid, depth + 1);
  return continue_angle(in, mid, phi_mid, t_b, depth + 1);
}

CurveSample make_sample(const ProblemSpec& spec, const ProfileIntegrals& in,
                        double t, double phi) {
  CurveSample s;
  s.t = t;
  s.eta = in.eta(t);
  s.F = in.F(t);
  s.G = in.G(t);
  s.u_vec = {-(s.F - spec.c1), s.G - spec.c2};
  s.y = std::hypot(s.u_vec.x, s.u_vec.y);
  if (s.y <= spec.y_floor())
    throw YCollapseError(
        "profile radius collapsed to zero at t = " + format_double(t), t);
  s.x = in.x(t);
  s.l_val = spec.l.evaluate(t);
  s.phi = phi;
  const Vec2 e = s.u_vec.rotated(-s.eta) / s.y;
  const double n = std::hypot(e.x, e.y);
  s.tangent_dir = e / n;
  s.frontal_normal = {-s.tangent_dir.y, s.tangent_dir.x};
  return s;
}

}  // namespace

double ProfileIntegrals::phi(double t) const {
  return continue_angle(*this, 0.0, phi_anchor_, t);
}

CurveSample profile_point(const ProblemSpec& spec,
                          const ProfileIntegrals& integrals, double t) {
  return make_sample(spec, integrals, t, integrals.phi(t));
}

std::vector<CurveSample> trace(const ProblemSpec& spec, int n_samples) {
  if (n_samples < 2) throw ConfigError("trace needs at least 2 samples");
  spec.validate();
  const ProfileIntegrals in = ProfileIntegrals::build(spec);

  const double width = spec.t_max - spec.t_min;
  std::vector<CurveSample> out;
  out.reserve(static_cast<std::size_t>(n_samples));

  // phi at the left end comes from the anchor walk; after that each
  // sample continues from its neighbour.
  double phi = in.phi(spec.t_min);
  double prev_t = spec.t_min;
  for (int i = 0; i < n_samples; ++i) {
    const double t =
        spec.t_min + width * (static_cast<double>(i) / (n_samples - 1));
    phi = continue_angle(in, prev_t, phi, t);
    out.push_back(make_sample(spec, in, t, phi));
    prev_t = t;
  }
  return out;
}

double ode_residual(const ProblemSpec& spec, const CurveSample& s) {
  const double m = spec.m.evaluate(s.t);
  const double Fp = s.l_val * std::sin(s.eta);
  const double Gp = s.l_val * std::cos(s.eta);
  const double xp = (Fp * (s.G - spec.c2) - Gp * (s.F - spec.c1)) / s.y;
  // Angle form of the turning rate; independent of the stored phi.
  const double phi_prime = -2.0 * m + xp / s.y;
  return 2.0 * m * s.y - s.l_val * std::cos(s.phi) + s.y * phi_prime;
}

}  // namespace revsurf
