#ifndef REVSURF_COMMON_HPP
#define REVSURF_COMMON_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace revsurf {

// Default quadrature tolerance used throughout when the caller does not
// override it.
inline constexpr double kDefaultTol = 1e-10;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  // Scalar cross product, the signed area spanned with o.
  double det(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  // Counterclockwise rotation by angle a.
  Vec2 rotated(double a) const {
    const double c = std::cos(a), s = std::sin(a);
    return {c * x - s * y, s * x + c * y};
  }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

using Vec3 = std::array<double, 3>;

// Base for all library errors so callers can catch one type.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Expression text could not be parsed. Carries the byte offset of the
// offending token in the input.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg), position(position) {}
  std::size_t position;
};

// An expression evaluated to a non-finite value (pole, log of a
// non-positive number, ...). Carries the evaluation point.
struct EvalError : Error {
  EvalError(const std::string& msg, double t) : Error(msg), t(t) {}
  double t;
};

// Adaptive quadrature could not reach the requested tolerance, or an
// integrand sample was non-finite.
struct QuadError : Error {
  QuadError(const std::string& msg, double a, double b)
      : Error(msg), a(a), b(b) {}
  double a, b;  // worst subinterval
};

// The profile curve radius (distance from the integral curve to the
// center constants) fell to zero; the surface degenerates there.
struct YCollapseError : Error {
  YCollapseError(const std::string& msg, double t) : Error(msg), t(t) {}
  double t;
};

// Root refinement failed to converge. Carries the bracketing interval.
struct RootError : Error {
  RootError(const std::string& msg, double a, double b)
      : Error(msg), a(a), b(b) {}
  double a, b;
};

// A declared property of the input did not hold (wrong period, H
// inconsistent with l and m, ...).
struct AuditError : Error {
  explicit AuditError(const std::string& msg) : Error(msg) {}
};

// Run configuration file problems. line == 0 means not line specific.
struct ConfigError : Error {
  ConfigError(const std::string& msg, int line = 0) : Error(msg), line(line) {}
  int line;
};

// Shortest round-trip decimal form of a double (17 significant digits
// at most), used everywhere output must be deterministic.
std::string format_double(double v);

constexpr double kPi = 3.14159265358979323846;

}  // namespace revsurf

#endif
