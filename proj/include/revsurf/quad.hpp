#ifndef REVSURF_QUAD_HPP
#define REVSURF_QUAD_HPP

#include <functional>
#include <vector>

#include "revsurf/common.hpp"

namespace revsurf {

// Definite integral of f over [a, b] by adaptive Gauss-Kronrod 7-15
// bisection. The result I satisfies |I - integral| <= tol*(1 + |I|).
// a > b is allowed and gives the sign-reversed integral. Throws
// QuadError when an integrand sample is non-finite or when the
// subdivision limit is hit; the error names the worst subinterval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = kDefaultTol);

// Dense antiderivative of f on [t_min, t_max], anchored so that
// value(0) == 0. Built once by cumulative(), then queryable at any t in
// the domain in O(log n). Internally a sequence of Chebyshev panels
// whose widths adapt until the interpolant tail is below tolerance, so
// value() is accurate to the tolerance pointwise, not just at panel
// ends. Immutable after construction and safe for concurrent reads.
class CumulativeIntegral {
 public:
  double value(double t) const;

  // First derivative of the stored interpolant, f reconstructed.
  double derivative(double t) const;

  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  double tolerance() const { return tol_; }

  // Panel boundaries (sorted, includes both domain ends and 0) and the
  // accumulated integral at each of them.
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return break_values_; }

  // Polynomial degree of each panel interpolant.
  int degree() const { return kDegree; }

  static constexpr int kDegree = 16;

 private:
  friend CumulativeIntegral cumulative(const std::function<double(double)>&,
                                       double, double, double);
  struct Panel {
    double a = 0.0, b = 0.0;
    double base = 0.0;            // accumulated integral at a, pre anchor
    std::vector<double> anti;     // Chebyshev coefficients of the local
                                  // antiderivative, zero at a
    std::vector<double> integrand;  // Chebyshev coefficients of f
  };
  std::vector<Panel> panels_;
  std::vector<double> breaks_;
  std::vector<double> break_values_;
  double t_min_ = 0.0, t_max_ = 0.0, tol_ = 0.0, anchor_ = 0.0;

  const Panel& locate(double t) const;
};

// Builds the dense antiderivative. Requires t_min <= 0 <= t_max so the
// anchor is inside the domain. Throws QuadError on non-finite samples
// or when panels would have to shrink below resolvable width.
CumulativeIntegral cumulative(const std::function<double(double)>& f,
                              double t_min, double t_max,
                              double tol = kDefaultTol);

}  // namespace revsurf

#endif
