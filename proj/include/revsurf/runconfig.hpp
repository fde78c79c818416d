#ifndef REVSURF_RUNCONFIG_HPP
#define REVSURF_RUNCONFIG_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "revsurf/common.hpp"
#include "revsurf/profile.hpp"
#include "revsurf/singularity.hpp"

namespace revsurf {

// Plain text run configuration: one `key = value` per line, `#` starts
// a comment, blank lines ignored. Numeric values may be any constant
// expression ("1/10", "2*pi", ...). Keys:
//   l, m          curve data expressions in t (required)
//   H             optional display expression, audited against m = H*l
//   c1, c2        center constants (default 0; not both zero)
//   t_min, t_max  domain, must contain 0 (required)
//   samples       trace sample count, at least 2 (default 2001)
//   L             candidate period, positive (optional)
//   n_theta       mesh columns, at least 3 (default 64)
//   out           default output path (optional)
//   tol           quadrature tolerance (default 1e-10)
// Unknown keys, duplicates and malformed values raise ConfigError with
// the offending line number.
struct RunConfig {
  std::string l;
  std::string m;
  std::optional<std::string> H;
  double c1 = 0.0;
  double c2 = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  int samples = 2001;
  std::optional<double> L;
  int n_theta = 64;
  std::optional<std::string> out;
  double tol = kDefaultTol;

  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);

  // Parses the expressions and validates the assembled spec (domain,
  // constants, H consistency). ConfigError or AuditError on failure.
  ProblemSpec to_spec() const;
};

// CSV document for a traced curve: header t,x,y,phi,eta,F,G,l then one
// row per sample, every number in round trip decimal form.
void write_csv(std::ostream& out, const std::vector<CurveSample>& samples);

// SVG plot of the profile polyline with the x axis drawn as a
// horizontal line and the singular parameters marked as circles.
void write_svg(std::ostream& out, const std::vector<CurveSample>& samples,
               const std::vector<SingularPointReport>& marks);

}  // namespace revsurf

#endif
