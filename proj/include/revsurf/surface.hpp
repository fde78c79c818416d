#ifndef REVSURF_SURFACE_HPP
#define REVSURF_SURFACE_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "revsurf/common.hpp"
#include "revsurf/profile.hpp"
#include "revsurf/singularity.hpp"

namespace revsurf {

// Label attached to one parameter ring of the revolved surface.
struct RingAnnotation {
  double t = 0.0;
  std::string label;
};

// Triangulated surface of revolution. Vertices are laid out t-major,
// theta-minor: index i * n_theta + j holds s(t_i, theta_j) with
// theta_j = 2 pi j / n_theta. The theta seam is welded; faces wrap
// modulo n_theta instead of duplicating the first column.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<std::array<int, 3>> faces;
  int n_rings = 0;
  int n_theta = 0;
  std::vector<RingAnnotation> annotations;
};

// Revolves the sampled profile about the x axis,
//   s(t, theta) = (x, y cos theta, y sin theta),
// with the per vertex analytic normal
//   nu(t, theta) = (sin phi, -cos phi cos theta, -cos phi sin theta).
// Each grid quad splits into two triangles wound so that where l > 0
// the face normal points to the nu side. Requires n_theta >= 3, at
// least two samples and positive radii throughout.
Mesh revolve(const std::vector<CurveSample>& samples, int n_theta);

// Max over regular samples of |m - (l cos(phi) / y - phi') / 2|, the
// defining relation between the curvature data and the traced angle,
// with phi' taken from five point finite differences of the sampled
// phi. Samples where |l| falls below the square root of the zero
// tolerance are skipped; the relation degenerates at singular points.
// Requires at least five uniformly spaced samples.
double mean_curvature_audit(const std::vector<CurveSample>& samples,
                            const ProblemSpec& spec);

// Ring labels for singular parameters: the revolved surface carries a
// j/i-cuspidal edge exactly where the profile has a j/i-cusp, and an
// unclassified singular ring where the cusp type is degenerate.
std::vector<RingAnnotation> label_surface_singularities(
    const std::vector<SingularPointReport>& reports);

// Wavefront OBJ: header comments (ring annotations included), then
// v, vn and f records with f written as i//i j//j k//k, 1-based, in
// vertex order. Byte identical output for identical meshes.
void write_obj(std::ostream& out, const Mesh& mesh);

}  // namespace revsurf

#endif
