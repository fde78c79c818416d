#include "revsurf/surface.hpp"

#include <cmath>
#include <ostream>

namespace revsurf {

Mesh revolve(const std::vector<CurveSample>& samples, int n_theta) {
  if (n_theta < 3) throw Error("revolve needs at least 3 columns");
  if (samples.size() < 2) throw Error("revolve needs at least 2 samples");
  for (const auto& s : samples)
    if (!(s.y > 0.0))
      throw Error("revolve needs positive radii, got y = " +
                  format_double(s.y) + " at t = " + format_double(s.t));

  const int rings = static_cast<int>(samples.size());
  Mesh mesh;
  mesh.n_rings = rings;
  mesh.n_theta = n_theta;
  mesh.vertices.reserve(static_cast<std::size_t>(rings) * n_theta);
  mesh.normals.reserve(static_cast<std::size_t>(rings) * n_theta);

  for (int i = 0; i < rings; ++i) {
    const CurveSample& s = samples[i];
    const double sp = std::sin(s.phi), cp = std::cos(s.phi);
    for (int j = 0; j < n_theta; ++j) {
      const double th = 2.0 * kPi * j / n_theta;
      const double ct = std::cos(th), st = std::sin(th);
      mesh.vertices.push_back({s.x, s.y * ct, s.y * st});
      mesh.normals.push_back({sp, -cp * ct, -cp * st});
    }
  }

  mesh.faces.reserve(2 * static_cast<std::size_t>(rings - 1) * n_theta);
  for (int i = 0; i + 1 < rings; ++i) {
    for (int j = 0; j < n_theta; ++j) {
      const int jn = (j + 1) % n_theta;
      const int a = i * n_theta + j;
      const int b = (i + 1) * n_theta + j;
      const int c = (i + 1) * n_theta + jn;
      const int d = i * n_theta + jn;
      mesh.faces.push_back({a, b, c});
      mesh.faces.push_back({a, c, d});
    }
  }
  return mesh;
}

double mean_curvature_audit(const std::vector<CurveSample>& samples,
                            const ProblemSpec& spec) {
  const int n = static_cast<int>(samples.size());
  if (n < 5) throw Error("curvature audit needs at least 5 samples");
  const double h = samples[1].t - samples[0].t;
  for (int i = 1; i < n; ++i)
    if (std::fabs(samples[i].t - samples[i - 1].t - h) > 1e-9 * (1.0 + std::fabs(h)))
      throw Error("curvature audit needs uniformly spaced samples");

  const Expr l1 = spec.l.differentiate();
  const Expr l2 = l1.differentiate();

  // Five point derivative of the sampled phi: central in the interior,
  // one sided at the edges, all fourth order.
  const auto phi_prime = [&](int i) {
    const auto p = [&](int k) { return samples[k].phi; };
    if (i >= 2 && i <= n - 3)
      return (p(i - 2) - 8.0 * p(i - 1) + 8.0 * p(i + 1) - p(i + 2)) /
             (12.0 * h);
    if (i == 0)
      return (-25.0 * p(0) + 48.0 * p(1) - 36.0 * p(2) + 16.0 * p(3) -
              3.0 * p(4)) /
             (12.0 * h);
    if (i == 1)
      return (-3.0 * p(0) - 10.0 * p(1) + 18.0 * p(2) - 6.0 * p(3) + p(4)) /
             (12.0 * h);
    if (i == n - 2)
      return (-p(n - 5) + 6.0 * p(n - 4) - 18.0 * p(n - 3) + 10.0 * p(n - 2) +
              3.0 * p(n - 1)) /
             (12.0 * h);
    return (3.0 * p(n - 5) - 16.0 * p(n - 4) + 36.0 * p(n - 3) -
            48.0 * p(n - 2) + 25.0 * p(n - 1)) /
           (12.0 * h);
  };

  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const CurveSample& s = samples[i];
    const double local =
        1e-8 * (1.0 + std::fabs(l1.evaluate(s.t)) + std::fabs(l2.evaluate(s.t)));
    if (std::fabs(s.l_val) <= std::sqrt(local)) continue;
    const double m = spec.m.evaluate(s.t);
    const double residual =
        m - 0.5 * (s.l_val * std::cos(s.phi) / s.y - phi_prime(i));
    worst = std::max(worst, std::fabs(residual));
  }
  return worst;
}

std::vector<RingAnnotation> label_surface_singularities(
    const std::vector<SingularPointReport>& reports) {
  std::vector<RingAnnotation> out;
  out.reserve(reports.size());
  for (const auto& r : reports) {
    RingAnnotation a;
    a.t = r.p;
    a.label = r.cusp_class == CuspClass::Degenerate
                  ? "unclassified singular ring"
                  : r.surface_label;
    out.push_back(std::move(a));
  }
  return out;
}

void write_obj(std::ostream& out, const Mesh& mesh) {
  out << "# surface of revolution\n";
  out << "# rings " << mesh.n_rings << " columns " << mesh.n_theta << "\n";
  for (const auto& a : mesh.annotations)
    out << "# ring t = " << format_double(a.t) << ": " << a.label << "\n";
  for (const auto& v : mesh.vertices)
    out << "v " << format_double(v[0]) << " " << format_double(v[1]) << " "
        << format_double(v[2]) << "\n";
  for (const auto& n : mesh.normals)
    out << "vn " << format_double(n[0]) << " " << format_double(n[1]) << " "
        << format_double(n[2]) << "\n";
  for (const auto& f : mesh.faces) {
    out << "f";
    for (int idx : f) out << " " << idx + 1 << "//" << idx + 1;
    out << "\n";
  }
}

}  // namespace revsurf
