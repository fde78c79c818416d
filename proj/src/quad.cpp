#include "revsurf/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace revsurf {

namespace {

// Gauss-Kronrod 7-15 abscissae and weights on [-1, 1]. The Kronrod rule
// uses all eight node magnitudes, the embedded Gauss rule the odd ones.
constexpr std::array<double, 8> kXgk = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
constexpr std::array<double, 4> kWg = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

double sample(const std::function<double(double)>& f, double t, double a,
              double b) {
  const double v = f(t);
  if (!std::isfinite(v))
    throw QuadError(
        "non-finite integrand sample at t = " + format_double(t) +
            " in [" + format_double(a) + ", " + format_double(b) + "]",
        a, b);
  return v;
}

// One Kronrod 15 evaluation with the embedded Gauss 7 error estimate.
void gk15(const std::function<double(double)>& f, double a, double b,
          double* integral, double* err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = sample(f, c, a, b);
  double res_k = kWgk[7] * fc;
  double res_g = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = sample(f, c - dx, a, b);
    const double f2 = sample(f, c + dx, a, b);
    res_k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) res_g += kWg[j / 2] * (f1 + f2);
  }
  *integral = res_k * h;
  // The Kronrod value is far more accurate than Gauss, so the gap
  // bounds the Gauss error and overstates the Kronrod one. Good enough
  // and conservative.
  *err = std::fabs(res_k - res_g) * std::fabs(h);
}

struct Segment {
  double a, b, integral, err;
  bool operator<(const Segment& o) const { return err < o.err; }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, tol);

  Segment whole;
  gk15(f, a, b, &whole.integral, &whole.err);
  whole.a = a;
  whole.b = b;

  std::priority_queue<Segment> queue;
  queue.push(whole);
  double total = whole.integral;
  double total_err = whole.err;

  const int kMaxSegments = 20000;
  int splits = 0;
  while (total_err > tol * (1.0 + std::fabs(total))) {
    Segment worst = queue.top();
    const double width = worst.b - worst.a;
    if (++splits > kMaxSegments ||
        width < 1e-14 * (1.0 + std::fabs(worst.a) + std::fabs(worst.b)))
      throw QuadError("quadrature failed to converge on [" +
                          format_double(worst.a) + ", " +
                          format_double(worst.b) + "]",
                      worst.a, worst.b);
    queue.pop();
    total -= worst.integral;
    total_err -= worst.err;

    const double mid = 0.5 * (worst.a + worst.b);
    Segment left{worst.a, mid, 0, 0}, right{mid, worst.b, 0, 0};
    gk15(f, left.a, left.b, &left.integral, &left.err);
    gk15(f, right.a, right.b, &right.integral, &right.err);
    total += left.integral + right.integral;
    total_err += left.err + right.err;
    queue.push(left);
    queue.push(right);
  }
  return total;
}

// ---------------------------------------------------------------------
// Dense cumulative integral on adaptive Chebyshev panels.

namespace {

constexpr int kN = CumulativeIntegral::kDegree;  // 17 Lobatto points

// cos(pi*j*k/N) for the type I discrete cosine transform.
const std::array<double, (kN + 1) * (kN + 1)>& cos_table() {
  static const auto table = [] {
    std::array<double, (kN + 1) * (kN + 1)> t{};
    for (int j = 0; j <= kN; ++j)
      for (int k = 0; k <= kN; ++k)
        t[j * (kN + 1) + k] = std::cos(kPi * j * k / kN);
    return t;
  }();
  return table;
}

// Plain-sum Chebyshev coefficients c so that sum c_k T_k(x) interpolates
// the samples at the Lobatto nodes x_j = cos(pi j / N).
std::vector<double> cheb_coeffs(const std::array<double, kN + 1>& fvals) {
  const auto& tab = cos_table();
  std::vector<double> c(kN + 1);
  for (int k = 0; k <= kN; ++k) {
    double s = 0.5 * (fvals[0] * tab[k] +
                      fvals[kN] * tab[kN * (kN + 1) + k]);
    for (int j = 1; j < kN; ++j) s += fvals[j] * tab[j * (kN + 1) + k];
    c[k] = 2.0 * s / kN;
  }
  c[0] *= 0.5;
  c[kN] *= 0.5;
  return c;
}

double clenshaw(const std::vector<double>& c, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    const double tmp = 2.0 * x * b1 - b2 + c[k];
    b2 = b1;
    b1 = tmp;
  }
  return x * b1 - b2 + c[0];
}

// Coefficients of the antiderivative, scaled by the half width h so it
// integrates in t rather than x, and shifted to vanish at x = -1.
std::vector<double> antiderivative_coeffs(const std::vector<double>& c,
                                          double h) {
  // Work in the convention where only the first coefficient is halved
  // in the sum; the recurrence b_k = (a_{k-1} - a_{k+1}) / (2k) holds
  // there for every k >= 1.
  std::vector<double> a(kN + 3, 0.0);
  a[0] = 2.0 * c[0];
  for (int k = 1; k < kN; ++k) a[k] = c[k];
  a[kN] = 2.0 * c[kN];

  std::vector<double> b(kN + 2, 0.0);
  for (int k = 1; k <= kN + 1; ++k) b[k] = h * (a[k - 1] - a[k + 1]) / (2.0 * k);
  // Fix the constant through the same Clenshaw recurrence used for
  // queries, so evaluating at x = -1 gives exactly 0.0 and the panel
  // chain stays bitwise continuous.
  b[0] = -clenshaw(b, -1.0);
  return b;
}

}  // namespace

CumulativeIntegral cumulative(const std::function<double(double)>& f,
                              double t_min, double t_max, double tol) {
  if (!(t_min < t_max))
    throw Error("cumulative: empty domain [" + format_double(t_min) + ", " +
                format_double(t_max) + "]");
  if (t_min > 0.0 || t_max < 0.0)
    throw Error("cumulative: domain [" + format_double(t_min) + ", " +
                format_double(t_max) + "] does not contain the anchor 0");

  // Rough magnitude of the whole integral, for the mixed tolerance.
  double rough, rough_err;
  gk15(f, t_min, t_max, &rough, &rough_err);
  const double width_total = t_max - t_min;
  // Error per unit length; half to leave room for summation across panels.
  const double rate = 0.5 * tol * (1.0 + std::fabs(rough)) / width_total;

  CumulativeIntegral ci;
  ci.t_min_ = t_min;
  ci.t_max_ = t_max;
  ci.tol_ = tol;

  // Build panels left to right, splitting until the coefficient tail of
  // the degree 16 interpolant says both the integral and the pointwise
  // interpolation error are under budget.
  struct Job {
    double a, b;
    int depth;
  };
  std::vector<Job> stack;
  if (t_max > 0.0) stack.push_back({0.0, t_max, 0});
  if (t_min < 0.0) stack.push_back({t_min, 0.0, 0});
  // Process jobs so panels come out ordered; the stack top is always the
  // leftmost pending interval.
  std::vector<CumulativeIntegral::Panel> panels;
  while (!stack.empty()) {
    const Job job = stack.back();
    stack.pop_back();
    const double h = 0.5 * (job.b - job.a);
    const double c = 0.5 * (job.a + job.b);
    std::array<double, kN + 1> fv;
    for (int j = 0; j <= kN; ++j) {
      const double x = std::cos(kPi * j / kN);  // 1 down to -1
      fv[j] = sample(f, c + h * x, job.a, job.b);
    }
    std::vector<double> coeff = cheb_coeffs(fv);
    const double tail =
        std::fabs(coeff[kN]) + std::fabs(coeff[kN - 1]) + std::fabs(coeff[kN - 2]);
    if (tail > rate && job.depth < 40) {
      if (2.0 * h < 1e-13 * (1.0 + std::fabs(job.a) + std::fabs(job.b)))
        throw QuadError("cumulative quadrature failed to converge on [" +
                            format_double(job.a) + ", " +
                            format_double(job.b) + "]",
                        job.a, job.b);
      stack.push_back({c, job.b, job.depth + 1});
      stack.push_back({job.a, c, job.depth + 1});
      continue;
    }
    if (tail > rate)
      throw QuadError("cumulative quadrature failed to converge on [" +
                          format_double(job.a) + ", " + format_double(job.b) +
                          "]",
                      job.a, job.b);
    CumulativeIntegral::Panel p;
    p.a = job.a;
    p.b = job.b;
    p.anti = antiderivative_coeffs(coeff, h);
    p.integrand = std::move(coeff);
    panels.push_back(std::move(p));
  }
  std::sort(panels.begin(), panels.end(),
            [](const auto& x, const auto& y) { return x.a < y.a; });

  double base = 0.0;
  for (auto& p : panels) {
    p.base = base;
    base += clenshaw(p.anti, 1.0);
  }
  ci.panels_ = std::move(panels);

  ci.breaks_.reserve(ci.panels_.size() + 1);
  ci.break_values_.reserve(ci.panels_.size() + 1);
  for (const auto& p : ci.panels_) {
    ci.breaks_.push_back(p.a);
    ci.break_values_.push_back(p.base);
  }
  ci.breaks_.push_back(t_max);
  ci.break_values_.push_back(base);

  // Anchor so value(0) is exactly zero; 0 is a panel boundary by
  // construction.
  const auto it =
      std::lower_bound(ci.breaks_.begin(), ci.breaks_.end(), 0.0);
  ci.anchor_ = ci.break_values_[it - ci.breaks_.begin()];
  for (auto& v : ci.break_values_) v -= ci.anchor_;
  return ci;
}

const CumulativeIntegral::Panel& CumulativeIntegral::locate(double t) const {
  if (panels_.empty()) throw Error("cumulative integral is empty");
  const double slack = 1e-9 * (1.0 + std::fabs(t_min_) + std::fabs(t_max_));
  if (t < t_min_ - slack || t > t_max_ + slack)
    throw Error("cumulative integral queried at t = " + format_double(t) +
                " outside [" + format_double(t_min_) + ", " +
                format_double(t_max_) + "]");
  // breaks_ has panel count + 1 entries; find the panel whose [a, b]
  // contains t.
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  std::ptrdiff_t idx = (it - breaks_.begin()) - 1;
  idx = std::clamp<std::ptrdiff_t>(idx, 0,
                                   static_cast<std::ptrdiff_t>(panels_.size()) - 1);
  return panels_[static_cast<std::size_t>(idx)];
}

double CumulativeIntegral::value(double t) const {
  const Panel& p = locate(t);
  const double x =
      std::clamp((2.0 * t - (p.a + p.b)) / (p.b - p.a), -1.0, 1.0);
  return p.base + clenshaw(p.anti, x) - anchor_;
}

double CumulativeIntegral::derivative(double t) const {
  const Panel& p = locate(t);
  const double x =
      std::clamp((2.0 * t - (p.a + p.b)) / (p.b - p.a), -1.0, 1.0);
  return clenshaw(p.integrand, x);
}

}  // namespace revsurf
