#include "drzero/graph_projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace drzero {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Squared distance from (x, rho) to the graph point (y, f(y)), as a function
// of the abscissa y, together with its stationarity function
//   h(y) = (y - x) + (f(y) - rho) f'(y)   (half the objective derivative).
struct GraphObjective {
  const FunctionModel* m;
  double x;
  double rho;

  double value(double y) const {
    const double fy = m->value1(y);
    const double dx = y - x;
    const double dr = fy - rho;
    return dx * dx + dr * dr;
  }
  double stationarity(double y) const {
    return (y - x) + (m->value1(y) - rho) * m->grad1(y);
  }
  double stationarity_slope(double y) const {
    const double fp = m->grad1(y);
    return 1.0 + fp * fp + (m->value1(y) - rho) * m->hess1(y);
  }
};

double golden_section(const GraphObjective& obj, double a, double b, double tol) {
  static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = obj.value(x1);
  double f2 = obj.value(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = obj.value(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = obj.value(x2);
    }
  }
  return 0.5 * (a + b);
}

// Abscissas at which the stationarity function may fail to exist or to be
// differentiable; brackets containing one are refined by golden section only.
std::vector<double> polish_barriers(const FunctionModel& m) {
  switch (m.family()) {
    case Family::PowerNorm:
    case Family::SignedPower:
    case Family::PiecewiseNonconvex:
    case Family::PiecewiseConvex:
      return {0.0};
    default:
      return {};
  }
}

// Drive the stationarity function to zero inside [a, b] with a safeguarded
// Newton/bisection hybrid. Falls back to `seed` when the bracket does not
// straddle a sign change.
double polish_stationary(const GraphObjective& obj, double a, double b, double seed) {
  double ha, hb;
  try {
    ha = obj.stationarity(a);
    hb = obj.stationarity(b);
  } catch (const Error&) {
    return seed;
  }
  if (!std::isfinite(ha) || !std::isfinite(hb)) return seed;
  if ((ha > 0.0) == (hb > 0.0)) return seed;
  if (ha > 0.0) std::swap(a, b);  // h(a) <= 0 <= h(b)

  double y = seed;
  for (int it = 0; it < 80; ++it) {
    double h, slope;
    try {
      h = obj.stationarity(y);
      slope = obj.stationarity_slope(y);
    } catch (const Error&) {
      return seed;
    }
    if (h == 0.0) return y;
    if (h < 0.0)
      a = y;
    else
      b = y;
    double next = y;
    if (std::isfinite(slope) && slope > 0.0) next = y - h / slope;
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (!(next > lo && next < hi)) next = 0.5 * (a + b);
    if (std::fabs(next - y) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                   (1.0 + std::fabs(y)))
      return next;
    y = next;
  }
  return y;
}

struct ScalarCandidate {
  double t;
  double value;
};

// Global search over the clipped domain window: coarse uniform scan, bracket
// refinement in every detected basin, explicit kink/endpoint candidates.
std::vector<ScalarCandidate> search_scalar(const FunctionModel& m, double cx, double rho,
                                           const NumericConfig& cfg) {
  const GraphObjective obj{&m, cx, rho};
  const Interval dom = m.domain();

  const double radius = std::max(50.0, 10.0 * (1.0 + std::fabs(cx) + std::fabs(rho)));
  const double lo = std::max(dom.lo, cx - radius);
  const double hi = std::min(dom.hi, cx + radius);

  const int n = cfg.projection_grid_points;
  const double step = (hi - lo) / (n - 1);

  std::vector<double> grid(n), val(n);
  bool any_finite = false;
  for (int i = 0; i < n; ++i) {
    grid[i] = lo + step * i;
    val[i] = obj.value(grid[i]);
    if (std::isfinite(val[i])) any_finite = true;
  }
  if (!any_finite) throw SearchFailureError("no finite objective value in the scan window");

  const std::vector<double> barriers = polish_barriers(m);
  auto bracket_is_smooth = [&](double a, double b) {
    for (double k : barriers)
      if (k > a && k < b) return false;
    if (dom.lo >= a && dom.lo <= b) return false;
    if (dom.hi >= a && dom.hi <= b) return false;
    return true;
  };

  std::vector<ScalarCandidate> cands;
  auto refine_bracket = [&](double a, double b) {
    if (!(b > a)) return;
    double t = golden_section(obj, a, b, cfg.projection_refine_tolerance);
    if (bracket_is_smooth(a, b)) t = polish_stationary(obj, a, b, t);
    cands.push_back({t, obj.value(t)});
  };

  for (int i = 0; i < n; ++i) {
    const double vm = i > 0 ? val[i - 1] : kInf;
    const double vp = i + 1 < n ? val[i + 1] : kInf;
    if (std::isfinite(val[i]) && val[i] <= vm && val[i] <= vp) {
      const double a = i > 0 ? grid[i - 1] : grid[i];
      const double b = i + 1 < n ? grid[i + 1] : grid[i];
      refine_bracket(a, b);
    }
  }

  // Kinks are candidates in their own right and seed one-sided brackets.
  for (double k : m.kink_points()) {
    if (k < lo || k > hi) continue;
    cands.push_back({k, obj.value(k)});
    refine_bracket(std::max(lo, k - step), k);
    refine_bracket(k, std::min(hi, k + step));
  }
  for (double k : barriers) {
    if (k < lo || k > hi) continue;
    cands.push_back({k, obj.value(k)});
  }
  // Finite domain endpoints may carry the minimum (e.g. the circle arc ends).
  if (std::isfinite(dom.lo) && dom.lo >= lo) cands.push_back({dom.lo, obj.value(dom.lo)});
  if (std::isfinite(dom.hi) && dom.hi <= hi) cands.push_back({dom.hi, obj.value(dom.hi)});

  if (cands.empty()) throw SearchFailureError("scan produced no candidates");

  double best = kInf;
  for (const auto& c : cands)
    if (std::isfinite(c.value)) best = std::min(best, c.value);
  if (!std::isfinite(best)) throw SearchFailureError("no finite refined candidate");

  const double value_tie = 1e-9 * (1.0 + std::fabs(best));
  std::vector<ScalarCandidate> global;
  for (const auto& c : cands)
    if (c.value <= best + value_tie) global.push_back(c);

  std::sort(global.begin(), global.end(),
            [](const ScalarCandidate& a, const ScalarCandidate& b) { return a.t < b.t; });
  const double merge_tol = 10.0 * cfg.projection_refine_tolerance;
  std::vector<ScalarCandidate> dedup;
  for (const auto& c : global) {
    if (!dedup.empty() && std::fabs(c.t - dedup.back().t) <= merge_tol) {
      if (c.value < dedup.back().value) dedup.back() = c;
      continue;
    }
    dedup.push_back(c);
  }
  return dedup;
}

GraphProjection make_projection(const FunctionModel& m, const Vector& x, double rho,
                                const Vector& p) {
  GraphProjection g;
  g.p = p;
  g.fp = m.evaluate(p);
  const double s = g.fp - rho;
  g.squared_distance = (p - x).squaredNorm() + s * s;
  g.certificate_residual = m.certificate_subdifferential(p).affine_distance(x, p, s);
  return g;
}

std::vector<GraphProjection> project_linear(const FunctionModel& m, const Vector& x,
                                            double rho) {
  const double a = m.alpha(), b = m.beta();
  const double t = (x(0) + a * (rho + b)) / (1.0 + a * a);
  Vector p(1);
  p(0) = t;
  return {make_projection(m, x, rho, p)};
}

}  // namespace

std::vector<GraphProjection> radial_project_power_norm(const FunctionModel& m, const Vector& x,
                                                       double rho, const NumericConfig& cfg) {
  if (m.family() != Family::PowerNorm)
    throw UnsupportedError("radial projection applies to the power_norm family only");
  const double r = x.norm();
  Vector u;
  if (r > 0.0) {
    u = x / r;
  } else {
    // Direction is arbitrary when x = 0; fix the first axis for determinism.
    u = Vector::Zero(m.dimension());
    u(0) = 1.0;
  }
  // f(t u) = alpha |t|^p, so the scalar kernels are the radial restriction
  // and the search runs on the signed ray coordinate t.
  auto cands = search_scalar(m, r, rho, cfg);
  std::vector<GraphProjection> out;
  out.reserve(cands.size());
  for (const auto& c : cands) out.push_back(make_projection(m, x, rho, Vector(c.t * u)));
  const bool multi = out.size() > 1;
  for (auto& g : out) g.multivalued = multi;
  return out;
}

std::vector<GraphProjection> project_graph(const FunctionModel& m, const Vector& x, double rho,
                                           const NumericConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(x.size()) != m.dimension())
    throw ValidationError("project_graph: dimension mismatch");
  if (!x.allFinite() || !std::isfinite(rho))
    throw ValidationError("project_graph: non-finite input");

  if (m.family() == Family::Linear) return project_linear(m, x, rho);
  if (m.dimension() > 1) {
    if (m.family() == Family::PowerNorm) return radial_project_power_norm(m, x, rho, cfg);
    throw UnsupportedError("projection in dimension > 1 is supported for power_norm only");
  }

  auto cands = search_scalar(m, x(0), rho, cfg);
  std::vector<GraphProjection> out;
  out.reserve(cands.size());
  for (const auto& c : cands) {
    Vector p(1);
    p(0) = c.t;
    out.push_back(make_projection(m, x, rho, p));
  }
  const bool multi = out.size() > 1;
  for (auto& g : out) g.multivalued = multi;
  return out;
}

}  // namespace drzero
