#include "drzero/dr_engine.hpp"

#include <cmath>
#include <limits>

namespace drzero {

namespace {

int select_projection(const std::vector<GraphProjection>& projs, SelectionPolicy policy,
                      const Vector& previous_x) {
  if (policy == SelectionPolicy::First || projs.size() == 1) return 0;
  int best = 0;
  double best_d = (projs[0].p - previous_x).norm();
  for (int i = 1; i < static_cast<int>(projs.size()); ++i) {
    const double d = (projs[i].p - previous_x).norm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::StepTolerance: return "step_tolerance";
    case Termination::ResidualTolerance: return "residual_tolerance";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::Diverged: return "diverged";
  }
  return "unknown";
}

std::string fixed_point_class_name(FixedPointClass c) {
  switch (c) {
    case FixedPointClass::Intersection: return "intersection";
    case FixedPointClass::CriticalPositiveRho: return "critical_positive_rho";
    case FixedPointClass::CriticalNegativeRho: return "critical_negative_rho";
    case FixedPointClass::NotFixed: return "not_fixed";
  }
  return "unknown";
}

ProductPoint dr_step(const FunctionModel& m, const ProductPoint& z, const NumericConfig& cfg,
                     int selection) {
  const auto projs = project_graph(m, z.x, -z.rho, cfg);
  if (selection < 0 || selection >= static_cast<int>(projs.size()))
    throw ValidationError("dr_step: selection index out of range");
  const GraphProjection& g = projs[selection];
  return ProductPoint(g.p, z.rho + g.fp);
}

ProductPoint dr_inverse(const FunctionModel& m, const ProductPoint& z) {
  if (!m.differentiable_at(z.x))
    throw UnsupportedError("dr_inverse: f is not differentiable at this point");
  const Vector g = m.gradient(z.x);
  const double fy = m.evaluate(z.x);
  return ProductPoint(z.x + z.rho * g, z.rho - fy);
}

Trajectory iterate(const FunctionModel& m, const ProductPoint& z0, const NumericConfig& cfg,
                   SelectionPolicy policy) {
  cfg.validate();
  if (!z0.all_finite()) throw ValidationError("iterate: starting point is not finite");
  if (z0.dimension() != m.dimension()) throw ValidationError("iterate: dimension mismatch");

  Trajectory t;
  t.method = "dr";
  t.iterates.push_back(z0);
  // The start may sit outside dom f; the first step projects into it.
  double f0 = std::numeric_limits<double>::quiet_NaN();
  if (m.in_domain(z0.x, 1e-12)) f0 = m.evaluate(z0.x);
  t.f_values.push_back(f0);
  t.termination = Termination::MaxIterations;

  ProductPoint z = z0;
  for (int n = 0; n < cfg.max_iterations; ++n) {
    const auto projs = project_graph(m, z.x, -z.rho, cfg);
    const int sel = select_projection(projs, policy, z.x);
    const GraphProjection& g = projs[sel];
    ProductPoint z1(g.p, z.rho + g.fp);
    const double step = product_distance(z1, z);

    t.iterates.push_back(z1);
    t.f_values.push_back(g.fp);
    t.step_norms.push_back(step);
    t.selection_indices.push_back(sel);
    z = z1;

    if (product_norm(z) > kDivergenceGuard) {
      t.termination = Termination::Diverged;
      break;
    }
    if (step <= cfg.step_tolerance && std::fabs(g.fp) <= cfg.residual_tolerance) {
      t.termination = Termination::StepTolerance;
      break;
    }
  }
  return t;
}

FixedPointReport classify_fixed_point(const FunctionModel& m, const ProductPoint& z,
                                      const NumericConfig& cfg) {
  FixedPointReport r;
  r.point = z;
  ProductPoint tz = z;
  try {
    tz = dr_step(m, z, cfg, 0);
  } catch (const Error&) {
    r.is_fixed = false;
    r.classification = FixedPointClass::NotFixed;
    r.residual = std::numeric_limits<double>::infinity();
    return r;
  }
  r.residual = product_distance(tz, z);
  r.is_fixed = r.residual <= cfg.step_tolerance;
  if (!r.is_fixed) {
    r.classification = FixedPointClass::NotFixed;
    return r;
  }

  const double tol = cfg.residual_tolerance;
  double fx = std::numeric_limits<double>::infinity();
  if (m.in_domain(z.x, 1e-12)) fx = std::fabs(m.evaluate(z.x));

  if (fx <= tol && std::fabs(z.rho) <= tol) {
    r.classification = FixedPointClass::Intersection;
  } else if (fx <= tol && z.rho > tol && m.lower_subdifferential(z.x).contains_zero(tol)) {
    r.classification = FixedPointClass::CriticalPositiveRho;
  } else if (fx <= tol && z.rho < -tol && m.upper_subdifferential(z.x).contains_zero(tol)) {
    r.classification = FixedPointClass::CriticalNegativeRho;
  } else {
    r.classification = FixedPointClass::NotFixed;
  }
  return r;
}

}  // namespace drzero
