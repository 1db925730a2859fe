#include "drzero/baselines.hpp"

#include <cmath>
#include <limits>

namespace drzero {

namespace {
// Two MAP iterates this close while the residual is still large mean the
// iteration is trapped, not slowly converging.
constexpr double kStallCoincidence = 1e-12;
}  // namespace

std::string method_verdict_name(MethodVerdict v) {
  switch (v) {
    case MethodVerdict::ConvergedToSolution: return "converged_to_solution";
    case MethodVerdict::Stalled: return "stalled";
    case MethodVerdict::Diverged: return "diverged";
    case MethodVerdict::Undefined: return "undefined";
  }
  return "unknown";
}

ProductPoint map_step(const FunctionModel& m, const ProductPoint& z, const NumericConfig& cfg,
                      int selection) {
  const auto projs = project_graph(m, z.x, 0.0, cfg);
  if (selection < 0 || selection >= static_cast<int>(projs.size()))
    throw ValidationError("map_step: selection index out of range");
  return ProductPoint(projs[selection].p, projs[selection].fp);
}

Vector newton_step(const FunctionModel& m, const Vector& x) {
  if (!m.differentiable_at(x))
    throw UnsupportedError("newton_step: f is not differentiable at this point");
  const Vector g = m.gradient(x);
  const double gn2 = g.squaredNorm();
  if (gn2 == 0.0) throw DerivativeSingularError("newton_step: derivative vanishes");
  const double fx = m.evaluate(x);
  return x - (fx / gn2) * g;
}

Trajectory iterate_map(const FunctionModel& m, const ProductPoint& z0, const NumericConfig& cfg) {
  cfg.validate();
  if (!z0.all_finite()) throw ValidationError("iterate_map: starting point is not finite");

  Trajectory t;
  t.method = "map";
  t.iterates.push_back(z0);
  t.f_values.push_back(m.in_domain(z0.x, 1e-12) ? m.evaluate(z0.x)
                                                : std::numeric_limits<double>::quiet_NaN());
  t.termination = Termination::MaxIterations;

  ProductPoint z = z0;
  for (int n = 0; n < cfg.max_iterations; ++n) {
    const auto projs = project_graph(m, z.x, 0.0, cfg);
    const GraphProjection& g = projs[0];
    ProductPoint z1(g.p, g.fp);
    const double step = product_distance(z1, z);
    t.iterates.push_back(z1);
    t.f_values.push_back(g.fp);
    t.step_norms.push_back(step);
    t.selection_indices.push_back(0);
    z = z1;

    if (product_norm(z) > kDivergenceGuard) {
      t.termination = Termination::Diverged;
      break;
    }
    // Either genuine convergence or an exact trap; the verdict tells them apart.
    if (step <= kStallCoincidence ||
        (step <= cfg.step_tolerance && std::fabs(g.fp) <= cfg.residual_tolerance)) {
      t.termination = Termination::StepTolerance;
      break;
    }
  }
  return t;
}

Trajectory iterate_newton(const FunctionModel& m, const Vector& x0, const NumericConfig& cfg) {
  cfg.validate();
  Trajectory t;
  t.method = "newton";
  t.iterates.emplace_back(x0, 0.0);
  t.f_values.push_back(m.in_domain(x0, 1e-12) ? m.evaluate(x0)
                                              : std::numeric_limits<double>::quiet_NaN());
  t.termination = Termination::MaxIterations;
  if (!std::isfinite(t.f_values.back())) {
    t.undefined_step = true;
    return t;
  }
  if (std::fabs(t.f_values.back()) <= cfg.residual_tolerance) {
    t.termination = Termination::ResidualTolerance;
    return t;
  }

  Vector x = x0;
  for (int n = 0; n < cfg.max_iterations; ++n) {
    Vector x1;
    try {
      x1 = newton_step(m, x);
    } catch (const Error&) {
      t.undefined_step = true;
      break;
    }
    double fx1;
    try {
      fx1 = m.evaluate(x1);
    } catch (const Error&) {
      t.undefined_step = true;
      break;
    }
    ProductPoint z1(x1, 0.0);
    t.step_norms.push_back((x1 - x).norm());
    t.selection_indices.push_back(0);
    t.iterates.push_back(z1);
    t.f_values.push_back(fx1);
    x = x1;

    if (x.norm() > kDivergenceGuard) {
      t.termination = Termination::Diverged;
      break;
    }
    if (std::fabs(fx1) <= cfg.residual_tolerance) {
      t.termination = Termination::ResidualTolerance;
      break;
    }
  }
  return t;
}

namespace {

MethodVerdict judge(const FunctionModel& m, const Trajectory& t, const NumericConfig& cfg) {
  if (t.undefined_step) return MethodVerdict::Undefined;
  if (t.termination == Termination::Diverged) return MethodVerdict::Diverged;
  const ProductPoint& z = t.terminal();
  double fx = std::numeric_limits<double>::infinity();
  if (m.in_domain(z.x, 1e-12)) fx = std::fabs(m.evaluate(z.x));
  const double rho_tol = std::max(1e-3, 1e3 * cfg.residual_tolerance);
  if (fx <= cfg.residual_tolerance && std::fabs(z.rho) <= rho_tol)
    return MethodVerdict::ConvergedToSolution;
  return MethodVerdict::Stalled;
}

}  // namespace

ComparisonReport run_comparison(const FunctionModel& m, const ProductPoint& z0,
                                const NumericConfig& cfg) {
  ComparisonReport rep;
  rep.dr = iterate(m, z0, cfg);
  rep.map = iterate_map(m, z0, cfg);
  rep.newton = iterate_newton(m, z0.x, cfg);
  rep.dr_verdict = judge(m, rep.dr, cfg);
  rep.map_verdict = judge(m, rep.map, cfg);
  rep.newton_verdict = judge(m, rep.newton, cfg);
  return rep;
}

}  // namespace drzero
