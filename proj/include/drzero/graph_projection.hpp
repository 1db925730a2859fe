#pragma once

#include <vector>

#include "drzero/core.hpp"
#include "drzero/function_model.hpp"

namespace drzero {

/// One nearest point (p, f(p)) of (x, rho) on the graph of f.
struct GraphProjection {
  Vector p;
  double fp = 0.0;                   // f(p), recomputed from the model
  double squared_distance = 0.0;     // |p - x|^2 + (fp - rho)^2
  bool multivalued = false;          // another global minimizer was detected
  double certificate_residual = 0.0; // dist(x, p + (f(p) - rho) * d0f(p))
};

/// All detected nearest points of (x, rho) on gra f, sorted ascending by
/// abscissa (for PowerNorm in R^n: ascending along the ray through x).
///
/// Closed form is used for the Linear family; everything else runs a global
/// scan over the (clipped) domain followed by golden-section refinement and,
/// on smooth brackets, a stationarity polish. Dimension > 1 is supported for
/// PowerNorm only, via reduction to the ray through x.
std::vector<GraphProjection> project_graph(const FunctionModel& m, const Vector& x,
                                           double rho, const NumericConfig& cfg);

/// The PowerNorm radial reduction, exposed for direct testing.
std::vector<GraphProjection> radial_project_power_norm(const FunctionModel& m,
                                                       const Vector& x, double rho,
                                                       const NumericConfig& cfg);

}  // namespace drzero
