#pragma once

#include <string>
#include <vector>

#include "drzero/core.hpp"
#include "drzero/function_model.hpp"
#include "drzero/graph_projection.hpp"

namespace drzero {

enum class Termination { StepTolerance, ResidualTolerance, MaxIterations, Diverged };

enum class SelectionPolicy {
  First,              // lowest abscissa when the projector is multivalued
  NearestToPrevious,  // minimize |p - x_previous|
};

std::string termination_name(Termination t);

/// Ordered iterates of one run with per-step diagnostics. Baseline methods
/// reuse the same record with a different method tag.
struct Trajectory {
  std::string method = "dr";            // "dr", "map", or "newton"
  std::vector<ProductPoint> iterates;   // z_0 .. z_N
  std::vector<double> f_values;         // f(x_n); NaN when x_0 is outside dom f
  std::vector<double> step_norms;       // |z_{n+1} - z_n|, size N
  std::vector<int> selection_indices;   // projection picked at each step, size N
  Termination termination = Termination::MaxIterations;
  bool undefined_step = false;          // a step was undefined (Newton division by zero)

  int steps() const { return static_cast<int>(step_norms.size()); }
  const ProductPoint& terminal() const { return iterates.back(); }
};

/// One Douglas-Rachford step: z -> (0, rho) + P_B(x, -rho), choosing the
/// `selection`-th projection when multivalued.
ProductPoint dr_step(const FunctionModel& m, const ProductPoint& z, const NumericConfig& cfg,
                     int selection = 0);

/// Inverse of the DR operator on the smooth region:
/// (y, sigma) -> (y + sigma * grad f(y), sigma - f(y)).
ProductPoint dr_inverse(const FunctionModel& m, const ProductPoint& z);

/// Run the DR iteration from z0 until the step and residual tolerances hold
/// simultaneously, the iteration budget is exhausted, or the iterates blow up.
Trajectory iterate(const FunctionModel& m, const ProductPoint& z0, const NumericConfig& cfg,
                   SelectionPolicy policy = SelectionPolicy::First);

enum class FixedPointClass { Intersection, CriticalPositiveRho, CriticalNegativeRho, NotFixed };

std::string fixed_point_class_name(FixedPointClass c);

struct FixedPointReport {
  ProductPoint point;
  bool is_fixed = false;
  FixedPointClass classification = FixedPointClass::NotFixed;
  double residual = 0.0;  // |T z - z| for the first selection
};

/// Classify z as an intersection point, a critical fixed point (zero of f
/// with 0 in the one-sided subdifferential and rho of the matching sign), or
/// not fixed at all.
FixedPointReport classify_fixed_point(const FunctionModel& m, const ProductPoint& z,
                                      const NumericConfig& cfg);

}  // namespace drzero
