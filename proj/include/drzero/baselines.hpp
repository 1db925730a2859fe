#pragma once

#include <string>

#include "drzero/core.hpp"
#include "drzero/dr_engine.hpp"
#include "drzero/function_model.hpp"

namespace drzero {

/// One step of the method of alternating projections: the selected projection
/// of (x, 0) onto gra f.
ProductPoint map_step(const FunctionModel& m, const ProductPoint& z, const NumericConfig& cfg,
                      int selection = 0);

/// Newton step for the scalar equation f(x) = 0. In dimension one this is
/// x - f(x)/f'(x); in higher dimensions the least-norm solution
/// x - f(x) grad f(x)/|grad f(x)|^2 (which coincides with it for n = 1).
/// Throws DerivativeSingular when the derivative vanishes, Unsupported where
/// it does not exist.
Vector newton_step(const FunctionModel& m, const Vector& x);

Trajectory iterate_map(const FunctionModel& m, const ProductPoint& z0, const NumericConfig& cfg);
Trajectory iterate_newton(const FunctionModel& m, const Vector& x0, const NumericConfig& cfg);

enum class MethodVerdict { ConvergedToSolution, Stalled, Diverged, Undefined };

std::string method_verdict_name(MethodVerdict v);

struct ComparisonReport {
  Trajectory dr, map, newton;
  MethodVerdict dr_verdict = MethodVerdict::Stalled;
  MethodVerdict map_verdict = MethodVerdict::Stalled;
  MethodVerdict newton_verdict = MethodVerdict::Stalled;
};

/// Run DR, MAP, and Newton from the same start with shared tolerances.
/// Failures are verdicts, not errors.
ComparisonReport run_comparison(const FunctionModel& m, const ProductPoint& z0,
                                const NumericConfig& cfg);

}  // namespace drzero
