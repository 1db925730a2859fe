#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drzero/core.hpp"
#include "drzero/function_model.hpp"

namespace drzero {

/// Outcome of one verification criterion. `detail` is deterministic for a
/// fixed seed; wall-clock timing is reported separately.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Run the full verification suite with one seeded generator. Criteria are
/// independent; a failure in one does not stop the others.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed);

/// Brute-force nearest-point oracle on the graph of a dimension-1 model:
/// a dense uniform grid over the domain clipped to [-50, 50] followed by
/// local quadratic refinement around the best grid nodes. Independent of the
/// project_graph search path; used for cross-validation only.
struct OracleProjection {
  double p = 0.0;
  double squared_distance = 0.0;
};
OracleProjection dense_grid_projection_oracle(const FunctionModel& m, double x, double rho,
                                              int grid_points = 200000);

}  // namespace drzero
