#pragma once

#include <string>
#include <vector>

#include "drzero/core.hpp"
#include "drzero/dr_engine.hpp"
#include "drzero/function_model.hpp"

namespace drzero {

enum class CellClass { Solution, CriticalFixedPoint, MaxedOut, Diverged };

std::string cell_class_name(CellClass c);

struct BasinCell {
  int iterations = -1;  // -1 when the target was never reached
  ProductPoint terminal;
  CellClass classification = CellClass::MaxedOut;
};

struct BasinGridSpec {
  double x_lo = -10.0, x_hi = 10.0;
  double rho_lo = -10.0, rho_hi = 10.0;
  int nx = 101, nrho = 101;
  double tolerance = 1e-6;  // distance to the nearest solution point (x*, 0)

  void validate() const;
  double x_at(int col) const;
  double rho_at(int row) const;
};

/// Row-major grid of per-start results: iterations to reach the tolerance
/// ball around the nearest zero, the terminal iterate, and a classification.
struct BasinGrid {
  BasinGridSpec spec;
  std::vector<BasinCell> cells;  // size nx * nrho, row-major in (row, col)

  const BasinCell& at(int row, int col) const { return cells[row * spec.nx + col]; }
};

/// Run the DR iteration from every grid start. Cells are independent and are
/// processed in parallel; results are identical regardless of thread count.
/// `threads` = 0 picks DRZERO_THREADS or the hardware concurrency.
BasinGrid scan(const FunctionModel& m, const BasinGridSpec& spec, const NumericConfig& cfg,
               int threads = 0);

/// Empirical linear-convergence estimate from a trajectory tail.
struct RateEstimate {
  double q_rate = 0.0;  // max of the last <=10 distance ratios
  double r_rate = 0.0;  // exp(slope) of a least-squares fit of log-distances
  int tail_length = 0;
  ProductPoint target;
};

RateEstimate estimate_rate(const Trajectory& t, const ProductPoint& target,
                           const NumericConfig& cfg);

}  // namespace drzero
