#include "drzero/basin_scan.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace drzero {

std::string cell_class_name(CellClass c) {
  switch (c) {
    case CellClass::Solution: return "solution";
    case CellClass::CriticalFixedPoint: return "critical_fixed_point";
    case CellClass::MaxedOut: return "maxed_out";
    case CellClass::Diverged: return "diverged";
  }
  return "unknown";
}

void BasinGridSpec::validate() const {
  if (nx < 1 || nrho < 1) throw ValidationError("basin grid resolution must be >= 1");
  if (!(x_hi >= x_lo) || !(rho_hi >= rho_lo)) throw ValidationError("basin grid ranges are inverted");
  if (!(tolerance > 0.0)) throw ValidationError("basin tolerance must be > 0");
}

double BasinGridSpec::x_at(int col) const {
  if (nx == 1) return 0.5 * (x_lo + x_hi);
  return x_lo + (x_hi - x_lo) * col / (nx - 1);
}

double BasinGridSpec::rho_at(int row) const {
  if (nrho == 1) return 0.5 * (rho_lo + rho_hi);
  return rho_lo + (rho_hi - rho_lo) * row / (nrho - 1);
}

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DRZERO_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

BasinCell classify_cell(const FunctionModel& m, const Trajectory& t,
                        const std::vector<Vector>& zeros, double tol) {
  BasinCell cell;
  cell.terminal = t.terminal();

  auto x_dist = [&](const ProductPoint& z) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& xb : zeros) best = std::min(best, (z.x - xb).norm());
    return best;
  };
  auto product_dist = [&](const ProductPoint& z) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& xb : zeros)
      best = std::min(best, std::sqrt((z.x - xb).squaredNorm() + z.rho * z.rho));
    return best;
  };

  for (int n = 0; n < static_cast<int>(t.iterates.size()); ++n) {
    if (product_dist(t.iterates[n]) <= tol) {
      cell.iterations = n;
      cell.classification = CellClass::Solution;
      return cell;
    }
  }
  // Terminal rho away from zero: measure against the abscissa only and call
  // it a critical fixed point.
  if (std::fabs(cell.terminal.rho) > 1e-3) {
    for (int n = 0; n < static_cast<int>(t.iterates.size()); ++n) {
      if (x_dist(t.iterates[n]) <= tol) {
        cell.iterations = n;
        cell.classification = CellClass::CriticalFixedPoint;
        return cell;
      }
    }
  }
  cell.iterations = -1;
  cell.classification =
      t.termination == Termination::Diverged ? CellClass::Diverged : CellClass::MaxedOut;
  (void)m;
  return cell;
}

}  // namespace

BasinGrid scan(const FunctionModel& m, const BasinGridSpec& spec, const NumericConfig& cfg,
               int threads) {
  spec.validate();
  cfg.validate();
  if (m.dimension() != 1) throw UnsupportedError("basin scan requires a dimension-1 model");

  BasinGrid grid;
  grid.spec = spec;
  grid.cells.resize(static_cast<size_t>(spec.nx) * spec.nrho);
  const auto zeros = m.known_zeros();
  const Interval dom = m.domain();

  const int total = spec.nx * spec.nrho;
  const int nthreads = std::min(resolve_threads(threads), total);
  std::atomic<int> next{0};

  auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= total) return;
      const int row = idx / spec.nx;
      const int col = idx % spec.nx;
      double x0 = spec.x_at(col);
      // Starts outside a bounded domain are clipped onto it.
      x0 = std::min(std::max(x0, dom.lo), dom.hi);
      const ProductPoint z0 = ProductPoint::scalar(x0, spec.rho_at(row));
      const Trajectory t = iterate(m, z0, cfg);
      grid.cells[idx] = classify_cell(m, t, zeros, spec.tolerance);
    }
  };

  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return grid;
}

RateEstimate estimate_rate(const Trajectory& t, const ProductPoint& target,
                           const NumericConfig& cfg) {
  constexpr double kFloor = 1e-13;
  const int count = static_cast<int>(t.iterates.size());
  if (count < 2) throw InsufficientTailError("estimate_rate: trajectory too short");

  std::vector<double> d(count);
  for (int i = 0; i < count; ++i) d[i] = product_distance(t.iterates[i], target);
  if (d.back() > 10.0 * cfg.step_tolerance)
    throw InsufficientTailError("estimate_rate: trajectory did not converge to the target");

  std::vector<int> eligible;
  for (int i = 0; i < count; ++i)
    if (d[i] > kFloor) eligible.push_back(i);
  if (static_cast<int>(eligible.size()) < 10)
    throw InsufficientTailError("estimate_rate: fewer than 10 iterates above the numeric floor");

  // Ratios over the last consecutive pairs above the floor.
  std::vector<double> ratios;
  for (int i = 0; i + 1 < count; ++i)
    if (d[i] > kFloor && d[i + 1] > kFloor) ratios.push_back(d[i + 1] / d[i]);
  if (ratios.empty()) throw InsufficientTailError("estimate_rate: no usable ratio pairs");
  const int k = std::min<int>(10, static_cast<int>(ratios.size()));
  double q = 0.0;
  for (int i = static_cast<int>(ratios.size()) - k; i < static_cast<int>(ratios.size()); ++i)
    q = std::max(q, ratios[i]);

  // Least-squares slope of log-distance over the tail window.
  const int fit_len = std::min<int>(20, static_cast<int>(eligible.size()));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int j = static_cast<int>(eligible.size()) - fit_len; j < static_cast<int>(eligible.size());
       ++j) {
    const double xi = eligible[j];
    const double yi = std::log(d[eligible[j]]);
    sx += xi;
    sy += yi;
    sxx += xi * xi;
    sxy += xi * yi;
  }
  const double denom = fit_len * sxx - sx * sx;
  const double slope = denom != 0.0 ? (fit_len * sxy - sx * sy) / denom : 0.0;

  RateEstimate est;
  est.q_rate = q;
  est.r_rate = std::exp(slope);
  est.tail_length = fit_len;
  est.target = target;
  return est;
}

}  // namespace drzero
