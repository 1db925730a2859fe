#include "drzero/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "drzero/baselines.hpp"
#include "drzero/basin_scan.hpp"
#include "drzero/dr_engine.hpp"
#include "drzero/graph_projection.hpp"
#include "drzero/lyapunov.hpp"
#include "drzero/stability.hpp"

namespace drzero {

namespace {

NumericConfig default_cfg() { return NumericConfig{}; }

// Tight tolerances leave a long clean tail for rate estimation.
NumericConfig rate_cfg() {
  NumericConfig cfg;
  cfg.step_tolerance = 1e-13;
  cfg.residual_tolerance = 1e-13;
  cfg.max_iterations = 2000;
  return cfg;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void fail(const std::string& msg) {
    ok = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << msg;
  }
};

CriterionResult criterion_linear_rate(std::mt19937_64& rng) {
  Check c;
  double worst = 0.0;
  for (double alpha : {0.5, 1.0, 2.0, 5.0}) {
    const auto m = FunctionModel::linear(alpha, 0.0);
    const double kappa = 1.0 / std::sqrt(1.0 + alpha * alpha);
    const ProductPoint target = ProductPoint::scalar(0.0, 0.0);
    for (int s = 0; s < 20; ++s) {
      const ProductPoint z0 =
          ProductPoint::scalar(uniform(rng, -10.0, 10.0), uniform(rng, -10.0, 10.0));
      const Trajectory t = iterate(m, z0, rate_cfg());
      if (t.termination != Termination::StepTolerance) {
        c.fail("alpha=" + fmt(alpha) + ": trajectory did not converge");
        continue;
      }
      try {
        const RateEstimate est = estimate_rate(t, target, rate_cfg());
        worst = std::max(worst, std::fabs(est.q_rate - kappa));
      } catch (const Error& e) {
        c.fail("alpha=" + fmt(alpha) + ": " + e.what());
      }
    }
  }
  if (worst > 0.02) c.fail("max |q - kappa| = " + fmt(worst));
  CriterionResult r;
  r.name = "q_rate_linear";
  r.passed = c.ok;
  r.detail = c.ok ? "max |q - kappa| = " + fmt(worst) : c.detail.str();
  return r;
}

CriterionResult criterion_exponential(std::mt19937_64& rng) {
  Check c;
  const auto m = FunctionModel::exponential(0.1, 1.0);
  const double xbar = std::log(10.0);

  BasinGridSpec spec;
  spec.x_lo = -10;
  spec.x_hi = 10;
  spec.rho_lo = -10;
  spec.rho_hi = 10;
  spec.nx = 21;
  spec.nrho = 21;
  spec.tolerance = 1e-6;
  NumericConfig cfg = default_cfg();
  cfg.max_iterations = 2000;
  const BasinGrid grid = scan(m, spec, cfg);
  int solved = 0;
  for (const auto& cell : grid.cells)
    if (cell.classification == CellClass::Solution) ++solved;
  if (solved != spec.nx * spec.nrho)
    c.fail("grid cells converged: " + fmt(solved) + "/" + fmt(spec.nx * spec.nrho));

  // The first five steps from the origin, against the published trajectory.
  const double expected[5][2] = {
      {0.10, -0.89}, {0.35, -1.75}, {1.05, -2.46}, {3.26, -0.85}, {2.99, 0.14}};
  ProductPoint z = ProductPoint::scalar(0.0, 0.0);
  for (int i = 0; i < 5; ++i) {
    z = dr_step(m, z, default_cfg());
    if (std::fabs(z.x(0) - expected[i][0]) > 0.02 || std::fabs(z.rho - expected[i][1]) > 0.02)
      c.fail("step " + fmt(i + 1) + " = (" + fmt(z.x(0)) + "," + fmt(z.rho) + ")");
  }

  const ProductPoint target = ProductPoint::scalar(xbar, 0.0);
  const double kappa = 1.0 / std::sqrt(2.0);
  double worst = 0.0;
  for (int s = 0; s < 10; ++s) {
    const ProductPoint z0 =
        ProductPoint::scalar(uniform(rng, -10.0, 10.0), uniform(rng, -10.0, 10.0));
    try {
      const RateEstimate est = estimate_rate(iterate(m, z0, rate_cfg()), target, rate_cfg());
      worst = std::max(worst, std::fabs(est.q_rate - kappa));
    } catch (const Error& e) {
      c.fail(std::string("rate: ") + e.what());
    }
  }
  if (worst > 0.02) c.fail("max |q - 1/sqrt(2)| = " + fmt(worst));

  CriterionResult r;
  r.name = "exponential_global";
  r.passed = c.ok;
  r.detail = c.ok ? "all 441 cells converged, rate deviation " + fmt(worst) : c.detail.str();
  return r;
}

CriterionResult criterion_piecewise_comparison(std::mt19937_64&) {
  Check c;
  const auto m = FunctionModel::piecewise_convex();
  NumericConfig cfg = default_cfg();
  cfg.max_iterations = 500;
  const ProductPoint z0 = ProductPoint::scalar(-5.0, 0.0);
  const ComparisonReport rep = run_comparison(m, z0, cfg);

  const ProductPoint sol = ProductPoint::scalar(std::sqrt(2.0), 0.0);
  if (rep.dr_verdict != MethodVerdict::ConvergedToSolution)
    c.fail("dr verdict " + method_verdict_name(rep.dr_verdict));
  else if (product_distance(rep.dr.terminal(), sol) > 1e-6)
    c.fail("dr terminal off the solution by " + fmt(product_distance(rep.dr.terminal(), sol)));
  if (rep.map_verdict != MethodVerdict::Stalled)
    c.fail("map verdict " + method_verdict_name(rep.map_verdict));
  else {
    const ProductPoint trap = ProductPoint::scalar(-5.0, -1.0);
    if (product_distance(rep.map.terminal(), trap) > 1e-9)
      c.fail("map terminal away from the trap");
  }
  if (rep.newton_verdict != MethodVerdict::Undefined)
    c.fail("newton verdict " + method_verdict_name(rep.newton_verdict));

  double qdev = 1.0;
  try {
    const RateEstimate est = estimate_rate(iterate(m, z0, rate_cfg()), sol, rate_cfg());
    qdev = std::fabs(est.q_rate - 1.0 / std::sqrt(3.0));
  } catch (const Error& e) {
    c.fail(std::string("rate: ") + e.what());
  }
  if (qdev > 0.02) c.fail("|q - 1/sqrt(3)| = " + fmt(qdev));

  CriterionResult r;
  r.name = "piecewise_convex_comparison";
  r.passed = c.ok;
  r.detail = c.ok ? "dr converged (rate dev " + fmt(qdev) + "), map stalled, newton undefined"
                  : c.detail.str();
  return r;
}

CriterionResult criterion_newton_blowup(std::mt19937_64&) {
  Check c;
  const auto m = FunctionModel::signed_power(3.0, 1.0 / 3.0);
  Vector x(1);
  x(0) = 1.0;
  double expected = 1.0;
  for (int n = 1; n <= 30; ++n) {
    x = newton_step(m, x);
    expected *= -2.0;
    if (std::fabs(x(0) - expected) > 1e-8 * std::fabs(expected)) {
      c.fail("newton iterate " + fmt(n) + " = " + fmt(x(0)) + " vs " + fmt(expected));
      break;
    }
  }

  BasinGridSpec spec;
  spec.nx = 101;
  spec.nrho = 101;
  spec.tolerance = 1e-6;
  const BasinGrid grid = scan(m, spec, default_cfg());
  int solved = 0;
  for (const auto& cell : grid.cells)
    if (cell.classification == CellClass::Solution) ++solved;
  if (solved != spec.nx * spec.nrho)
    c.fail("dr grid cells converged: " + fmt(solved) + "/" + fmt(spec.nx * spec.nrho));

  CriterionResult r;
  r.name = "newton_blowup_vs_dr";
  r.passed = c.ok;
  r.detail = c.ok ? "newton doubles each step; dr converged from all 10201 starts" : c.detail.str();
  return r;
}

CriterionResult criterion_unstable_fixed_point(std::mt19937_64&) {
  Check c;
  const auto m = FunctionModel::power_norm(0.5, 2.0, 1);
  const ProductPoint zbar = ProductPoint::scalar(0.0, -0.5);
  const FixedPointReport fp = classify_fixed_point(m, zbar, default_cfg());
  if (!fp.is_fixed || fp.residual > 1e-9) c.fail("fixed-point residual " + fmt(fp.residual));
  const StabilityReport st = stability_report(m, zbar);
  if (st.psd_condition_holds) c.fail("psd condition unexpectedly holds");

  const ProductPoint z_eps = ProductPoint::scalar(-1e-4, -0.5);
  const double displacement = product_distance(dr_step(m, z_eps, default_cfg()), zbar);
  if (!(displacement >= 0.9)) c.fail("one-step displacement = " + fmt(displacement));

  CriterionResult r;
  r.name = "unstable_fixed_point";
  r.passed = c.ok;
  r.detail = c.ok ? "fixed, psd fails, displacement " + fmt(displacement) : c.detail.str();
  return r;
}

CriterionResult criterion_lyapunov_certificates(std::mt19937_64& rng) {
  Check c;
  struct Case {
    FunctionModel m;
    double x_lo, x_hi;
    bool symmetric;  // mirror the abscissa with a random sign
  };
  const std::vector<Case> cases = {
      {FunctionModel::linear(2.0, 1.0), -8.0, 8.0, false},
      {FunctionModel::exponential(0.5, 2.0), -8.0, 8.0, false},
      {FunctionModel::power_norm(1.0, 1.5, 1), -8.0, 8.0, false},
      {FunctionModel::signed_power(3.0, 1.0 / 3.0), -8.0, 8.0, false},
      {FunctionModel::circle(0.5, 1.0), 0.05, 0.95, true},
      {FunctionModel::piecewise_nonconvex(2.0), -8.0, 8.0, false},
      {FunctionModel::piecewise_convex(), 0.1, 8.0, false},
  };
  NumericConfig cfg;
  cfg.step_tolerance = 1e-10;
  cfg.residual_tolerance = 1e-10;
  cfg.max_iterations = 2000;

  for (const auto& kase : cases) {
    for (int s = 0; s < 20; ++s) {
      double x0 = uniform(rng, kase.x_lo, kase.x_hi);
      if (kase.symmetric && uniform(rng, 0.0, 1.0) < 0.5) x0 = -x0;
      const ProductPoint z0 = ProductPoint::scalar(x0, uniform(rng, -5.0, 5.0));
      const Trajectory t = iterate(kase.m, z0, cfg);
      const LyapunovCertificate cert = check_trajectory(kase.m, t);
      if (cert.verdict != CertificateVerdict::Certified) {
        c.fail(family_name(kase.m.family()) + " start (" + fmt(x0) + "," + fmt(z0.rho) +
               ") verdict " + certificate_verdict_name(cert.verdict));
      }
    }
  }
  CriterionResult r;
  r.name = "lyapunov_certificates";
  r.passed = c.ok;
  r.detail = c.ok ? "all 140 trajectories certified" : c.detail.str();
  return r;
}

CriterionResult criterion_modulus_formula(std::mt19937_64&) {
  Check c;
  struct Case {
    FunctionModel m;
    ProductPoint zbar;
  };
  std::vector<Case> cases;
  cases.push_back({FunctionModel::linear(1.0, 0.0), ProductPoint::scalar(0.0, 0.0)});
  cases.push_back({FunctionModel::linear(2.0, 0.0), ProductPoint::scalar(0.0, 0.0)});
  cases.push_back(
      {FunctionModel::exponential(0.1, 1.0), ProductPoint::scalar(std::log(10.0), 0.0)});
  cases.push_back(
      {FunctionModel::circle(0.5, 1.0), ProductPoint::scalar(std::sqrt(0.75), 0.0)});
  cases.push_back({FunctionModel::piecewise_convex(), ProductPoint::scalar(std::sqrt(2.0), 0.0)});
  cases.push_back(
      {FunctionModel::signed_power(1.0 / 3.0, 3.0), ProductPoint::scalar(0.0, 0.0)});
  {
    const auto m2 = FunctionModel::power_norm(1.0, 2.0, 2);
    cases.push_back({m2, ProductPoint(Vector::Zero(2), 0.0)});
  }

  for (const auto& kase : cases) {
    const auto& m = kase.m;
    const StabilityReport st = stability_report(m, kase.zbar);
    double expected = 1.0;
    if (m.dimension() == 1) {
      const double fp = m.gradient(kase.zbar.x)(0);
      expected = 1.0 / std::sqrt(1.0 + fp * fp);
    }
    if (std::fabs(st.modulus - expected) > 1e-9)
      c.fail(family_name(m.family()) + ": modulus " + fmt(st.modulus) + " vs " + fmt(expected));

    // Central differences of the DR inverse around the fixed point.
    const int n = m.dimension();
    const double h = 1e-6;
    Matrix fd(n + 1, n + 1);
    for (int j = 0; j <= n; ++j) {
      ProductPoint zp = kase.zbar, zm = kase.zbar;
      if (j < n) {
        zp.x(j) += h;
        zm.x(j) -= h;
      } else {
        zp.rho += h;
        zm.rho -= h;
      }
      const ProductPoint fp1 = dr_inverse(m, zp);
      const ProductPoint fm1 = dr_inverse(m, zm);
      for (int i = 0; i <= n; ++i) {
        const double vp = i < n ? fp1.x(i) : fp1.rho;
        const double vm = i < n ? fm1.x(i) : fm1.rho;
        fd(i, j) = (vp - vm) / (2.0 * h);
      }
    }
    if ((fd - st.jacobian_T_inverse).cwiseAbs().maxCoeff() > 1e-5)
      c.fail(family_name(m.family()) + ": jacobian does not match finite differences");
  }

  CriterionResult r;
  r.name = "modulus_formula";
  r.passed = c.ok;
  r.detail = c.ok ? "modulus matches the closed form at all 7 fixed points" : c.detail.str();
  return r;
}

CriterionResult criterion_circle_rate(std::mt19937_64& rng) {
  Check c;
  double worst = 0.0;
  for (double alpha : {0.3, 0.5, 0.7}) {
    const auto m = FunctionModel::circle(alpha, 1.0);
    const double xbar = std::sqrt(1.0 - alpha * alpha);
    const ProductPoint target = ProductPoint::scalar(xbar, 0.0);
    for (int s = 0; s < 10; ++s) {
      const double dx = uniform(rng, -0.035, 0.035);
      const double dr = uniform(rng, -0.035, 0.035);
      const ProductPoint z0 = ProductPoint::scalar(xbar + dx, dr);
      try {
        const RateEstimate est = estimate_rate(iterate(m, z0, rate_cfg()), target, rate_cfg());
        worst = std::max(worst, std::fabs(est.q_rate - alpha));
      } catch (const Error& e) {
        c.fail("alpha=" + fmt(alpha) + ": " + e.what());
      }
    }
  }
  if (worst > 0.02) c.fail("max |q - alpha| = " + fmt(worst));
  CriterionResult r;
  r.name = "circle_local_rate";
  r.passed = c.ok;
  r.detail = c.ok ? "max |q - alpha| = " + fmt(worst) : c.detail.str();
  return r;
}

FunctionModel random_family(std::mt19937_64& rng, int which) {
  auto sgn_of = [&](double v) { return uniform(rng, 0.0, 1.0) < 0.5 ? -v : v; };
  switch (which % 7) {
    case 0: return FunctionModel::linear(sgn_of(uniform(rng, 0.2, 5.0)), uniform(rng, -5.0, 5.0));
    case 1: return FunctionModel::exponential(uniform(rng, 0.1, 5.0), uniform(rng, 0.1, 5.0));
    case 2: return FunctionModel::power_norm(sgn_of(uniform(rng, 0.2, 3.0)), uniform(rng, 0.5, 3.0), 1);
    case 3: return FunctionModel::signed_power(sgn_of(uniform(rng, 0.2, 3.0)), uniform(rng, 0.5, 3.0));
    case 4: {
      const double beta = uniform(rng, 0.5, 3.0);
      return FunctionModel::circle(uniform(rng, 0.05, 0.95) * beta, beta);
    }
    case 5: return FunctionModel::piecewise_nonconvex(uniform(rng, 1.1, 4.0));
    default: return FunctionModel::piecewise_convex();
  }
}

CriterionResult criterion_projection_oracle(std::mt19937_64& rng) {
  Check c;
  double worst_gap = 0.0, worst_cert = 0.0;
  for (int i = 0; i < 500; ++i) {
    const FunctionModel m = random_family(rng, i);
    const double x = uniform(rng, -8.0, 8.0);
    const double rho = uniform(rng, -8.0, 8.0);
    Vector xv(1);
    xv(0) = x;
    const auto projs = project_graph(m, xv, rho, default_cfg());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : projs) best = std::min(best, g.squared_distance);
    const OracleProjection oracle = dense_grid_projection_oracle(m, x, rho);
    const double gap = std::fabs(best - oracle.squared_distance);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-6)
      c.fail("instance " + fmt(i) + " (" + family_name(m.family()) + "): distance gap " +
             fmt(gap));
    for (const auto& g : projs) {
      if (!m.locally_lipschitz_at(g.p)) continue;
      worst_cert = std::max(worst_cert, g.certificate_residual);
      if (g.certificate_residual > 1e-6)
        c.fail("instance " + fmt(i) + " (" + family_name(m.family()) + "): certificate " +
               fmt(g.certificate_residual));
    }
  }
  CriterionResult r;
  r.name = "projection_oracle";
  r.passed = c.ok;
  r.detail = c.ok ? "max distance gap " + fmt(worst_gap) + ", max certificate " + fmt(worst_cert)
                  : c.detail.str();
  return r;
}

CriterionResult criterion_sherman_morrison(std::mt19937_64& rng) {
  Check c;
  double worst = 0.0;
  int done = 0;
  while (done < 200) {
    Matrix M(3, 3);
    Vector u(3), v(3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) M(i, j) = (i == j ? 2.0 : 0.0) + uniform(rng, -1.0, 1.0);
      u(i) = uniform(rng, -1.0, 1.0);
      v(i) = uniform(rng, -1.0, 1.0);
    }
    Eigen::JacobiSVD<Matrix> svd(M);
    if (svd.singularValues().minCoeff() < 0.3) continue;
    const Matrix updated = M + u * v.transpose();
    Eigen::FullPivLU<Matrix> lu(updated);
    if (!lu.isInvertible()) continue;
    const double denom = 1.0 + v.dot(M.inverse() * u);
    if (std::fabs(denom) < 0.05) continue;
    ++done;
    const Matrix direct = lu.inverse();
    const Matrix sm = sherman_morrison_inverse(M, u, v);
    worst = std::max(worst, (direct - sm).cwiseAbs().maxCoeff());
  }
  if (worst > 1e-10) c.fail("max deviation from direct inversion " + fmt(worst));

  bool threw = false;
  try {
    Vector e1 = Vector::Zero(3);
    e1(0) = 1.0;
    sherman_morrison_inverse(Matrix::Identity(3, 3), e1, Vector(-e1));
  } catch (const SingularUpdateError&) {
    threw = true;
  }
  if (!threw) c.fail("singular update did not raise SingularUpdate");

  CriterionResult r;
  r.name = "sherman_morrison";
  r.passed = c.ok;
  r.detail = c.ok ? "200 instances, max deviation " + fmt(worst) : c.detail.str();
  return r;
}

}  // namespace

OracleProjection dense_grid_projection_oracle(const FunctionModel& m, double x, double rho,
                                              int grid_points) {
  if (m.dimension() != 1)
    throw UnsupportedError("dense_grid_projection_oracle: dimension-1 models only");
  const Interval dom = m.domain();
  const double lo = std::max(dom.lo, -50.0);
  const double hi = std::min(dom.hi, 50.0);
  const double step = (hi - lo) / (grid_points - 1);

  auto value = [&](double t) {
    const double ft = m.value1(t);
    const double dx = t - x, dr = ft - rho;
    return dx * dx + dr * dr;
  };

  std::vector<double> vals(grid_points);
  int best_i = 0;
  for (int i = 0; i < grid_points; ++i) {
    vals[i] = value(lo + step * i);
    if (vals[i] < vals[best_i]) best_i = i;
  }
  if (!std::isfinite(vals[best_i]))
    throw SearchFailureError("dense_grid_projection_oracle: no finite value");
  const double best_v = vals[best_i];
  const double best_t = lo + step * best_i;

  // Iterated uniform subdivision around a node (scheme independent of the
  // golden-section refinement used by the implementation).
  auto subdivide = [&](double center, double half_width) {
    double c0 = center, h = half_width, bv = value(center), bt = center;
    for (int round = 0; round < 60 && h > 1e-14; ++round) {
      for (int k = -5; k <= 5; ++k) {
        const double t = std::min(hi, std::max(lo, c0 + h * k / 5.0));
        const double v = value(t);
        if (v < bv) {
          bv = v;
          bt = t;
        }
      }
      c0 = bt;
      h *= 0.35;
    }
    return std::make_pair(bv, bt);
  };

  auto [rv, rt] = subdivide(best_t, step);
  // Also refine near-tied discrete local minima: the grid best may sit in a
  // marginally worse basin than the true global one.
  int refined = 0;
  for (int i = 1; i + 1 < grid_points && refined < 6; ++i) {
    if (i == best_i) continue;
    if (vals[i] > best_v + 1e-3) continue;
    if (!(vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1])) continue;
    const auto [sv, st] = subdivide(lo + step * i, step);
    if (sv < rv) {
      rv = sv;
      rt = st;
    }
    ++refined;
  }

  OracleProjection out;
  out.p = rt;
  out.squared_distance = rv;
  return out;
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CriterionResult> results;
  using Fn = CriterionResult (*)(std::mt19937_64&);
  const Fn criteria[] = {
      criterion_linear_rate,        criterion_exponential,
      criterion_piecewise_comparison, criterion_newton_blowup,
      criterion_unstable_fixed_point, criterion_lyapunov_certificates,
      criterion_modulus_formula,    criterion_circle_rate,
      criterion_projection_oracle,  criterion_sherman_morrison,
  };
  int id = 1;
  for (Fn fn : criteria) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r = fn(rng);
    r.id = id++;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace drzero
