#include "drzero/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "drzero/baselines.hpp"
#include "drzero/basin_scan.hpp"
#include "drzero/dr_engine.hpp"
#include "drzero/graph_projection.hpp"
#include "drzero/lyapunov.hpp"
#include "drzero/stability.hpp"
#include "drzero/verification.hpp"

namespace drzero {

namespace {

using nlohmann::json;

// 17 significant digits round-trip doubles exactly.
std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vector parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw ValidationError("cannot parse coordinate '" + item + "'");
    vals.push_back(v);
  }
  if (vals.empty()) throw ValidationError("empty coordinate list");
  Vector x(static_cast<int>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) x(static_cast<int>(i)) = vals[i];
  return x;
}

std::pair<double, double> parse_range(const std::string& text) {
  const Vector v = parse_vector(text);
  if (v.size() != 2) throw ValidationError("range must be 'lo,hi'");
  return {v(0), v(1)};
}

FunctionModel model_from_arg(const std::string& family_json) {
  json spec;
  // Either inline JSON or a path to a JSON file.
  if (!family_json.empty() && (family_json[0] == '{' || family_json[0] == '[')) {
    spec = json::parse(family_json, nullptr, true);
  } else {
    std::ifstream in(family_json);
    if (!in) throw ValidationError("cannot open family JSON file '" + family_json + "'");
    in >> spec;
  }
  return FunctionModel::from_json(spec);
}

json point_json(const ProductPoint& z) {
  json j;
  j["x"] = std::vector<double>(z.x.data(), z.x.data() + z.x.size());
  j["rho"] = z.rho;
  return j;
}

json trajectory_json(const Trajectory& t) {
  json j;
  j["method"] = t.method;
  j["termination"] = termination_name(t.termination);
  if (t.undefined_step) j["undefined_step"] = true;
  json rows = json::array();
  for (size_t n = 0; n < t.iterates.size(); ++n) {
    json row = point_json(t.iterates[n]);
    row["f"] = t.f_values[n];
    if (n > 0) {
      row["step_norm"] = t.step_norms[n - 1];
      row["selection"] = t.selection_indices[n - 1];
    }
    rows.push_back(std::move(row));
  }
  j["iterates"] = std::move(rows);
  return j;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  const int dim = t.iterates.front().dimension();
  os << "n";
  if (dim == 1)
    os << ",x";
  else
    for (int i = 0; i < dim; ++i) os << ",x" << i;
  os << ",rho,f_x,step_norm\n";
  for (size_t n = 0; n < t.iterates.size(); ++n) {
    os << n << ",";
    for (int i = 0; i < dim; ++i) os << fmt17(t.iterates[n].x(i)) << ",";
    os << fmt17(t.iterates[n].rho) << "," << fmt17(t.f_values[n]) << ",";
    os << (n > 0 ? fmt17(t.step_norms[n - 1]) : "nan") << "\n";
  }
}

struct OutputTarget {
  std::string path;     // empty: write to the primary stream
  std::ostream* fallback = nullptr;

  template <typename Fn>
  void write(Fn&& fn) const {
    if (path.empty()) {
      fn(*fallback);
    } else {
      std::ofstream f(path, std::ios::binary);
      if (!f) throw ValidationError("cannot open output path '" + path + "'");
      fn(f);
    }
  }
};

int error_exit_code(const Error& e) {
  const std::string& c = e.code();
  if (c == "DomainError" || c == "ValidationError" || c == "Unsupported") return 1;
  return 2;
}

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  json j;
  j["error"]["code"] = code;
  j["error"]["message"] = message;
  err << j.dump() << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Douglas-Rachford zero finder and analysis toolkit"};
  app.require_subcommand(1);

  std::string family_json, x0_text = "0", output_path, format = "csv";
  double rho0 = 0.0, tol = 0.0;
  int max_iter = 0, grid_points = 0;
  std::string selection = "first";

  auto add_family = [&](CLI::App* cmd) {
    cmd->add_option("--family-json", family_json, "family spec as inline JSON or a file path")
        ->required();
  };
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--output", output_path, "write the primary payload to this path");
    cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--tol", tol, "step and residual tolerance");
    cmd->add_option("--max-iter", max_iter, "iteration budget");
    cmd->add_option("--grid-points", grid_points, "projection scan resolution");
  };
  auto make_cfg = [&](double default_tol, int default_iter) {
    NumericConfig cfg;
    if (default_tol > 0) cfg.step_tolerance = cfg.residual_tolerance = default_tol;
    if (default_iter > 0) cfg.max_iterations = default_iter;
    if (tol > 0) cfg.step_tolerance = cfg.residual_tolerance = tol;
    if (max_iter > 0) cfg.max_iterations = max_iter;
    if (grid_points > 0) cfg.projection_grid_points = grid_points;
    cfg.validate();
    return cfg;
  };

  auto* solve = app.add_subcommand("solve", "run the DR iteration");
  add_family(solve);
  add_common(solve);
  solve->add_option("--x0", x0_text, "starting abscissa (comma-separated for n > 1)");
  solve->add_option("--rho0", rho0, "starting rho");
  solve->add_option("--selection", selection, "first or nearest")
      ->check(CLI::IsMember({"first", "nearest"}));

  auto* project = app.add_subcommand("project", "project one point onto the graph of f");
  add_family(project);
  add_common(project);
  project->add_option("--x", x0_text, "abscissa of the point to project");
  project->add_option("--rho", rho0, "ordinate of the point to project");

  auto* stability = app.add_subcommand("stability", "local stability report at a fixed point");
  add_family(stability);
  add_common(stability);
  stability->add_option("--xbar", x0_text, "fixed-point abscissa");
  stability->add_option("--rhobar", rho0, "fixed-point rho");

  auto* lyap = app.add_subcommand("lyapunov", "per-step Lyapunov certificate along a DR run");
  add_family(lyap);
  add_common(lyap);
  lyap->add_option("--x0", x0_text, "starting abscissa");
  lyap->add_option("--rho0", rho0, "starting rho");

  auto* compare = app.add_subcommand("compare", "DR vs alternating projections vs Newton");
  add_family(compare);
  add_common(compare);
  compare->add_option("--x0", x0_text, "starting abscissa");
  compare->add_option("--rho0", rho0, "starting rho");

  std::string x_range = "-10,10", rho_range = "-10,10", resolution = "101,101";
  std::string dump_dir;
  int dump_cap = 100;
  double basin_tol = 1e-6;
  auto* basin = app.add_subcommand("basin", "grid scan of starting points");
  add_family(basin);
  add_common(basin);
  basin->add_option("--x-range", x_range, "lo,hi for x0");
  basin->add_option("--rho-range", rho_range, "lo,hi for rho0");
  basin->add_option("--resolution", resolution, "nx,nrho");
  basin->add_option("--basin-tol", basin_tol, "distance-to-solution tolerance");
  basin->add_option("--dump-trajectories", dump_dir, "directory for per-cell trajectory CSVs");
  basin->add_option("--dump-cap", dump_cap, "max number of dumped cells");

  auto* rate = app.add_subcommand("rate", "empirical Q/R linear rate estimate");
  add_family(rate);
  add_common(rate);
  rate->add_option("--x0", x0_text, "starting abscissa");
  rate->add_option("--rho0", rho0, "starting rho");

  std::uint64_t seed = 12022901u;
  auto* verify = app.add_subcommand("verify-all", "run the full verification suite");
  verify->add_option("--seed", seed, "seed for the randomized checks");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    std::ostringstream dummy;
    const int code = app.exit(e, dummy, err);
    return code == 0 ? 0 : 1;
  }

  OutputTarget target{output_path, &out};
  try {
    if (solve->parsed()) {
      const FunctionModel m = model_from_arg(family_json);
      const NumericConfig cfg = make_cfg(0, 0);
      const ProductPoint z0(parse_vector(x0_text), rho0);
      const SelectionPolicy policy =
          selection == "nearest" ? SelectionPolicy::NearestToPrevious : SelectionPolicy::First;
      const Trajectory t = iterate(m, z0, cfg, policy);
      target.write([&](std::ostream& os) {
        if (format == "json")
          os << trajectory_json(t).dump(2) << "\n";
        else
          write_trajectory_csv(os, t);
      });
      return 0;
    }
    if (project->parsed()) {
      const FunctionModel m = model_from_arg(family_json);
      const NumericConfig cfg = make_cfg(0, 0);
      const auto projs = project_graph(m, parse_vector(x0_text), rho0, cfg);
      json arr = json::array();
      for (const auto& g : projs) {
        json j;
        j["p"] = std::vector<double>(g.p.data(), g.p.data() + g.p.size());
        j["fp"] = g.fp;
        j["squared_distance"] = g.squared_distance;
        j["multivalued"] = g.multivalued;
        j["certificate_residual"] = g.certificate_residual;
        arr.push_back(std::move(j));
      }
      target.write([&](std::ostream& os) { os << arr.dump(2) << "\n"; });
      return 0;
    }
    if (stability->parsed()) {
      const FunctionModel m = model_from_arg(family_json);
      const StabilityReport rep = stability_report(m, ProductPoint(parse_vector(x0_text), rho0));
      json j;
      j["point"] = point_json(rep.point);
      j["jacobian_T_inverse"] = json::array();
      for (int i = 0; i < rep.jacobian_T_inverse.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < rep.jacobian_T_inverse.cols(); ++k)
          row.push_back(rep.jacobian_T_inverse(i, k));
        j["jacobian_T_inverse"].push_back(std::move(row));
      }
      j["jacobian_nonsingular"] = rep.jacobian_nonsingular;
      j["psd_condition_holds"] = rep.psd_condition_holds;
      j["modulus"] = rep.modulus;
      if (rep.predicted_q_rate) j["predicted_q_rate"] = *rep.predicted_q_rate;
      target.write([&](std::ostream& os) { os << j.dump(2) << "\n"; });
      return 0;
    }
    if (lyap->parsed()) {
      const FunctionModel m = model_from_arg(family_json);
      const NumericConfig cfg = make_cfg(0, 0);
      const Trajectory t = iterate(m, ProductPoint(parse_vector(x0_text), rho0), cfg);
      const LyapunovCertificate cert = check_trajectory(m, t);
      json verdict;
      verdict["verdict"] = certificate_verdict_name(cert.verdict);
      verdict["first_stable_index"] = cert.first_stable_index;
      verdict["termination"] = termination_name(t.termination);
      if (format == "json") {
        json j = verdict;
        json rows = json::array();
        for (int n = 0; n < t.steps(); ++n) {
          json row;
          row["n"] = n;
          row["V"] = cert.in_domain[n] ? lyapunov_value(m, t.iterates[n])
                                       : std::numeric_limits<double>::quiet_NaN();
          row["margin"] = cert.decrease_margins[n];
          row["orthogonality_residual"] = cert.orthogonality_residuals[n];
          row["in_domain"] = static_cast<bool>(cert.in_domain[n]);
          rows.push_back(std::move(row));
        }
        j["steps"] = std::move(rows);
        target.write([&](std::ostream& os) { os << j.dump(2) << "\n"; });
      } else {
        target.write([&](std::ostream& os) {
          os << "n,V,margin,orthogonality_residual,in_domain\n";
          for (int n = 0; n < t.steps(); ++n) {
            const double V = cert.in_domain[n] ? lyapunov_value(m, t.iterates[n])
                                               : std::numeric_limits<double>::quiet_NaN();
            os << n << "," << fmt17(V) << "," << fmt17(cert.decrease_margins[n]) << ","
               << fmt17(cert.orthogonality_residuals[n]) << ","
               << (cert.in_domain[n] ? 1 : 0) << "\n";
          }
        });
        err << verdict.dump() << "\n";
      }
      return 0;
    }
    if (compare->parsed()) {
      const FunctionModel m = model_from_arg(family_json);
      const NumericConfig cfg = make_cfg(0, 500);
      const ComparisonReport rep = run_comparison(m, ProductPoint(parse_vector(x0_text), rho0), cfg);
      json j;
      j["dr"] = trajectory_json(rep.dr);
      j["map"] = trajectory_json(rep.map);
      j["newton"] = trajectory_json(rep.newton);
      j["verdicts"]["dr"] = method_verdict_name(rep.dr_verdict);
      j["verdicts"]["map"] = method_verdict_name(rep.map_verdict);
      j["verdicts"]["newton"] = method_verdict_name(rep.newton_verdict);
      target.write([&](std::ostream& os) { os << j.dump(2) << "\n"; });
      return 0;
    }
    if (basin->parsed()) {
      const FunctionModel m = model_from_arg(family_json);
      const NumericConfig cfg = make_cfg(0, 0);
      BasinGridSpec spec;
      std::tie(spec.x_lo, spec.x_hi) = parse_range(x_range);
      std::tie(spec.rho_lo, spec.rho_hi) = parse_range(rho_range);
      const Vector res = parse_vector(resolution);
      if (res.size() != 2) throw ValidationError("--resolution must be nx,nrho");
      spec.nx = static_cast<int>(res(0));
      spec.nrho = static_cast<int>(res(1));
      spec.tolerance = basin_tol;
      const BasinGrid grid = scan(m, spec, cfg);
      target.write([&](std::ostream& os) {
        os << "row,col,x0,rho0,iterations,class,x_term,rho_term\n";
        for (int row = 0; row < spec.nrho; ++row) {
          for (int col = 0; col < spec.nx; ++col) {
            const BasinCell& cell = grid.at(row, col);
            os << row << "," << col << "," << fmt17(spec.x_at(col)) << ","
               << fmt17(spec.rho_at(row)) << "," << cell.iterations << ","
               << cell_class_name(cell.classification) << "," << fmt17(cell.terminal.x(0)) << ","
               << fmt17(cell.terminal.rho) << "\n";
          }
        }
      });
      if (!dump_dir.empty()) {
        int dumped = 0;
        for (int row = 0; row < spec.nrho && dumped < dump_cap; ++row) {
          for (int col = 0; col < spec.nx && dumped < dump_cap; ++col) {
            const ProductPoint z0 = ProductPoint::scalar(spec.x_at(col), spec.rho_at(row));
            const Trajectory t = iterate(m, z0, cfg);
            std::ostringstream name;
            name << dump_dir << "/cell_" << row << "_" << col << ".csv";
            std::ofstream f(name.str(), std::ios::binary);
            if (!f) throw ValidationError("cannot open dump path '" + name.str() + "'");
            write_trajectory_csv(f, t);
            ++dumped;
          }
        }
      }
      return 0;
    }
    if (rate->parsed()) {
      const FunctionModel m = model_from_arg(family_json);
      const NumericConfig cfg = make_cfg(1e-13, 2000);
      const Trajectory t = iterate(m, ProductPoint(parse_vector(x0_text), rho0), cfg);
      // Measure against the nearest known zero.
      const auto zeros = m.known_zeros();
      if (zeros.empty()) throw UnsupportedError("rate: the model has no known zeros");
      ProductPoint tgt(zeros[0], 0.0);
      for (const auto& z : zeros) {
        const ProductPoint cand(z, 0.0);
        if (product_distance(t.terminal(), cand) < product_distance(t.terminal(), tgt)) tgt = cand;
      }
      const RateEstimate est = estimate_rate(t, tgt, cfg);
      json j;
      j["q_rate"] = est.q_rate;
      j["r_rate"] = est.r_rate;
      j["tail_length"] = est.tail_length;
      j["target"] = point_json(est.target);
      target.write([&](std::ostream& os) { os << j.dump(2) << "\n"; });
      return 0;
    }
    if (verify->parsed()) {
      const auto results = run_acceptance(seed);
      bool all_ok = true;
      target.write([&](std::ostream& os) {
        os << "seed: " << seed << "\n";
        for (const auto& r : results) {
          os << (r.passed ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name << "  "
             << r.detail << "\n";
        }
      });
      for (const auto& r : results) {
        err << "criterion " << r.id << " took " << r.seconds << " s\n";
        all_ok = all_ok && r.passed;
      }
      return all_ok ? 0 : 1;
    }
  } catch (const Error& e) {
    report_error(err, e.code(), e.what());
    return error_exit_code(e);
  } catch (const nlohmann::json::exception& e) {
    report_error(err, "ValidationError", e.what());
    return 1;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return 2;
  }
  return 1;
}

}  // namespace drzero
