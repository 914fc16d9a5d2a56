// rg2 — batch front door for the quadratic curvature flow laboratory.
//
// Subcommands:
//   symbol  — principal symbols, rotation angle, eigenvalues, verdict
//   check   — parabolicity of a metric field for a flow kind
//   run     — integrate a gauge-fixed flow from a config file
//   verify  — built-in oracle suite
//
// Exit codes: 0 success, 1 verification or parabolicity failure, 2 usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "rg2/chart.hpp"
#include "rg2/config.hpp"
#include "rg2/flows.hpp"
#include "rg2/integrate.hpp"
#include "rg2/presets.hpp"
#include "rg2/snapshot_io.hpp"
#include "rg2/symbol.hpp"
#include "rg2/verify.hpp"

namespace {

using namespace rg2;

nlohmann::json matrix_json(const Symbol6& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 6; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 6; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void print_matrix(std::ostream& out, const std::string& name,
                  const Symbol6& m) {
  out << name << ":\n";
  for (int i = 0; i < 6; ++i) {
    out << "  [";
    for (int j = 0; j < 6; ++j)
      out << (j ? ", " : " ") << std::setw(12) << m(i, j);
    out << " ]\n";
  }
}

struct SymbolArgs {
  std::string preset = "flat";
  std::string file;
  double a = 0.0;
  double k = 1.0;
  bool json = false;
};

int cmd_symbol(const SymbolArgs& args) {
  PointSample sample;
  std::string source;
  if (!args.file.empty()) {
    sample = read_point_sample(args.file);
    source = args.file;
  } else if (args.preset == "flat") {
    sample.g = SymBilinear3d::Identity();
    sample.ricci = SymBilinear3d::Zero();
    source = "flat";
  } else if (args.preset == "const-curv") {
    sample.g = SymBilinear3d::Identity();
    sample.ricci = (2.0 * args.k) * SymBilinear3d::Identity();
    source = "const-curv k=" + format_double(args.k);
  } else {
    throw parse_error("unknown preset '" + args.preset + "'");
  }

  const Flow flow = Flow::rg2(args.a);
  const Curv3d riem = riemann_from_ricci(sample.ricci, sample.g);

  // canonical direction xi = dx^1; unrotated symbol in that frame,
  // rotated symbol after killing R23
  const Frame3d frame0 = orthonormal_frame(sample.g, Eigen::Vector3d::Unit(0));
  const Curv3d riem_frame = in_frame(riem, frame0);
  const Symbol6 unrotated = symbol_L_unrotated(riem_frame, args.a);
  const RotatedFrame<double> rot = rotate_frame_kill_r23(frame0, sample.ricci);
  SymBilinear3d ric_rot = in_frame(sample.ricci, rot.frame.vectors);
  ric_rot(1, 2) = 0.0;  // exact by construction of the rotation
  const Symbol6 rotated = symbol_L(ric_rot, args.a);

  const EllipticityReport rep = symbol_report(riem, sample.g, flow);
  const Eigen::Matrix<double, 6, 1> eigs = symbol_spectrum(rotated);

  if (args.json) {
    nlohmann::json j;
    j["source"] = source;
    j["a"] = args.a;
    j["alpha"] = rot.alpha;
    j["symbol_unrotated"] = matrix_json(unrotated);
    j["symbol_rotated"] = matrix_json(rotated);
    j["eigenvalues"] = std::vector<double>(eigs.data(), eigs.data() + 6);
    j["kernel_dim"] = rep.kernel_dim;
    j["margin"] = rep.margin;
    j["verdict"] = verdict_name(rep.verdict);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "point: " << source << "\n";
    std::cout << "a: " << args.a << "\n";
    std::cout << "alpha: " << std::setprecision(17) << rot.alpha << "\n";
    print_matrix(std::cout, "unrotated symbol", unrotated);
    print_matrix(std::cout, "rotated symbol", rotated);
    std::cout << "eigenvalues:";
    for (int i = 0; i < 6; ++i) std::cout << ' ' << eigs[i];
    std::cout << "\nkernel dim: " << rep.kernel_dim << "\n";
    std::cout << "margin: " << rep.margin << "\n";
    std::cout << "verdict: " << verdict_name(rep.verdict) << "\n";
  }
  return 0;
}

struct CheckArgs {
  std::string field_file;
  std::string kind = "rg2";
  double a = 0.0;
  bool json = false;
};

int cmd_check(const CheckArgs& args) {
  const MetricField field = read_snapshot(args.field_file);
  const Flow flow{flow_kind_from_name(args.kind), args.a};
  const CurvatureField curv = curvature(field);
  const Diagnostics diag = monitor(field, curv, flow);
  const bool parabolic = diag.margin > 1e-8;

  if (args.json) {
    nlohmann::json j;
    j["kind"] = flow_kind_name(flow.kind);
    j["a"] = flow.coupling();
    j["margin"] = diag.margin;
    j["worst_point"] = diag.worst_point;
    j["worst_plane"] = {diag.worst_plane[0], diag.worst_plane[1],
                        diag.worst_plane[2]};
    j["parabolic"] = parabolic;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "kind: " << flow_kind_name(flow.kind)
              << " a: " << flow.coupling() << "\n";
    std::cout << "global margin: " << std::setprecision(17) << diag.margin
              << "\n";
    std::cout << "worst point: " << diag.worst_point << "\n";
    std::cout << "worst plane 2-vector: (" << diag.worst_plane[0] << ", "
              << diag.worst_plane[1] << ", " << diag.worst_plane[2] << ")\n";
    std::cout << "parabolic: " << (parabolic ? "yes" : "no") << "\n";
  }
  return parabolic ? 0 : 1;
}

struct RunArgs {
  std::string config_path;
  bool force = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int cmd_run(const RunArgs& args) {
  RunConfig cfg = parse_config(args.config_path);
  if (args.seed_set) cfg.seed = args.seed;

  std::filesystem::create_directories(cfg.out_dir);
  write_config(cfg.out_dir + "/config.txt", cfg);  // echo for reproducibility

  RunControls controls;
  controls.cfl = cfg.cfl;
  controls.eps_par = cfg.eps_par;
  controls.m_max = cfg.m_max;
  controls.eps_g = cfg.eps_g;
  controls.force = args.force;

  const auto t0 = std::chrono::steady_clock::now();
  RunResult result;
  double t_final = 0.0;

  try {
    if (cfg.preset == "constant-curvature-ode") {
      ConstCurvatureState state =
          make_const_curvature_state(cfg.k0, cfg.c0, cfg.flow);
      result = run_point(state, cfg.dt0, cfg.t_end, controls);
      t_final = state.t;
    } else {
      MetricField field = [&] {
        if (cfg.preset == "flat-perturbed-1d")
          return make_flat_perturbed_1d(cfg.n, cfg.amplitude, cfg.seed);
        if (cfg.preset == "warped-1d") return make_warped_1d(cfg.n, cfg.amplitude);
        if (cfg.preset == "file") return read_snapshot(cfg.field_file);
        throw parse_error("unknown run preset '" + cfg.preset + "'", -1,
                          "geometry.preset");
      }();
      // gauge background: the unperturbed flat metric for the perturbed
      // preset, the initial field itself otherwise (V(0) = 0 then)
      MetricField g0 = cfg.preset == "flat-perturbed-1d"
                           ? make_flat_field(cfg.n, field.grid().dim)
                           : field;
      FlowState state{0.0, field, cfg.flow, std::move(g0), 0.0};
      long snap_index = 0;
      const auto on_step = [&](const FlowState& s, const DiagRow&) {
        if (cfg.snapshot_every > 0 && ++snap_index % cfg.snapshot_every == 0)
          write_snapshot(cfg.out_dir + "/snapshot_" +
                             std::to_string(snap_index) + ".json",
                         s.field);
      };
      result = run(state, cfg.dt0, cfg.t_end, controls, on_step);
      t_final = state.t;
      write_snapshot(cfg.out_dir + "/final.json", state.field);
    }
  } catch (const rejection_error& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return 1;
  }

  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  write_diag_csv(cfg.out_dir + "/diagnostics.csv", result.trajectory, cfg.flow);
  write_summary(cfg.out_dir + "/summary.json", result.reason, t_final,
                result.steps, wall_ms);
  std::cout << "stop reason: " << stop_reason_name(result.reason)
            << ", t_final: " << t_final << ", steps: " << result.steps << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadratic curvature flow laboratory (3D)"};
  app.require_subcommand(1);

  SymbolArgs symbol_args;
  auto* symbol_cmd =
      app.add_subcommand("symbol", "principal symbols at a point");
  symbol_cmd->add_option("--preset", symbol_args.preset,
                         "flat | const-curv (with --k)");
  symbol_cmd->add_option("--file", symbol_args.file,
                         "point sample JSON {g, ricci}");
  symbol_cmd->add_option("-a,--a", symbol_args.a, "coupling");
  symbol_cmd->add_option("--k", symbol_args.k, "sectional curvature preset");
  symbol_cmd->add_flag("--json", symbol_args.json, "JSON output");

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "parabolicity of a field");
  check_cmd->add_option("field", check_args.field_file, "snapshot JSON")
      ->required();
  check_cmd->add_option("--kind", check_args.kind,
                        "ricci | rg2 | rg2zero | squared-ricci | mixed");
  check_cmd->add_option("-a,--a", check_args.a, "coupling");
  check_cmd->add_flag("--json", check_args.json, "JSON output");

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "integrate a gauge-fixed flow");
  run_cmd->add_option("--config", run_args.config_path, "config file")
      ->required();
  run_cmd->add_flag("--force", run_args.force, "skip the parabolicity gate");
  auto* seed_opt = run_cmd->add_option("--seed", run_args.seed,
                                       "override the config seed");

  bool quick = false, debug_flip = false;
  auto* verify_cmd = app.add_subcommand("verify", "run the oracle suite");
  verify_cmd->add_flag("--quick", quick, "sub-second subset");
  verify_cmd->add_flag("--debug-flip-sign", debug_flip,
                       "corrupt the curvature sign convention (fault injection)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (symbol_cmd->parsed()) return cmd_symbol(symbol_args);
    if (check_cmd->parsed()) return cmd_check(check_args);
    if (run_cmd->parsed()) {
      run_args.seed_set = seed_opt->count() > 0;
      return cmd_run(run_args);
    }
    if (verify_cmd->parsed()) {
      rg2::detail::flip_curvature_sign = debug_flip;
      return rg2::verify::run(quick, std::cout) == 0 ? 0 : 1;
    }
  } catch (const rg2::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
