// telegraph — spectral solver for the constrained nonlinear telegraph
// equation on (-1, 1) with operator forcing.
//
// Subcommands:
//   solve     run a configured scenario, write trajectory/constraint/residual
//             CSVs and summary.json
//   spectrum  per-mode damping regimes and the spectral abscissa
//   verify    randomized property suites (semigroup, resolvent, widths,
//             invariance, convergence)
//   widths    n-width table for the H10 ball
//   decay     D(U) operator-norm decay profile and the bound omega
//
// Exit codes: 0 ok, 1 config error, 2 nonconvergence, 3 inadmissible,
// 4 property failure, 5 internal error.

#include <algorithm>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "telegraph/config.hpp"
#include "telegraph/errors.hpp"
#include "telegraph/io.hpp"
#include "telegraph/kernels.hpp"
#include "telegraph/parallel.hpp"
#include "telegraph/semigroup.hpp"
#include "telegraph/solver.hpp"
#include "telegraph/spectral.hpp"
#include "telegraph/verify.hpp"
#include "telegraph/version.hpp"

namespace {

using nlohmann::json;
using namespace telegraph;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;  // overrides config output.dir when set
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
};

ScenarioConfig load_config(const CommonArgs& args) {
  if (args.config_path.empty()) throw ConfigError("--config PATH is required");
  ScenarioConfig cfg = ScenarioConfig::load(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.seed_set) {
    cfg.seed = args.seed;
    cfg.solve.seed = args.seed;
  }
  return cfg;
}

void emit_error_json(const std::string& kind, const std::string& message,
                     const json& extra = json::object()) {
  json err{{"error", kind}, {"message", message}, {"artifact_version", kVersion}};
  for (const auto& item : extra.items()) err[item.key()] = item.value();
  std::cerr << err.dump(2) << std::endl;
}

json summary_base(const ScenarioConfig& cfg) {
  return json{{"artifact_version", kVersion},
              {"config_sha256", cfg.config_hash},
              {"seed", cfg.seed},
              {"kernels", kernels::active().name}};
}

int cmd_solve(const CommonArgs& args) {
  const ScenarioConfig cfg = load_config(args);
  const auto forcing = cfg.make_forcing();
  const auto constraint = cfg.make_constraint();
  const DriveTerm drive = cfg.make_drive();
  const SolveConfig sc = build_solve_config(cfg.params, *forcing, cfg.solve);

  std::filesystem::create_directories(cfg.out_dir);

  auto write_outputs = [&](const Trajectory& traj) {
    io::write_trajectory_csv(cfg.out_dir + "/trajectory.csv", traj, sc.capacity,
                             {"trajectory", cfg.config_hash});
    io::write_constraint_csv(cfg.out_dir + "/constraint.csv", traj,
                             {"constraint", cfg.config_hash});
    io::write_residuals_csv(cfg.out_dir + "/residuals.csv", traj,
                            {"residuals", cfg.config_hash});
    double max_weak = 0.0;
    for (int k = 1; k <= std::min(sc.n, sc.k_test); ++k)
      for (double v : traj.weak_residuals[static_cast<std::size_t>(k - 1)])
        max_weak = std::max(max_weak, std::abs(v));
    json s = summary_base(cfg);
    s["T0"] = sc.T0;
    s["omega"] = sc.omega;
    s["c"] = sc.forcing_bound;
    s["C"] = sc.ball_radius;
    s["n"] = sc.n;
    s["capacity"] = sc.capacity;
    s["alpha"] = sc.alpha;
    s["iterations"] = traj.fp_iterations;
    s["residual"] = traj.fp_residual;
    s["admissible"] = traj.admissible;
    s["u_ball_ratio"] = traj.u_ball_ratio;
    s["ball_alpha_validated"] = traj.ball_alpha_validated;
    s["equicontinuity_delta"] = sc.equicontinuity_delta;
    s["equicontinuity_modulus"] = traj.equicontinuity_modulus;
    s["max_weak_residual_below_n"] = max_weak;
    s["forcing"] = forcing->name();
    s["constraint"] = constraint->name();
    s["drive"] = drive.name();
    if (traj.violation) {
      s["violation"] = json{{"time", traj.violation->time},
                            {"location", traj.violation->location},
                            {"certified", traj.violation->certified}};
    } else {
      s["violation"] = nullptr;
    }
    io::write_summary_json(cfg.out_dir + "/summary.json", s);
  };

  try {
    const Trajectory traj = constrained_solve(sc, *forcing, *constraint, drive);
    write_outputs(traj);
    std::cout << "solve: admissible, residual = " << io::fmt_double(traj.fp_residual)
              << ", iterations = " << traj.fp_iterations << ", T0 = "
              << io::fmt_double(sc.T0) << "\n";
    return 0;
  } catch (const AdmissibilityError& e) {
    write_outputs(e.trajectory);
    emit_error_json("inadmissible", e.what(),
                    json{{"first_violation_time", e.violation.time},
                         {"location", e.violation.location},
                         {"certified", e.violation.certified},
                         {"alpha", e.violation.alpha}});
    return 3;
  } catch (const NonconvergenceError& e) {
    emit_error_json("nonconvergence", e.what(),
                    json{{"residual_history", e.residual_history}});
    return 2;
  }
}

int cmd_spectrum(const CommonArgs& args) {
  const ScenarioConfig cfg = load_config(args);
  const SpectralSummary s = spectral_abscissa(cfg.params, cfg.spectrum_n_max);
  std::filesystem::create_directories(cfg.out_dir);
  io::write_spectrum_csv(cfg.out_dir + "/spectrum.csv", s,
                         {"spectrum", cfg.config_hash});
  std::cout << "theta = " << io::fmt_double(s.theta) << " ("
            << (s.branch == AbscissaBranch::all_nonnegative ? "all theta_n >= 0"
                                                            : "overdamped max")
            << ")\n";
  for (const ModeRegime& r : s.per_mode) {
    const char* kind = r.kind == RegimeKind::underdamped ? "underdamped"
                       : r.kind == RegimeKind::critical  ? "critical"
                                                         : "overdamped";
    std::cout << "n=" << r.n << " theta_n=" << io::fmt_double(r.theta_n) << " " << kind;
    if (r.kind == RegimeKind::underdamped)
      std::cout << " omega_n=" << io::fmt_double(r.omega_n);
    if (r.kind == RegimeKind::overdamped)
      std::cout << " rho_n=" << io::fmt_double(r.rho_n);
    std::cout << "\n";
  }
  return 0;
}

int cmd_verify(const CommonArgs& args, const std::string& suite) {
  // verify runs with built-in scenarios; a config is optional and only
  // supplies the output directory
  std::uint64_t seed = args.seed_set ? args.seed : 1;
  std::string out_dir = args.out_dir;
  std::string config_hash = "none";
  if (!args.config_path.empty()) {
    const ScenarioConfig cfg = load_config(args);
    seed = cfg.seed;
    if (out_dir.empty()) out_dir = cfg.out_dir;
    config_hash = cfg.config_hash;
  }
  const verify::SuiteResult res = verify::run_suite(suite, seed);
  json j{{"artifact_version", kVersion},
         {"config_sha256", config_hash},
         {"suite", res.suite},
         {"seed", res.seed},
         {"passed", res.passed}};
  j["checks"] = json::array();
  for (const verify::Check& c : res.checks)
    j["checks"].push_back(json{{"name", c.name},
                               {"passed", c.passed},
                               {"margin", c.margin},
                               {"detail", c.detail}});
  std::cout << j.dump(2) << std::endl;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    io::write_summary_json(out_dir + "/verify_" + suite + ".json", j);
  }
  return res.passed ? 0 : 4;
}

int cmd_widths(const CommonArgs& args) {
  const ScenarioConfig cfg = load_config(args);
  std::vector<int> ns;
  std::vector<double> ws;
  for (int n = 1; n <= cfg.widths_n_max; ++n) {
    ns.push_back(n);
    ws.push_back(n_width(cfg.widths_b, n, cfg.params));
  }
  std::filesystem::create_directories(cfg.out_dir);
  io::write_widths_csv(cfg.out_dir + "/widths.csv", ns, ws, cfg.widths_b,
                       {"widths", cfg.config_hash});
  for (std::size_t i = 0; i < ns.size(); ++i)
    std::cout << "d_" << ns[i] << " = " << io::fmt_double(ws[i]) << "\n";
  return 0;
}

int cmd_decay(const CommonArgs& args) {
  const ScenarioConfig cfg = load_config(args);
  std::vector<double> grid(static_cast<std::size_t>(cfg.decay_points));
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = cfg.decay_t_max * static_cast<double>(i) / (grid.size() - 1.0);
  const int n_max =
      cfg.decay_n_max > 0 ? cfg.decay_n_max : static_cast<int>(cfg.solve.capacity);
  const DuNormBound b = du_norm_bound(cfg.params, grid, n_max);
  std::filesystem::create_directories(cfg.out_dir);
  io::write_decay_csv(cfg.out_dir + "/decay.csv", b, {"decay", cfg.config_hash});
  std::cout << "omega = " << io::fmt_double(b.omega)
            << " (raw sup " << io::fmt_double(b.omega_raw) << "), profile("
            << io::fmt_double(b.times.back())
            << ") = " << io::fmt_double(b.profile.back()) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral solver for the constrained nonlinear telegraph equation"};
  app.set_version_flag("--version", std::string("telegraph ") + kVersion);
  app.require_subcommand(1);

  CommonArgs args;
  std::string suite;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "scenario configuration file (JSON)");
    sub->add_option("--out", args.out_dir, "output directory (overrides config)");
    sub->add_option("--seed", args.seed, "seed for randomized checks")
        ->each([&](const std::string&) { args.seed_set = true; });
    sub->add_option("--threads", args.threads,
                    "worker thread cap (affects speed only, never results)");
  };

  CLI::App* solve = app.add_subcommand("solve", "run a configured scenario");
  add_common(solve);
  CLI::App* spectrum = app.add_subcommand("spectrum", "per-mode regime table");
  add_common(spectrum);
  CLI::App* verify_cmd = app.add_subcommand("verify", "run a property suite");
  verify_cmd
      ->add_option("suite", suite, "one of: semigroup, resolvent, widths, invariance, convergence")
      ->required();
  add_common(verify_cmd);
  CLI::App* widths = app.add_subcommand("widths", "n-width table");
  add_common(widths);
  CLI::App* decay = app.add_subcommand("decay", "D(U) decay profile and omega");
  add_common(decay);

  CLI11_PARSE(app, argc, argv);
  set_max_threads(args.threads);

  try {
    if (solve->parsed()) return cmd_solve(args);
    if (spectrum->parsed()) return cmd_spectrum(args);
    if (verify_cmd->parsed()) return cmd_verify(args, suite);
    if (widths->parsed()) return cmd_widths(args);
    if (decay->parsed()) return cmd_decay(args);
  } catch (const ConfigError& e) {
    emit_error_json("config", e.what());
    return 1;
  } catch (const ArgumentError& e) {
    emit_error_json("config", e.what());
    return 1;
  } catch (const InvarianceError& e) {
    emit_error_json("invariance_violation", e.what(),
                    nlohmann::json{{"measured", e.measured_norm}, {"bound", e.bound_value}});
    return 2;
  } catch (const std::exception& e) {
    emit_error_json("internal", e.what());
    return 5;
  }
  return 5;
}
