#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adaptreg/experiments.hpp"

namespace {

using adaptreg::ExperimentSpec;

// Plain "key = value" configuration file; command-line flags override it.
std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    for (char& c : key)
      if (c == '_') c = '-';
    if (!key.empty()) kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_config(const std::map<std::string, std::string>& kv, ExperimentSpec& spec) {
  auto num = [](const std::string& s) { return std::stod(s); };
  for (const auto& [key, value] : kv) {
    if (key == "problem") spec.problem = value;
    else if (key == "alpha") spec.alpha = num(value);
    else if (key == "alpha0") spec.alpha0 = num(value);
    else if (key == "rho") spec.rho = num(value);
    else if (key == "theta") spec.theta = num(value);
    else if (key == "tol-alpha") spec.tol_alpha = num(value);
    else if (key == "tol-h") spec.tol_h = num(value);
    else if (key == "max-iter") spec.max_iter = static_cast<int>(num(value));
    else if (key == "fixed-n") spec.fixed_n = static_cast<int>(num(value));
    else if (key == "initial-n") spec.initial_n = static_cast<int>(num(value));
    else if (key == "out-dir") spec.out_dir = value;
    else if (key == "emit-plots") spec.emit_plots = value != "0" && value != "false";
    else if (key == "dump-mesh") spec.dump_mesh = value != "0" && value != "false";
    else if (key == "seed") spec.seed = static_cast<std::uint64_t>(num(value));
    else if (key == "cond-mode") spec.cond_mode = value;
    else if (key == "dof-limit") spec.dof_limit = static_cast<int>(num(value));
    else if (key == "levels" || key == "alpha-sweep") {
      std::istringstream iss(value);
      std::string tok;
      while (std::getline(iss, tok, ',')) {
        if (key == "levels") spec.mesh_sizes.push_back(static_cast<int>(num(tok)));
        else spec.alpha_sweep.push_back(num(tok));
      }
    } else {
      throw CLI::ValidationError("--config", "unknown key: " + key);
    }
  }
}

void add_common_options(CLI::App* cmd, ExperimentSpec& spec) {
  cmd->add_option("--problem", spec.problem, "problem: ex1, ex2 or ex3");
  cmd->add_option("--alpha", spec.alpha, "target regularisation parameter");
  cmd->add_option("--alpha0", spec.alpha0, "initial alpha_h");
  cmd->add_option("--rho", spec.rho, "regularisation reduction factor");
  cmd->add_option("--theta", spec.theta, "marking fraction");
  cmd->add_option("--tol-alpha", spec.tol_alpha, "regularisation tolerance");
  cmd->add_option("--tol-h", spec.tol_h, "discretisation tolerance");
  cmd->add_option("--max-iter", spec.max_iter, "iteration cap");
  cmd->add_option("--fixed-n", spec.fixed_n, "elements of the fixed protocol mesh");
  cmd->add_option("--initial-n", spec.initial_n, "initial mesh resolution for adaptive runs");
  cmd->add_option("--levels", spec.mesh_sizes, "mesh sizes for sweeps")->delimiter(',');
  cmd->add_option("--alpha-sweep", spec.alpha_sweep, "alpha values for sweeps")->delimiter(',');
  cmd->add_option("--out-dir", spec.out_dir, "output directory");
  cmd->add_flag("--emit-plots", spec.emit_plots, "write SVG plots");
  cmd->add_flag("--dump-mesh", spec.dump_mesh, "write the final mesh in plain text");
  cmd->add_option("--seed", spec.seed, "seed for randomised eigenvalue starts");
  cmd->add_option("--cond-mode", spec.cond_mode, "cond-study mode: uniform or adaptive");
  cmd->add_option("--dof-limit", spec.dof_limit, "stop adaptive refinement past this dimension");
}

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;

int run_subcommand(const std::string& name, const ExperimentSpec& spec) {
  using namespace adaptreg;
  if (name == "uniform-convergence") {
    const ConvergenceStudy study = run_uniform_convergence(spec);
    std::printf("slope(err_X) = %.4f  slope(eta_h) = %.4f  ratio band = %.3f\n",
                study.slope_err, study.slope_eta, study.ratio_band);
    if (study.rows.size() < 2) return kExitPass;  // single level: no slope check
    return std::abs(study.slope_err + 1.0) <= 0.1 ? kExitPass : kExitViolation;
  }
  if (name == "effectivity-sweep") {
    const EffectivitySweep sweep = run_effectivity_sweep(spec);
    for (std::size_t i = 0; i < sweep.alphas.size(); ++i)
      std::printf("alpha = %-10.3g effectivity = %.4f\n", sweep.alphas[i],
                  sweep.effectivities[i]);
    return sweep.max_over_min <= 1.1 ? kExitPass : kExitViolation;
  }
  if (name == "uniform-alpha") {
    const AlphaDecreaseStudy study = run_uniform_alpha_decrease(spec);
    std::printf("dominance = %s  eta_alpha(alpha_h=alpha) = %s\n",
                study.dominance ? "yes" : "no", study.zero_at_target ? "0" : "nonzero");
    return kExitPass;  // report-only study
  }
  if (name == "reg-adapt" || name == "full-adapt") {
    const AdaptiveResult res =
        name == "reg-adapt" ? run_reg_adapt(spec) : run_full_adapt(spec);
    std::printf("%s after %d iterations (dim Vh = %d, eta_h = %.3e, eta_alpha = %.3e)\n",
                res.converged ? "converged" : "did not converge", res.iterations,
                res.records.back().dim_Vh, res.records.back().eta_h,
                res.records.back().eta_alpha);
    return res.converged ? kExitPass : kExitNoConvergence;
  }
  if (name == "solve-2d") {
    const TwoDimChecks checks = run_solve_2d(spec);
    std::printf("converged = %d (relaxed = %d), iterations = %d, dim = %d\n"
                "refined-near-interface fraction = %.3f, alpha_min near interface = %d\n"
                "max alpha_h = %.3e (corner region: %d)\n",
                checks.converged, checks.relaxed_tolerances, checks.iterations,
                checks.final_dim, checks.refined_near_interface_fraction,
                checks.alpha_min_near_interface, checks.alpha_max, checks.alpha_max_in_corner);
    return checks.converged ? kExitPass : kExitNoConvergence;
  }
  if (name == "cond-study") {
    const CondStudy study = run_cond_study(spec);
    if (spec.cond_mode == "adaptive") return kExitPass;
    std::printf("lambda_min: h-slope %.3f, alpha-slope %.3f\n", study.slope_min_h,
                study.slope_min_alpha);
    std::printf("lambda_max: h-slope %.3f, alpha-slope %.3f\n", study.slope_max_h,
                study.slope_max_alpha);
    std::printf("cond:       h-slope %.3f, alpha-slope %.3f\n", study.slope_cond_h,
                study.slope_cond_alpha);
    const bool ok = std::abs(study.slope_min_h - 1.0) <= 0.15 &&
                    std::abs(study.slope_min_alpha - 0.5) <= 0.15 &&
                    std::abs(study.slope_max_h + 1.0) <= 0.15 &&
                    std::abs(study.slope_max_alpha) <= 0.15 &&
                    std::abs(study.slope_cond_h + 2.0) <= 0.2 &&
                    std::abs(study.slope_cond_alpha + 0.5) <= 0.2;
    return ok ? kExitPass : kExitViolation;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive-regularisation finite element experiments"};
  app.require_subcommand(1);

  ExperimentSpec spec;
  std::string config_path;

  // Apply the config file before CLI11 binds flag values, so flags given on
  // the command line override the file.
  for (int i = 1; i < argc - 1; ++i) {
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  }
  if (!config_path.empty()) {
    try {
      apply_config(load_config(config_path), spec);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitUsage;
    }
  }

  const char* names[] = {"uniform-convergence", "effectivity-sweep", "uniform-alpha",
                         "reg-adapt", "full-adapt", "solve-2d", "cond-study"};
  const char* descriptions[] = {
      "uniform refinement convergence of err_X and eta_h",
      "effectivity index across an alpha sweep on a fixed mesh",
      "estimators under a uniform decrease of alpha_h toward alpha",
      "regularisation-refinement-only adaptive run",
      "combined regularisation and mesh adaptive run",
      "fully adaptive 2D run with qualitative interface checks",
      "eigenvalue extremes and condition-number scaling"};
  for (int i = 0; i < 7; ++i) {
    CLI::App* cmd = app.add_subcommand(names[i], descriptions[i]);
    add_common_options(cmd, spec);
    cmd->add_option("--config", config_path, "key = value configuration file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    return run_subcommand(app.get_subcommands().front()->get_name(), spec);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
}
