#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adaptreg/adaptive.hpp"
#include "adaptreg/problems.hpp"

namespace adaptreg {

// Shared configuration for the experiment subcommands. Sweep lists default
// to the values used in the studies when left empty.
struct ExperimentSpec {
  std::string problem = "ex1";
  double alpha = 1e-8;
  double alpha0 = 1.0;
  double rho = 0.5;
  double theta = 0.5;
  double tol_alpha = 1e-8;
  double tol_h = 0.0;  // 0 = subcommand default (infinite for reg-adapt)
  int max_iter = 500;
  int fixed_n = 0;     // fixed-mesh protocols; 0 = protocol default
  int initial_n = 0;   // adaptive runs; 0 = subcommand default
  std::vector<int> mesh_sizes;       // uniform-convergence / cond-study levels
  std::vector<double> alpha_sweep;   // effectivity / cond-study sweeps
  std::string out_dir = "out";
  bool emit_plots = false;
  bool dump_mesh = false;
  std::uint64_t seed = 0;
  std::string cond_mode = "uniform";  // "uniform" or "adaptive"
  int dof_limit = 0;
};

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ConvergenceRow {
  double h = 0.0;
  int dim = 0;
  double err_X = 0.0;
  double eta_h = 0.0;
  double effectivity = 0.0;
};
struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double slope_err = 0.0;
  double slope_eta = 0.0;
  double ratio_band = 0.0;  // max/min of eta_h / err_X over the levels
};
ConvergenceStudy run_uniform_convergence(const ExperimentSpec& spec);

struct EffectivitySweep {
  std::vector<double> alphas;
  std::vector<double> effectivities;
  double max_over_min = 0.0;
};
EffectivitySweep run_effectivity_sweep(const ExperimentSpec& spec);

struct AlphaDecreaseRow {
  double alpha_h = 0.0;
  double err_X = 0.0;
  double eta_alpha = 0.0;
  double eta_h = 0.0;
  double total = 0.0;
};
struct AlphaDecreaseStudy {
  std::vector<AlphaDecreaseRow> rows;
  bool dominance = false;      // eta_alpha > eta_h at every alpha_h > alpha
  bool zero_at_target = false; // eta_alpha == 0 exactly at alpha_h = alpha
};
AlphaDecreaseStudy run_uniform_alpha_decrease(const ExperimentSpec& spec);

// Regularisation-only (tol_h = infinity) and fully adaptive runs; iteration
// records and final fields are written to out_dir.
AdaptiveResult run_reg_adapt(const ExperimentSpec& spec);
AdaptiveResult run_full_adapt(const ExperimentSpec& spec);

struct TwoDimChecks {
  bool converged = false;
  bool relaxed_tolerances = false;   // fell back to 10x tolerances
  int iterations = 0;
  int final_dim = 0;
  double refined_near_interface_fraction = 0.0;  // of below-median-diameter elements
  bool alpha_min_near_interface = false;
  double alpha_max = 0.0;
  bool alpha_max_in_corner = false;
};
TwoDimChecks run_solve_2d(const ExperimentSpec& spec);

struct CondRow {
  double alpha = 0.0;
  int n = 0;
  int dim = 0;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double cond = 0.0;
  bool converged = false;
  double dense_lambda_max = 0.0;  // 0 when the dense cross-check was skipped
  double dense_lambda_min = 0.0;
};
struct CondStudy {
  std::vector<CondRow> rows;
  // Regression exponents of each quantity in h (at fixed alpha, averaged)
  // and in alpha (at fixed n, averaged).
  double slope_min_h = 0.0, slope_min_alpha = 0.0;
  double slope_max_h = 0.0, slope_max_alpha = 0.0;
  double slope_cond_h = 0.0, slope_cond_alpha = 0.0;
};
CondStudy run_cond_study(const ExperimentSpec& spec);

}  // namespace adaptreg
