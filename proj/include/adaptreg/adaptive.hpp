#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "adaptreg/estimators.hpp"
#include "adaptreg/fields.hpp"
#include "adaptreg/mesh.hpp"
#include "adaptreg/problems.hpp"

namespace adaptreg {

struct AdaptiveConfig {
  double alpha = 1e-8;    // target regularisation parameter
  double alpha0 = 1.0;    // initial alpha_h
  double rho = 0.5;       // regularisation reduction factor
  double theta = 0.5;     // maximum-strategy marking fraction
  double tol_alpha = 1e-8;
  double tol_h = std::numeric_limits<double>::infinity();  // infinity disables mesh refinement
  int max_iterations = 500;
  int data_order = 0;     // 0 = module default
  int dof_limit = 0;      // stop (non-converged) before refining past this; 0 = unlimited

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  int dim_Vh = 0;
  double eta_h = 0.0;
  double eta_alpha = 0.0;
  double err_X = std::numeric_limits<double>::quiet_NaN();
  double effectivity = std::numeric_limits<double>::quiet_NaN();
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  double alpha_mean = 0.0;
  int elements_marked = 0;
  double wall_time = 0.0;  // seconds spent in this iteration
};

struct AdaptiveResult {
  std::vector<IterationRecord> records;
  Mesh mesh;
  ElementField alpha_h;
  NodalField u;
  NodalField z;
  NodalField f;
  bool converged = false;
  bool hit_dof_limit = false;
  int iterations = 0;
  bool marks_respected_exclusion = true;  // no marked element had eta_alpha,T > eta_h,T
};

// Called once per iteration after the record is complete; the system is the
// one solved in that iteration (used by the condition-number study).
struct LinearSystem;
using IterationObserver = std::function<void(const IterationRecord&, const LinearSystem&)>;

// r_T = (eta_alpha_T - min) / (max - min); identically 1 when all local
// estimators coincide (a zero spread warrants a uniform reduction).
ElementField relative_estimator_size(const ElementField& eta_alpha_T);

// alpha_new|_T = alpha + (alpha_h|_T - alpha) (1 + r_T (rho - 1)).
ElementField reduce_alpha(const ElementField& alpha_h, const ElementField& r,
                          const AdaptiveConfig& cfg);

// Maximum strategy with the inconsistency exclusion:
//   M = { T : eta_h_T >= theta * max eta_h_T  and  eta_h_T >= eta_alpha_T }.
std::vector<int> mark_elements(const ElementField& eta_h_T, const ElementField& eta_alpha_T,
                               double theta);

// Children inherit the parent value (exact L2 projection for nested
// piecewise constants).
ElementField transfer_alpha(const ElementField& alpha_h, const Mesh& new_mesh);

// The combined regularisation/mesh adaptivity loop: solve, estimate, reduce
// alpha_h while eta_alpha >= tol_alpha, mark/bisect/transfer while
// eta_h >= tol_h; stops when both estimators are below their tolerances and
// reconstructs the control by the weighted L2 projection.
AdaptiveResult run_adaptive(const Problem& problem, const Mesh& initial_mesh,
                            const AdaptiveConfig& cfg,
                            const IterationObserver& observer = {});

}  // namespace adaptreg
