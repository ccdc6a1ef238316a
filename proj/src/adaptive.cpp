#include "adaptreg/adaptive.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "adaptreg/assembly.hpp"

namespace adaptreg {

void AdaptiveConfig::validate() const {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("AdaptiveConfig: alpha must lie in (0, 1]");
  if (alpha0 < alpha || alpha0 > 1.0)
    throw std::invalid_argument("AdaptiveConfig: requires alpha <= alpha0 <= 1");
  if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("AdaptiveConfig: rho in [0, 1]");
  if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("AdaptiveConfig: theta in [0, 1]");
  if (!(tol_alpha > 0.0) || !(tol_h > 0.0))
    throw std::invalid_argument("AdaptiveConfig: tolerances must be positive");
  if (max_iterations < 1) throw std::invalid_argument("AdaptiveConfig: max_iterations >= 1");
}

ElementField relative_estimator_size(const ElementField& eta_alpha_T) {
  const int n = static_cast<int>(eta_alpha_T.values.size());
  if (n == 0) throw std::invalid_argument("relative_estimator_size: empty field");
  ElementField r;
  const double lo = eta_alpha_T.values.minCoeff();
  const double hi = eta_alpha_T.values.maxCoeff();
  if (hi - lo <= 0.0) {
    r.values = Eigen::VectorXd::Ones(n);
  } else {
    r.values = ((eta_alpha_T.values.array() - lo) / (hi - lo)).matrix();
  }
  return r;
}

ElementField reduce_alpha(const ElementField& alpha_h, const ElementField& r,
                          const AdaptiveConfig& cfg) {
  if (alpha_h.values.size() != r.values.size())
    throw std::invalid_argument("reduce_alpha: size mismatch");
  const double slack = 1e-12;
  if ((alpha_h.values.array() < cfg.alpha * (1.0 - slack) - slack).any() ||
      (alpha_h.values.array() > cfg.alpha0 * (1.0 + slack)).any())
    throw std::invalid_argument("reduce_alpha: alpha_h out of [alpha, alpha0]");
  ElementField out;
  out.values = (cfg.alpha + ((alpha_h.values.array() - cfg.alpha) *
                             (1.0 + r.values.array() * (cfg.rho - 1.0)))
                                .max(0.0))
                   .matrix();
  return out;
}

std::vector<int> mark_elements(const ElementField& eta_h_T, const ElementField& eta_alpha_T,
                               double theta) {
  if (eta_h_T.values.size() != eta_alpha_T.values.size())
    throw std::invalid_argument("mark_elements: size mismatch");
  // Elements dominated by the inconsistency estimator are not refinement
  // candidates; the maximum is taken over the remaining candidates so a
  // dominated peak cannot shut refinement off everywhere else.
  double max_admissible = 0.0;
  for (int e = 0; e < eta_h_T.values.size(); ++e)
    if (eta_h_T.values(e) >= eta_alpha_T.values(e))
      max_admissible = std::max(max_admissible, eta_h_T.values(e));
  std::vector<int> marked;
  const double threshold = theta * max_admissible;
  for (int e = 0; e < eta_h_T.values.size(); ++e) {
    if (eta_h_T.values(e) >= threshold && eta_h_T.values(e) >= eta_alpha_T.values(e))
      marked.push_back(e);
  }
  return marked;
}

ElementField transfer_alpha(const ElementField& alpha_h, const Mesh& new_mesh) {
  if (alpha_h.values.size() != new_mesh.parent_element_count)
    throw std::invalid_argument("transfer_alpha: field does not match the parent generation");
  ElementField out;
  out.values.resize(new_mesh.n_elements());
  for (int e = 0; e < new_mesh.n_elements(); ++e)
    out.values(e) = alpha_h.values(new_mesh.parent_of[e]);
  return out;
}

AdaptiveResult run_adaptive(const Problem& problem, const Mesh& initial_mesh,
                            const AdaptiveConfig& cfg, const IterationObserver& observer) {
  cfg.validate();
  if (initial_mesh.dim != problem.dim)
    throw std::invalid_argument("run_adaptive: mesh/problem dimension mismatch");

  AdaptiveResult result;
  result.mesh = initial_mesh;
  result.alpha_h = constant_element_field(result.mesh, cfg.alpha0);

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    const auto tic = std::chrono::steady_clock::now();

    const LinearSystem system =
        assemble_coupled(result.mesh, result.alpha_h, problem.target, cfg.data_order);
    const CoupledSolution sol = solve_coupled(system, result.mesh, result.alpha_h);
    result.u = sol.u;
    result.z = sol.z;

    const EstimatorBreakdown eh = compute_eta_h(result.mesh, result.u, result.z, cfg.alpha,
                                                problem.target, cfg.data_order);
    const EstimatorBreakdown ea =
        compute_eta_alpha(result.mesh, result.u, result.alpha_h, cfg.alpha);

    IterationRecord rec;
    rec.iteration = iter;
    rec.dim_Vh = system.n_free;
    rec.eta_h = eh.eta_h;
    rec.eta_alpha = ea.eta_alpha;
    rec.alpha_min = result.alpha_h.values.minCoeff();
    rec.alpha_max = result.alpha_h.values.maxCoeff();
    rec.alpha_mean = result.alpha_h.values.mean();
    if (problem.has_exact()) {
      const ErrorReport err = energy_error(result.mesh, result.u, result.z, *problem.exact_u,
                                           *problem.exact_z, cfg.alpha, cfg.data_order);
      rec.err_X = err.err_X;
      rec.effectivity = effectivity(err, eh, ea);
    }

    const bool need_alpha = ea.eta_alpha >= cfg.tol_alpha;
    const bool need_h = eh.eta_h >= cfg.tol_h;
    result.iterations = iter;

    auto finish_iteration = [&]() {
      rec.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - tic).count();
      result.records.push_back(rec);
      if (observer) observer(result.records.back(), system);
    };

    if (!need_alpha && !need_h) {
      finish_iteration();
      result.converged = true;
      break;
    }
    if (iter == cfg.max_iterations) {  // budget exhausted: keep the state consistent
      finish_iteration();
      break;
    }
    if (cfg.dof_limit > 0 && system.n_free > cfg.dof_limit) {
      finish_iteration();
      result.hit_dof_limit = true;
      break;
    }

    if (need_alpha) {
      ElementField eta_alpha_T;
      eta_alpha_T.values = ea.eta_alpha_T2.array().sqrt().matrix();
      const ElementField r = relative_estimator_size(eta_alpha_T);
      result.alpha_h = reduce_alpha(result.alpha_h, r, cfg);
    }
    if (need_h) {
      ElementField eta_h_T, eta_alpha_T;
      eta_h_T.values = eh.eta_h_T2.array().sqrt().matrix();
      eta_alpha_T.values = ea.eta_alpha_T2.array().sqrt().matrix();
      const std::vector<int> marked = mark_elements(eta_h_T, eta_alpha_T, cfg.theta);
      for (int e : marked)
        if (eta_alpha_T.values(e) > eta_h_T.values(e)) result.marks_respected_exclusion = false;
      rec.elements_marked = static_cast<int>(marked.size());
      if (!marked.empty()) {
        Mesh refined = bisect(result.mesh, marked);
        result.alpha_h = transfer_alpha(result.alpha_h, refined);
        result.mesh = std::move(refined);
      }
    }

    finish_iteration();
  }

  result.f = reconstruct_control(result.mesh, result.alpha_h, result.z);
  return result;
}

}  // namespace adaptreg
