#pragma once

#include <Eigen/Core>

#include "adaptreg/fields.hpp"
#include "adaptreg/mesh.hpp"

namespace adaptreg {

// Per-element estimator contributions (all squared) plus the global roots.
// eta_h_T2 = Rz2 + Ru2 + jump_half2 elementwise; eta_h = sqrt(sum eta_h_T2)
// and likewise for the regularisation part.
struct EstimatorBreakdown {
  Eigen::VectorXd Rz2;
  Eigen::VectorXd Ru2;
  Eigen::VectorXd jump_half2;    // half of the element's facet jump sum
  Eigen::VectorXd eta_h_T2;
  Eigen::VectorXd eta_alpha_T2;
  double eta_h = 0.0;
  double eta_alpha = 0.0;
};

struct ErrorReport {
  double err_X = 0.0;
  double err_u_h1 = 0.0;
  double err_z_h1 = 0.0;
  double effectivity = 0.0;
  double target_misfit = 0.0;
};

// Discretisation estimator. For the P1 space the elementwise Laplacians
// vanish, so the residuals reduce to
//   Rz2 = h_T^2 ||d - u_h||_T^2,   Ru2 = h_T^2 alpha^{-1} ||z_h||_T^2,
// with normal-gradient jump terms
//   Jz2 = h_E ||[grad z_h]||_E^2,  Ju2 = h_E alpha^{-1} ||alpha [grad u_h]||_E^2.
// Interior facets contribute half of (Ju2 + Jz2) to each neighbour;
// boundary facets contribute nothing. In 1D the facet norm is the point
// value (counting measure). alpha is the target parameter, not alpha_h.
EstimatorBreakdown compute_eta_h(const Mesh& mesh, const NodalField& u_h,
                                 const NodalField& z_h, double alpha,
                                 const AnalyticFunction& d, int data_order = 0);

// Regularisation inconsistency estimator
//   eta_alpha_T^2 = alpha^{-1} (alpha_h|_T - alpha)^2 ||grad u_h||_T^2.
EstimatorBreakdown compute_eta_alpha(const Mesh& mesh, const NodalField& u_h,
                                     const ElementField& alpha_h, double alpha);

// Energy-norm error against the exact pair:
//   err_X = (alpha ||grad(u - u_h)||^2 + ||grad(z - z_h)||^2)^(1/2).
ErrorReport energy_error(const Mesh& mesh, const NodalField& u_h, const NodalField& z_h,
                         const AnalyticFunction& exact_u, const AnalyticFunction& exact_z,
                         double alpha, int order = 0);

// (eta_h^2 + eta_alpha^2)^(1/2) / err_X; reduces to eta_h / err_X when
// alpha_h = alpha since the inconsistency estimator vanishes exactly.
double effectivity(const ErrorReport& report, const EstimatorBreakdown& eta_h_part,
                   const EstimatorBreakdown& eta_alpha_part);

// ||u_h - d||, the target-misfit diagnostic.
double target_misfit(const Mesh& mesh, const NodalField& u_h, const AnalyticFunction& d,
                     int order = 0);

}  // namespace adaptreg
