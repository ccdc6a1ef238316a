#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "adaptreg/fields.hpp"
#include "adaptreg/mesh.hpp"

namespace adaptreg {

// Assembled sparse system. For the coupled problem the unknowns are
// blocked as (all u dofs, then all z dofs), one dof per non-boundary
// vertex; row i tests with the hat function of vertex free_to_vertex[i].
// Systems over the unconstrained space W_h keep every vertex.
struct LinearSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<int> free_to_vertex;
  std::vector<int> vertex_to_free;  // -1 on eliminated boundary vertices
  int n_free = 0;
  int blocks = 1;  // 2 for the coupled (u, z) system

  int dim() const { return static_cast<int>(matrix.rows()); }
};

struct CoupledSolution {
  NodalField u;
  NodalField z;
  ElementField alpha;  // the alpha_h the system was assembled with
};

// Coupled primal-dual system with elementwise coefficient alpha_h:
//   <alpha_h grad u, grad phi> - <z, phi>           = 0
//   <grad z, grad psi>         + <u, psi>           = <d, psi>
// for all P1 hats phi, psi vanishing on the boundary. Block layout
// [[alpha_h*A, -M], [M, A]]. Homogeneous Dirichlet dofs are eliminated.
LinearSystem assemble_coupled(const Mesh& mesh, const ElementField& alpha_h,
                              const AnalyticFunction& d, int data_order = 0);

CoupledSolution solve_coupled(const LinearSystem& system, const Mesh& mesh,
                              const ElementField& alpha_h);

// Weighted mass system over W_h (no boundary conditions):
//   <alpha_h f, tau> = <z_h, tau>  for all tau in W_h.
LinearSystem assemble_weighted_mass(const Mesh& mesh, const ElementField& alpha_h,
                                    const NodalField& z_h);

// Solves the weighted mass system; the alpha_h-weighted L2 projection of
// z_h / alpha_h used to reconstruct the control.
NodalField reconstruct_control(const Mesh& mesh, const ElementField& alpha_h,
                               const NodalField& z_h);

// Quadrature evaluation of norms. "order" defaults to the module's data
// order (10 in 1D, 6 in 2D) when 0.
double l2_norm(const Mesh& mesh, const NodalField& field);
double l2_norm(const Mesh& mesh, const AnalyticFunction& g, int order = 0);
double l2_error(const Mesh& mesh, const NodalField& field, const AnalyticFunction& g,
                int order = 0);
Eigen::VectorXd l2_error_per_element(const Mesh& mesh, const NodalField& field,
                                     const AnalyticFunction& g, int order = 0);
double h1_seminorm(const Mesh& mesh, const NodalField& field);
double h1_seminorm_error(const Mesh& mesh, const NodalField& field, const AnalyticFunction& g,
                         int order = 0);

int default_data_order(int dim);

}  // namespace adaptreg
