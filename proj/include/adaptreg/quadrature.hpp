#pragma once

#include <Eigen/Core>

namespace adaptreg {

// Reference-element quadrature stored in barycentric coordinates.
// Weights sum to the reference volume: 1 on the unit interval, 1/2 on the
// unit triangle. Physical weights are w * |T| / ref_volume, i.e. w * h in
// 1D and w * 2|T| in 2D.
struct QuadratureRule {
  int dim = 1;
  Eigen::MatrixXd barycentric;  // n_points x (dim+1)
  Eigen::VectorXd weights;

  int n_points() const { return static_cast<int>(weights.size()); }
};

// Gauss-Legendre in 1D (order 2..10), symmetric triangle rules in 2D
// (order 2, 4 or 6). "order" is the highest polynomial degree integrated
// exactly. Throws std::invalid_argument for unsupported orders.
QuadratureRule quadrature_rule(int dim, int order);

}  // namespace adaptreg
