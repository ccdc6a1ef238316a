#pragma once

#include <functional>

#include <Eigen/Core>

#include "adaptreg/mesh.hpp"

namespace adaptreg {

// Continuous piecewise-linear function given by one value per vertex.
struct NodalField {
  Eigen::VectorXd values;
};

// Piecewise-constant function given by one value per element.
struct ElementField {
  Eigen::VectorXd values;
};

// Pointwise-evaluable function with an optional closed-form gradient.
// Points are passed as (x, y); the y component is ignored in 1D.
struct AnalyticFunction {
  std::function<double(const Eigen::Vector2d&)> value;
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> gradient;

  bool has_gradient() const { return static_cast<bool>(gradient); }
};

ElementField constant_element_field(const Mesh& mesh, double value);

// Vertex interpolation of g onto the P1 space.
NodalField interpolate(const Mesh& mesh, const AnalyticFunction& g);

// P1 transfer onto a mesh produced by bisect(); exact for nested spaces.
NodalField interpolate_to_refined(const NodalField& coarse, const Mesh& fine);

// Per-element constant gradient of a P1 field; rows indexed by element.
Eigen::MatrixX2d element_gradients(const Mesh& mesh, const NodalField& field);

}  // namespace adaptreg
