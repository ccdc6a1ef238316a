#include "adaptreg/fields.hpp"

#include <stdexcept>

namespace adaptreg {

ElementField constant_element_field(const Mesh& mesh, double value) {
  ElementField f;
  f.values = Eigen::VectorXd::Constant(mesh.n_elements(), value);
  return f;
}

NodalField interpolate(const Mesh& mesh, const AnalyticFunction& g) {
  NodalField f;
  f.values.resize(mesh.n_vertices());
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    for (int d = 0; d < mesh.dim; ++d) p(d) = mesh.vertices(v, d);
    f.values(v) = g.value(p);
  }
  return f;
}

NodalField interpolate_to_refined(const NodalField& coarse, const Mesh& fine) {
  NodalField f;
  f.values.resize(fine.n_vertices());
  for (int v = 0; v < fine.n_vertices(); ++v) {
    const auto& par = fine.vertex_parents[v];
    if (par[0] < 0 || par[0] >= coarse.values.size() || par[1] >= coarse.values.size())
      throw std::invalid_argument("interpolate_to_refined: field does not match parent mesh");
    f.values(v) = 0.5 * (coarse.values(par[0]) + coarse.values(par[1]));
  }
  return f;
}

Eigen::MatrixX2d element_gradients(const Mesh& mesh, const NodalField& field) {
  if (field.values.size() != mesh.n_vertices())
    throw std::invalid_argument("element_gradients: field size mismatch");
  Eigen::MatrixX2d grads(mesh.n_elements(), 2);
  grads.setZero();
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& el = mesh.elements[e];
    if (mesh.dim == 1) {
      const double h = mesh.vertices(el[1], 0) - mesh.vertices(el[0], 0);
      grads(e, 0) = (field.values(el[1]) - field.values(el[0])) / h;
    } else {
      const double two_area = 2.0 * mesh.element_volume(e);
      Eigen::Vector2d g = Eigen::Vector2d::Zero();
      for (int i = 0; i < 3; ++i) {
        const auto pj = mesh.vertices.row(el[(i + 1) % 3]);
        const auto pk = mesh.vertices.row(el[(i + 2) % 3]);
        const Eigen::Vector2d grad_lambda(-(pk(1) - pj(1)) / two_area,
                                          (pk(0) - pj(0)) / two_area);
        g += field.values(el[i]) * grad_lambda;
      }
      grads.row(e) = g.transpose();
    }
  }
  return grads;
}

}  // namespace adaptreg
