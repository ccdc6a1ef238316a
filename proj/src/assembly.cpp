#include "adaptreg/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include "adaptreg/linsolve.hpp"
#include "adaptreg/quadrature.hpp"

namespace adaptreg {

namespace {

// Local P1 matrices on an element (closed forms, exact for affine cells).
void local_matrices(const Mesh& mesh, int e, Eigen::Matrix3d& stiff, Eigen::Matrix3d& mass,
                    int& nloc) {
  const auto& el = mesh.elements[e];
  if (mesh.dim == 1) {
    nloc = 2;
    const double h = std::abs(mesh.vertices(el[1], 0) - mesh.vertices(el[0], 0));
    stiff.setZero();
    mass.setZero();
    stiff(0, 0) = stiff(1, 1) = 1.0 / h;
    stiff(0, 1) = stiff(1, 0) = -1.0 / h;
    mass(0, 0) = mass(1, 1) = h / 3.0;
    mass(0, 1) = mass(1, 0) = h / 6.0;
    return;
  }
  nloc = 3;
  const double area = mesh.element_volume(e);
  Eigen::Matrix<double, 3, 2> grad;
  for (int i = 0; i < 3; ++i) {
    const auto pj = mesh.vertices.row(el[(i + 1) % 3]);
    const auto pk = mesh.vertices.row(el[(i + 2) % 3]);
    grad(i, 0) = -(pk(1) - pj(1)) / (2.0 * area);
    grad(i, 1) = (pk(0) - pj(0)) / (2.0 * area);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      stiff(i, j) = area * grad.row(i).dot(grad.row(j));
      mass(i, j) = area / 12.0 * (i == j ? 2.0 : 1.0);
    }
}

void quadrature_points(const Mesh& mesh, int e, const QuadratureRule& rule,
                       Eigen::MatrixX2d& points, Eigen::VectorXd& weights) {
  const auto& el = mesh.elements[e];
  const int nq = rule.n_points();
  points.resize(nq, 2);
  points.setZero();
  weights.resize(nq);
  const double scale = mesh.dim == 1 ? mesh.element_volume(e) : 2.0 * mesh.element_volume(e);
  for (int q = 0; q < nq; ++q) {
    for (int i = 0; i <= mesh.dim; ++i)
      for (int d = 0; d < mesh.dim; ++d)
        points(q, d) += rule.barycentric(q, i) * mesh.vertices(el[i], d);
    weights(q) = rule.weights(q) * scale;
  }
}

std::pair<std::vector<int>, std::vector<int>> free_dof_map(const Mesh& mesh) {
  std::vector<int> free_to_vertex;
  std::vector<int> vertex_to_free(mesh.n_vertices(), -1);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (!mesh.boundary_vertex[v]) {
      vertex_to_free[v] = static_cast<int>(free_to_vertex.size());
      free_to_vertex.push_back(v);
    }
  }
  return {std::move(free_to_vertex), std::move(vertex_to_free)};
}

}  // namespace

int default_data_order(int dim) { return dim == 1 ? 10 : 6; }

LinearSystem assemble_coupled(const Mesh& mesh, const ElementField& alpha_h,
                              const AnalyticFunction& d, int data_order) {
  if (alpha_h.values.size() != mesh.n_elements())
    throw std::invalid_argument("assemble_coupled: alpha_h size mismatch");
  if ((alpha_h.values.array() <= 0.0).any())
    throw std::invalid_argument("assemble_coupled: alpha_h must be strictly positive");
  if (data_order == 0) data_order = default_data_order(mesh.dim);

  LinearSystem sys;
  auto [f2v, v2f] = free_dof_map(mesh);
  sys.free_to_vertex = std::move(f2v);
  sys.vertex_to_free = std::move(v2f);
  sys.n_free = static_cast<int>(sys.free_to_vertex.size());
  sys.blocks = 2;
  if (sys.n_free == 0)
    throw std::invalid_argument("assemble_coupled: mesh has no interior vertices");

  const int n = sys.n_free;
  sys.rhs = Eigen::VectorXd::Zero(2 * n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.n_elements()) * (mesh.dim + 1) * (mesh.dim + 1) * 4);

  const QuadratureRule rule = quadrature_rule(mesh.dim, data_order);
  Eigen::Matrix3d stiff, mass;
  Eigen::MatrixX2d qp;
  Eigen::VectorXd qw;
  int nloc = 0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    local_matrices(mesh, e, stiff, mass, nloc);
    const auto& el = mesh.elements[e];
    const double a_T = alpha_h.values(e);
    for (int i = 0; i < nloc; ++i) {
      const int gi = sys.vertex_to_free[el[i]];
      if (gi < 0) continue;
      for (int j = 0; j < nloc; ++j) {
        const int gj = sys.vertex_to_free[el[j]];
        if (gj < 0) continue;
        trips.emplace_back(gi, gj, a_T * stiff(i, j));
        trips.emplace_back(gi, n + gj, -mass(i, j));
        trips.emplace_back(n + gi, gj, mass(i, j));
        trips.emplace_back(n + gi, n + gj, stiff(i, j));
      }
    }
    quadrature_points(mesh, e, rule, qp, qw);
    for (int q = 0; q < rule.n_points(); ++q) {
      const double dv = d.value(qp.row(q).transpose()) * qw(q);
      for (int i = 0; i < nloc; ++i) {
        const int gi = sys.vertex_to_free[el[i]];
        if (gi >= 0) sys.rhs(n + gi) += dv * rule.barycentric(q, i);
      }
    }
  }
  sys.matrix.resize(2 * n, 2 * n);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

CoupledSolution solve_coupled(const LinearSystem& system, const Mesh& mesh,
                              const ElementField& alpha_h) {
  const SparseFactorization fact = lu_factor(system);
  Eigen::VectorXd x = lu_solve(fact, system.rhs);

  const double bnorm = system.rhs.norm();
  double resid = (system.matrix * x - system.rhs).norm();
  if (resid > 1e-10 * (bnorm > 0.0 ? bnorm : 1.0)) {
    x += fact.solve(system.rhs - system.matrix * x);  // one refinement pass
    resid = (system.matrix * x - system.rhs).norm();
  }
  // Relative to ||b|| alone the residual floor is eps * || |A||x| || / ||b||,
  // which exceeds 1e-10 on the dim-1e5 protocols; gate on the normwise
  // backward error instead.
  const Eigen::VectorXd row_scale = system.matrix.cwiseAbs() * x.cwiseAbs();
  if (resid > 1e-10 * (bnorm + row_scale.norm()) || !std::isfinite(resid))
    throw std::runtime_error("solve_coupled: residual exceeds the 1e-10 accuracy gate");

  CoupledSolution sol;
  sol.u.values = Eigen::VectorXd::Zero(mesh.n_vertices());
  sol.z.values = Eigen::VectorXd::Zero(mesh.n_vertices());
  for (int i = 0; i < system.n_free; ++i) {
    sol.u.values(system.free_to_vertex[i]) = x(i);
    sol.z.values(system.free_to_vertex[i]) = x(system.n_free + i);
  }
  sol.alpha = alpha_h;
  return sol;
}

LinearSystem assemble_weighted_mass(const Mesh& mesh, const ElementField& alpha_h,
                                    const NodalField& z_h) {
  if (alpha_h.values.size() != mesh.n_elements())
    throw std::invalid_argument("assemble_weighted_mass: alpha_h size mismatch");
  if ((alpha_h.values.array() <= 0.0).any())
    throw std::invalid_argument("assemble_weighted_mass: alpha_h must be strictly positive");
  if (z_h.values.size() != mesh.n_vertices())
    throw std::invalid_argument("assemble_weighted_mass: z_h size mismatch");

  LinearSystem sys;
  const int n = mesh.n_vertices();
  sys.n_free = n;
  sys.blocks = 1;
  sys.free_to_vertex.resize(n);
  sys.vertex_to_free.resize(n);
  for (int v = 0; v < n; ++v) sys.free_to_vertex[v] = sys.vertex_to_free[v] = v;
  sys.rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trips;

  Eigen::Matrix3d stiff, mass;
  int nloc = 0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    local_matrices(mesh, e, stiff, mass, nloc);
    const auto& el = mesh.elements[e];
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j) {
        trips.emplace_back(el[i], el[j], alpha_h.values(e) * mass(i, j));
        sys.rhs(el[i]) += mass(i, j) * z_h.values(el[j]);
      }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

NodalField reconstruct_control(const Mesh& mesh, const ElementField& alpha_h,
                               const NodalField& z_h) {
  const LinearSystem sys = assemble_weighted_mass(mesh, alpha_h, z_h);
  const SparseFactorization fact = lu_factor(sys);
  NodalField f;
  f.values = lu_solve(fact, sys.rhs);
  return f;
}

double l2_norm(const Mesh& mesh, const NodalField& field) {
  if (field.values.size() != mesh.n_vertices())
    throw std::invalid_argument("l2_norm: field size mismatch");
  Eigen::Matrix3d stiff, mass;
  int nloc = 0;
  double acc = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    local_matrices(mesh, e, stiff, mass, nloc);
    const auto& el = mesh.elements[e];
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j)
        acc += field.values(el[i]) * mass(i, j) * field.values(el[j]);
  }
  return std::sqrt(acc);
}

double l2_norm(const Mesh& mesh, const AnalyticFunction& g, int order) {
  if (order == 0) order = default_data_order(mesh.dim);
  const QuadratureRule rule = quadrature_rule(mesh.dim, order);
  Eigen::MatrixX2d qp;
  Eigen::VectorXd qw;
  double acc = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    quadrature_points(mesh, e, rule, qp, qw);
    for (int q = 0; q < rule.n_points(); ++q) {
      const double v = g.value(qp.row(q).transpose());
      acc += qw(q) * v * v;
    }
  }
  return std::sqrt(acc);
}

Eigen::VectorXd l2_error_per_element(const Mesh& mesh, const NodalField& field,
                                     const AnalyticFunction& g, int order) {
  if (field.values.size() != mesh.n_vertices())
    throw std::invalid_argument("l2_error_per_element: field size mismatch");
  if (order == 0) order = default_data_order(mesh.dim);
  const QuadratureRule rule = quadrature_rule(mesh.dim, order);
  Eigen::MatrixX2d qp;
  Eigen::VectorXd qw;
  Eigen::VectorXd out(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    quadrature_points(mesh, e, rule, qp, qw);
    const auto& el = mesh.elements[e];
    double acc = 0.0;
    for (int q = 0; q < rule.n_points(); ++q) {
      double uh = 0.0;
      for (int i = 0; i <= mesh.dim; ++i) uh += rule.barycentric(q, i) * field.values(el[i]);
      const double diff = uh - g.value(qp.row(q).transpose());
      acc += qw(q) * diff * diff;
    }
    out(e) = acc;  // squared contribution
  }
  return out;
}

double l2_error(const Mesh& mesh, const NodalField& field, const AnalyticFunction& g,
                int order) {
  return std::sqrt(l2_error_per_element(mesh, field, g, order).sum());
}

double h1_seminorm(const Mesh& mesh, const NodalField& field) {
  const Eigen::MatrixX2d grads = element_gradients(mesh, field);
  double acc = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e)
    acc += mesh.element_volume(e) * grads.row(e).squaredNorm();
  return std::sqrt(acc);
}

double h1_seminorm_error(const Mesh& mesh, const NodalField& field, const AnalyticFunction& g,
                         int order) {
  if (!g.has_gradient())
    throw std::invalid_argument("h1_seminorm_error: analytic gradient required");
  if (order == 0) order = default_data_order(mesh.dim);
  const QuadratureRule rule = quadrature_rule(mesh.dim, order);
  const Eigen::MatrixX2d grads = element_gradients(mesh, field);
  Eigen::MatrixX2d qp;
  Eigen::VectorXd qw;
  double acc = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    quadrature_points(mesh, e, rule, qp, qw);
    for (int q = 0; q < rule.n_points(); ++q) {
      Eigen::Vector2d diff = g.gradient(qp.row(q).transpose()) - grads.row(e).transpose();
      if (mesh.dim == 1) diff(1) = 0.0;
      acc += qw(q) * diff.squaredNorm();
    }
  }
  return std::sqrt(acc);
}

}  // namespace adaptreg
