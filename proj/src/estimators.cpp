#include "adaptreg/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "adaptreg/assembly.hpp"

namespace adaptreg {

namespace {

// Outward unit normal (as a 2-vector) of element e on facet f.
Eigen::Vector2d outward_normal(const Mesh& mesh, const Facet& f, int e) {
  if (mesh.dim == 1) {
    const double xv = mesh.vertices(f.vertices[0], 0);
    return Eigen::Vector2d(xv > mesh.centroid(e)(0) ? 1.0 : -1.0, 0.0);
  }
  const Eigen::Vector2d p0 = mesh.vertices.row(f.vertices[0]).transpose();
  const Eigen::Vector2d p1 = mesh.vertices.row(f.vertices[1]).transpose();
  const Eigen::Vector2d edge = p1 - p0;
  Eigen::Vector2d n(edge(1), -edge(0));
  n.normalize();
  const Eigen::Vector2d mid = 0.5 * (p0 + p1);
  if (n.dot(mid - mesh.centroid(e)) < 0.0) n = -n;
  return n;
}

// Normal jump of a piecewise-constant vector field over an interior facet.
double normal_jump(const Mesh& mesh, const Facet& f, const Eigen::MatrixX2d& grads) {
  double jump = 0.0;
  for (int s = 0; s < 2; ++s) {
    const int e = f.elements[s];
    jump += grads.row(e).dot(outward_normal(mesh, f, e));
  }
  return jump;
}

// Squared L2 norm of a constant over the facet: counting measure in 1D,
// length measure in 2D.
double facet_measure(const Mesh& mesh, const Facet& f) {
  return mesh.dim == 1 ? 1.0 : f.size;
}

}  // namespace

EstimatorBreakdown compute_eta_h(const Mesh& mesh, const NodalField& u_h,
                                 const NodalField& z_h, double alpha,
                                 const AnalyticFunction& d, int data_order) {
  if (!(alpha > 0.0)) throw std::invalid_argument("compute_eta_h: alpha must be positive");
  const int ne = mesh.n_elements();
  EstimatorBreakdown out;
  out.Rz2.resize(ne);
  out.Ru2.resize(ne);
  out.jump_half2 = Eigen::VectorXd::Zero(ne);
  out.eta_alpha_T2 = Eigen::VectorXd::Zero(ne);

  const Eigen::VectorXd misfit2 = l2_error_per_element(mesh, u_h, d, data_order);
  AnalyticFunction zero;
  zero.value = [](const Eigen::Vector2d&) { return 0.0; };
  const Eigen::VectorXd z_norm2 = l2_error_per_element(mesh, z_h, zero, 2);
  for (int e = 0; e < ne; ++e) {
    const double hT = mesh.element_diameter(e);
    out.Rz2(e) = hT * hT * misfit2(e);
    out.Ru2(e) = hT * hT / alpha * z_norm2(e);
  }

  const Eigen::MatrixX2d grad_u = element_gradients(mesh, u_h);
  const Eigen::MatrixX2d grad_z = element_gradients(mesh, z_h);
  for (const Facet& f : mesh.facets) {
    if (f.boundary) continue;
    const double measure = facet_measure(mesh, f);
    const double ju = normal_jump(mesh, f, grad_u);
    const double jz = normal_jump(mesh, f, grad_z);
    const double Ju2 = f.size / alpha * (alpha * ju) * (alpha * ju) * measure;
    const double Jz2 = f.size * jz * jz * measure;
    for (int s = 0; s < 2; ++s) out.jump_half2(f.elements[s]) += 0.5 * (Ju2 + Jz2);
  }

  out.eta_h_T2 = out.Rz2 + out.Ru2 + out.jump_half2;
  out.eta_h = std::sqrt(out.eta_h_T2.sum());
  return out;
}

EstimatorBreakdown compute_eta_alpha(const Mesh& mesh, const NodalField& u_h,
                                     const ElementField& alpha_h, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("compute_eta_alpha: alpha must be positive");
  if (alpha_h.values.size() != mesh.n_elements())
    throw std::invalid_argument("compute_eta_alpha: alpha_h size mismatch");
  const double slack = 1e-12;
  if ((alpha_h.values.array() < alpha * (1.0 - slack) - slack).any() ||
      (alpha_h.values.array() > 1.0 + slack).any())
    throw std::invalid_argument("compute_eta_alpha: alpha_h out of [alpha, 1]");

  const int ne = mesh.n_elements();
  EstimatorBreakdown out;
  out.Rz2 = Eigen::VectorXd::Zero(ne);
  out.Ru2 = Eigen::VectorXd::Zero(ne);
  out.jump_half2 = Eigen::VectorXd::Zero(ne);
  out.eta_h_T2 = Eigen::VectorXd::Zero(ne);
  out.eta_alpha_T2.resize(ne);

  const Eigen::MatrixX2d grad_u = element_gradients(mesh, u_h);
  for (int e = 0; e < ne; ++e) {
    const double diff = alpha_h.values(e) - alpha;
    out.eta_alpha_T2(e) =
        diff * diff / alpha * grad_u.row(e).squaredNorm() * mesh.element_volume(e);
  }
  out.eta_alpha = std::sqrt(out.eta_alpha_T2.sum());
  return out;
}

ErrorReport energy_error(const Mesh& mesh, const NodalField& u_h, const NodalField& z_h,
                         const AnalyticFunction& exact_u, const AnalyticFunction& exact_z,
                         double alpha, int order) {
  ErrorReport report;
  report.err_u_h1 = h1_seminorm_error(mesh, u_h, exact_u, order);
  report.err_z_h1 = h1_seminorm_error(mesh, z_h, exact_z, order);
  report.err_X =
      std::sqrt(alpha * report.err_u_h1 * report.err_u_h1 + report.err_z_h1 * report.err_z_h1);
  return report;
}

double effectivity(const ErrorReport& report, const EstimatorBreakdown& eta_h_part,
                   const EstimatorBreakdown& eta_alpha_part) {
  const double total = std::sqrt(eta_h_part.eta_h * eta_h_part.eta_h +
                                 eta_alpha_part.eta_alpha * eta_alpha_part.eta_alpha);
  return total / report.err_X;
}

double target_misfit(const Mesh& mesh, const NodalField& u_h, const AnalyticFunction& d,
                     int order) {
  return l2_error(mesh, u_h, d, order);
}

}  // namespace adaptreg
