#include "adaptreg/quadrature.hpp"

#include <stdexcept>
#include <vector>

namespace adaptreg {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  switch (n) {
    case 1:
      x = {0.0};
      w = {2.0};
      break;
    case 2:
      x = {-0.5773502691896257, 0.5773502691896257};
      w = {1.0, 1.0};
      break;
    case 3:
      x = {-0.7745966692414834, 0.0, 0.7745966692414834};
      w = {0.5555555555555556, 0.8888888888888888, 0.5555555555555556};
      break;
    case 4:
      x = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
      w = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
      break;
    case 5:
      x = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
           0.9061798459386640};
      w = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
           0.2369268850561891};
      break;
    case 6:
      x = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969, 0.2386191860831969,
           0.6612093864662645, 0.9324695142031521};
      w = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910, 0.4679139345726910,
           0.3607615730481386, 0.1713244923791704};
      break;
    default:
      throw std::invalid_argument("gauss_legendre: unsupported point count");
  }
}

QuadratureRule interval_rule(int order) {
  if (order < 2 || order > 10)
    throw std::invalid_argument("quadrature_rule: 1D order must be in 2..10");
  const int n = (order + 2) / 2;  // n-point Gauss is exact to degree 2n-1
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.dim = 1;
  rule.barycentric.resize(n, 2);
  rule.weights.resize(n);
  for (int q = 0; q < n; ++q) {
    const double t = 0.5 * (x[q] + 1.0);
    rule.barycentric(q, 0) = 1.0 - t;
    rule.barycentric(q, 1) = t;
    rule.weights(q) = 0.5 * w[q];
  }
  return rule;
}

struct TriangleGroup {
  double a, b;  // barycentric pair; third coordinate is 1-a-b
  double w;     // weight normalised so all groups sum to 1
  int perms;    // 3 for (a,a,b)-type points, 6 for generic, 1 for centroid
};

QuadratureRule triangle_rule(int order) {
  std::vector<TriangleGroup> groups;
  switch (order) {
    case 2:
      groups = {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0, 3}};
      break;
    case 4:
      groups = {{0.108103018168070, 0.445948490915965, 0.223381589678011, 3},
                {0.816847572980459, 0.091576213509771, 0.109951743655322, 3}};
      break;
    case 6:
      groups = {{0.873821971016996, 0.063089014491502, 0.050844906370207, 3},
                {0.501426509658179, 0.249286745170910, 0.116786275726379, 3},
                {0.636502499121399, 0.310352451033785, 0.082851075618374, 6}};
      break;
    default:
      throw std::invalid_argument("quadrature_rule: 2D order must be 2, 4 or 6");
  }
  std::vector<Eigen::Vector3d> pts;
  std::vector<double> wts;
  for (const auto& g : groups) {
    if (g.perms == 3) {
      const double c[3] = {g.a, g.b, g.b};
      for (int r = 0; r < 3; ++r) {
        pts.emplace_back(c[r % 3], c[(r + 1) % 3], c[(r + 2) % 3]);
        wts.push_back(g.w);
      }
    } else {
      const double c = 1.0 - g.a - g.b;
      const double sets[6][3] = {{g.a, g.b, c}, {g.a, c, g.b}, {g.b, g.a, c},
                                 {g.b, c, g.a}, {c, g.a, g.b}, {c, g.b, g.a}};
      for (auto& s : sets) {
        pts.emplace_back(s[0], s[1], s[2]);
        wts.push_back(g.w);
      }
    }
  }
  QuadratureRule rule;
  rule.dim = 2;
  const int n = static_cast<int>(pts.size());
  rule.barycentric.resize(n, 3);
  rule.weights.resize(n);
  double sum = 0.0;
  for (double w : wts) sum += w;
  for (int q = 0; q < n; ++q) {
    rule.barycentric.row(q) = pts[q].transpose();
    rule.weights(q) = 0.5 * wts[q] / sum;  // reference triangle has area 1/2
  }
  return rule;
}

}  // namespace

QuadratureRule quadrature_rule(int dim, int order) {
  if (dim == 1) return interval_rule(order);
  if (dim == 2) return triangle_rule(order);
  throw std::invalid_argument("quadrature_rule: dim must be 1 or 2");
}

}  // namespace adaptreg
