#include "adaptreg/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace adaptreg {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("problem: alpha must lie in (0, 1]");
}

}  // namespace

Problem example1(double alpha) {
  check_alpha(alpha);
  constexpr double k1 = 500.0;
  const double k2 = 1.0 / (1.0 + 12.0 * alpha * k1 * k1);

  auto y_of = [](double x) { return -k1 * (x - 0.5) * (x - 0.5); };
  auto dy_of = [](double x) { return -2.0 * k1 * (x - 0.5); };

  Problem p;
  p.name = "ex1";
  p.dim = 1;
  p.alpha = alpha;
  p.target.value = [=](const Eigen::Vector2d& pt) {
    const double y = y_of(pt(0));
    return k2 * (1.0 + 4.0 * alpha * k1 * k1 * (4.0 * y * y + 12.0 * y + 3.0)) * std::exp(y);
  };

  AnalyticFunction u;
  u.value = [=](const Eigen::Vector2d& pt) { return k2 * std::exp(y_of(pt(0))); };
  u.gradient = [=](const Eigen::Vector2d& pt) {
    return Eigen::Vector2d(k2 * std::exp(y_of(pt(0))) * dy_of(pt(0)), 0.0);
  };

  // z = -alpha * u''; u'' = k2 e^y (y'^2 + y'') = -2 k1 k2 e^y (2y + 1).
  AnalyticFunction z;
  z.value = [=](const Eigen::Vector2d& pt) {
    const double y = y_of(pt(0));
    return 2.0 * alpha * k1 * (2.0 * y + 1.0) * k2 * std::exp(y);
  };
  z.gradient = [=](const Eigen::Vector2d& pt) {
    const double y = y_of(pt(0));
    return Eigen::Vector2d(2.0 * alpha * k1 * k2 * std::exp(y) * dy_of(pt(0)) * (2.0 * y + 3.0),
                           0.0);
  };
  p.exact_u = std::move(u);
  p.exact_z = std::move(z);
  return p;
}

Problem example2(double alpha) {
  check_alpha(alpha);
  const double omega = std::pow(4.0 * alpha, -0.25);
  const double sqrt_alpha = std::sqrt(alpha);
  // Shifted-exponential building blocks: with yb := omega - y,
  //   E(t) = 2 e^{-omega} cosh(omega - t) = e^{-t} + e^{t - 2 omega},
  //   S(t) = 2 e^{-omega} sinh(omega - t) = e^{-t} - e^{t - 2 omega},
  //   D    = 2 e^{-omega} (cosh omega + cos omega).
  // Then u = 1 - [cos(y) E(y) + cos(yb) E(yb)] / D and
  //      z = sqrt(alpha) [sin(y) S(y) + sin(yb) S(yb)] / D,
  // which are overflow-free for every y in [0, omega].
  auto E = [omega](double t) { return std::exp(-t) + std::exp(t - 2.0 * omega); };
  auto S = [omega](double t) { return std::exp(-t) - std::exp(t - 2.0 * omega); };
  const double D = 1.0 + std::exp(-2.0 * omega) + 2.0 * std::exp(-omega) * std::cos(omega);

  Problem p;
  p.name = "ex2";
  p.dim = 1;
  p.alpha = alpha;
  p.target.value = [](const Eigen::Vector2d&) { return 1.0; };

  AnalyticFunction u;
  u.value = [=](const Eigen::Vector2d& pt) {
    const double y = omega * pt(0);
    const double yb = omega - y;
    return 1.0 - (std::cos(y) * E(y) + std::cos(yb) * E(yb)) / D;
  };
  u.gradient = [=](const Eigen::Vector2d& pt) {
    const double y = omega * pt(0);
    const double yb = omega - y;
    const double du = -(omega / D) * (-std::sin(y) * E(y) - std::cos(y) * S(y) +
                                      std::sin(yb) * E(yb) + std::cos(yb) * S(yb));
    return Eigen::Vector2d(du, 0.0);
  };

  AnalyticFunction z;
  z.value = [=](const Eigen::Vector2d& pt) {
    const double y = omega * pt(0);
    const double yb = omega - y;
    return sqrt_alpha * (std::sin(y) * S(y) + std::sin(yb) * S(yb)) / D;
  };
  z.gradient = [=](const Eigen::Vector2d& pt) {
    const double y = omega * pt(0);
    const double yb = omega - y;
    const double dz = sqrt_alpha * (omega / D) *
                      (std::cos(y) * S(y) - std::sin(y) * E(y) - std::cos(yb) * S(yb) +
                       std::sin(yb) * E(yb));
    return Eigen::Vector2d(dz, 0.0);
  };
  p.exact_u = std::move(u);
  p.exact_z = std::move(z);
  return p;
}

Problem example3() {
  Problem p;
  p.name = "ex3";
  p.dim = 2;
  p.alpha = 1e-8;  // the experiments override this via their own config
  p.target.value = [](const Eigen::Vector2d& pt) {
    const double dx = pt(0) - 0.5;
    const double dy = pt(1) - 0.5;
    return dx * dx + dy * dy <= 0.1 * 0.1 ? 1.0 : 0.0;
  };
  return p;
}

Problem problem_by_name(const std::string& name, double alpha) {
  if (name == "ex1") return example1(alpha);
  if (name == "ex2") return example2(alpha);
  if (name == "ex3") {
    Problem p = example3();
    p.alpha = alpha;
    return p;
  }
  throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace adaptreg
