#pragma once

#include <optional>
#include <string>

#include "adaptreg/fields.hpp"

namespace adaptreg {

// A problem instance: target d, regularisation weight alpha, and the exact
// optimal pair (u, z) with closed-form gradients when one is known.
struct Problem {
  std::string name;
  int dim = 1;
  double domain_a = 0.0;
  double domain_b = 1.0;
  double alpha = 1.0;
  AnalyticFunction target;
  std::optional<AnalyticFunction> exact_u;
  std::optional<AnalyticFunction> exact_z;

  bool has_exact() const { return exact_u.has_value() && exact_z.has_value(); }
};

// Gaussian-type target with support localised at the centre of (0,1).
Problem example1(double alpha);

// Constant target d = 1 on (0,1); the solution develops boundary layers of
// width ~ alpha^(1/4). Evaluated in exponentially shifted form so the
// sinh/cosh ratios stay finite for alpha down to 1e-12.
Problem example2(double alpha);

// Unit square, target = indicator of the closed disc of radius 0.1 centred
// at (0.5, 0.5); no closed-form solution.
Problem example3();

Problem problem_by_name(const std::string& name, double alpha);

}  // namespace adaptreg
