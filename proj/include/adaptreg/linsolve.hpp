#pragma once

#include <cstdint>
#include <memory>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "adaptreg/assembly.hpp"

namespace adaptreg {

// Sparse LU with partial pivoting and COLAMD fill-reducing ordering.
class SparseFactorization {
 public:
  explicit SparseFactorization(const Eigen::SparseMatrix<double>& matrix);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  int rows() const { return rows_; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  int rows_ = 0;
};

SparseFactorization lu_factor(const LinearSystem& system);
SparseFactorization lu_factor(const Eigen::SparseMatrix<double>& matrix);
Eigen::VectorXd lu_solve(const SparseFactorization& fact, const Eigen::VectorXd& b);

struct SpectrumEstimate {
  double lambda_max_mag = 0.0;
  double lambda_min_mag = 0.0;
  double cond = 0.0;
  int iterations_used = 0;
  bool converged = false;
};

// Extreme eigenvalue magnitudes: power iteration for the largest, inverse
// iteration through the LU factorization for the smallest. The matrix is
// nonsymmetric, so magnitudes of the iterates are tracked; the power
// iteration restarts from a fresh random vector if the Rayleigh quotient
// stalls while the iterate keeps rotating (possible complex pair).
SpectrumEstimate eig_extremes(const LinearSystem& system, double tol = 1e-8,
                              int max_iter = 50000, std::uint64_t seed = 0);
SpectrumEstimate eig_extremes(const Eigen::SparseMatrix<double>& matrix, double tol = 1e-8,
                              int max_iter = 50000, std::uint64_t seed = 0);

// Dense cross-check route (general eigensolver); for small systems only.
SpectrumEstimate dense_eig_extremes(const Eigen::MatrixXd& matrix);

}  // namespace adaptreg
