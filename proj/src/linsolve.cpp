#include "adaptreg/linsolve.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace adaptreg {

struct SparseFactorization::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

SparseFactorization::SparseFactorization(const Eigen::SparseMatrix<double>& matrix) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("SparseFactorization: matrix must be square");
  auto impl = std::make_shared<Impl>();
  Eigen::SparseMatrix<double> compressed = matrix;
  compressed.makeCompressed();
  impl->lu.analyzePattern(compressed);
  impl->lu.factorize(compressed);
  if (impl->lu.info() != Eigen::Success)
    throw std::runtime_error("SparseFactorization: singular matrix (" +
                             impl->lu.lastErrorMessage() + ")");
  impl_ = std::move(impl);
  rows_ = static_cast<int>(matrix.rows());
}

Eigen::VectorXd SparseFactorization::solve(const Eigen::VectorXd& b) const {
  if (b.size() != rows_) throw std::invalid_argument("SparseFactorization: size mismatch");
  return impl_->lu.solve(b);
}

SparseFactorization lu_factor(const LinearSystem& system) {
  return SparseFactorization(system.matrix);
}

SparseFactorization lu_factor(const Eigen::SparseMatrix<double>& matrix) {
  return SparseFactorization(matrix);
}

Eigen::VectorXd lu_solve(const SparseFactorization& fact, const Eigen::VectorXd& b) {
  return fact.solve(b);
}

namespace {

Eigen::VectorXd random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(rng);
  v.normalize();
  return v;
}

// Shared iteration driver: apply() maps x to either A*x or A^{-1}*x; the
// returned estimate is the limiting amplification |lambda| resp. 1/|lambda|.
template <typename Apply>
double iterate_magnitude(int n, Apply&& apply, double tol, int max_iter, std::mt19937_64& rng,
                         int& used, bool& converged) {
  Eigen::VectorXd x = random_unit(n, rng);
  double est = 0.0;
  double prev_est = 0.0;
  double prev_rq = 0.0;
  int stable = 0;
  int stall = 0;
  int restarts = 0;
  converged = false;
  for (int k = 0; k < max_iter; ++k) {
    ++used;
    Eigen::VectorXd y = apply(x);
    const double norm = y.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      x = random_unit(n, rng);
      continue;
    }
    est = norm;
    const double rq = std::abs(x.dot(y));  // |x^T A x| for unit x
    y /= norm;
    const double align = std::abs(x.dot(y));
    const double rq_change = std::abs(rq - prev_rq) / (rq > 0.0 ? rq : 1.0);
    const double change = std::abs(est - prev_est) / est;
    if (k > 0 && change <= tol) {
      if (++stable >= 3) {
        converged = true;
        x = y;
        break;
      }
    } else {
      stable = 0;
    }
    // Rayleigh quotient stalled but the iterate keeps rotating: likely a
    // dominant complex pair; restart from a fresh vector.
    if (k > 10 && rq_change <= 1e-6 && align < 0.9) {
      if (++stall >= 5 && restarts < 2) {
        x = random_unit(n, rng);
        ++restarts;
        stall = 0;
        stable = 0;
        prev_est = 0.0;
        prev_rq = 0.0;
        continue;
      }
    } else {
      stall = 0;
    }
    prev_est = est;
    prev_rq = rq;
    x = y;
  }
  return est;
}

SpectrumEstimate eig_extremes_impl(const Eigen::SparseMatrix<double>& A, double tol,
                                   int max_iter, std::uint64_t seed) {
  if (A.rows() != A.cols()) throw std::invalid_argument("eig_extremes: square matrix required");
  const int n = static_cast<int>(A.rows());
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  SpectrumEstimate out;

  bool conv_max = false;
  out.lambda_max_mag = iterate_magnitude(
      n, [&A](const Eigen::VectorXd& v) { return Eigen::VectorXd(A * v); }, tol, max_iter, rng,
      out.iterations_used, conv_max);

  const SparseFactorization fact(A);
  bool conv_min = false;
  const double inv_mag = iterate_magnitude(
      n, [&fact](const Eigen::VectorXd& v) { return fact.solve(v); }, tol, max_iter, rng,
      out.iterations_used, conv_min);
  out.lambda_min_mag = 1.0 / inv_mag;
  out.cond = out.lambda_max_mag / out.lambda_min_mag;
  out.converged = conv_max && conv_min;
  return out;
}

}  // namespace

SpectrumEstimate eig_extremes(const LinearSystem& system, double tol, int max_iter,
                              std::uint64_t seed) {
  return eig_extremes_impl(system.matrix, tol, max_iter, seed);
}

SpectrumEstimate eig_extremes(const Eigen::SparseMatrix<double>& matrix, double tol,
                              int max_iter, std::uint64_t seed) {
  return eig_extremes_impl(matrix, tol, max_iter, seed);
}

SpectrumEstimate dense_eig_extremes(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("dense_eig_extremes: square matrix required");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dense_eig_extremes: eigensolver failed");
  const Eigen::VectorXd mags = solver.eigenvalues().array().abs();
  SpectrumEstimate out;
  out.lambda_max_mag = mags.maxCoeff();
  out.lambda_min_mag = mags.minCoeff();
  out.cond = out.lambda_max_mag / out.lambda_min_mag;
  out.converged = true;
  return out;
}

}  // namespace adaptreg
