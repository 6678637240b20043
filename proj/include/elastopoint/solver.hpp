#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "elastopoint/sparse.hpp"

namespace elastopoint {

using DenseMatrix = Eigen::MatrixXd;
using DenseVector = Eigen::VectorXd;

struct SolveStats {
  int iterations = 0;
  double final_relative_residual = 0.0;
  bool converged = false;
};

struct CgOptions {
  double rel_tol = 1e-10;
  // Negative selects the default 20 * sqrt(n) + 200.
  int max_iter = -1;
  // Worker threads for matrix-vector products; results do not depend on it.
  int threads = 1;
  // Called with (iteration, current iterate) after every update.
  std::function<void(int, std::span<const double>)> on_iterate;
};

int default_max_iterations(std::size_t n);

struct CgResult {
  std::vector<double> x;
  SolveStats stats;
};

/// Jacobi-preconditioned conjugate gradients from a zero initial guess.
/// Stops when ||b - A x|| <= rel_tol ||b|| (true residual, recomputed at the
/// end). Non-convergence is reported through stats, not thrown. Throws
/// MatrixError for a non-positive diagonal entry.
CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, const CgOptions& options = {});

struct SymmetricEigen {
  DenseVector values;   // ascending
  DenseMatrix vectors;  // orthonormal columns
};

/// Throws ArgumentError if m is not symmetric within 1e-10 (relative).
SymmetricEigen dense_sym_eig(const DenseMatrix& m);

/// Lower factor L with L L^T = m. Throws FactorizationError if a pivot is <= 0.
DenseMatrix dense_cholesky(const DenseMatrix& m);

/// Smallest eigenvalues of the pencil (e, g) with g SPD, ascending.
DenseVector dense_pencil_eigenvalues(const DenseMatrix& e, const DenseMatrix& g);

DenseMatrix to_dense(const SparseMatrix& a);

}  // namespace elastopoint
