#include "elastopoint/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "elastopoint/errors.hpp"

namespace elastopoint {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_symmetric(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw ArgumentError("matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) throw ArgumentError("matrix is not symmetric");
}

}  // namespace

int default_max_iterations(std::size_t n) {
  return static_cast<int>(20.0 * std::sqrt(static_cast<double>(n))) + 200;
}

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, const CgOptions& options) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw ArgumentError("cg_solve: dimension mismatch");
  if (!(options.rel_tol > 0.0 && options.rel_tol < 1.0)) throw ArgumentError("cg_solve: rel_tol must lie in (0,1)");
  const int max_iter = options.max_iter < 0 ? default_max_iterations(n) : options.max_iter;

  std::vector<double> inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a.diagonal(i);
    if (!(d > 0.0)) throw MatrixError("cg_solve: non-positive diagonal entry at row " + std::to_string(i));
    inv_diag[i] = 1.0 / d;
  }

  CgResult out;
  out.x.assign(n, 0.0);
  const double b_norm = std::sqrt(dot(b, b));
  if (b_norm == 0.0) {
    out.stats = {0, 0.0, true};
    return out;
  }

  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(n), p(n), ap(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  double res = b_norm;
  int it = 0;
  while (it < max_iter && res > options.rel_tol * b_norm) {
    a.multiply(p, ap, options.threads);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    ++it;
    if (options.on_iterate) options.on_iterate(it, out.x);
    res = std::sqrt(dot(r, r));
    if (res <= options.rel_tol * b_norm) break;
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  // Recurrence residuals drift; report the true one.
  a.multiply(out.x, ap, options.threads);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  const double rel = std::sqrt(dot(r, r)) / b_norm;
  out.stats = {it, rel, rel <= options.rel_tol};
  return out;
}

SymmetricEigen dense_sym_eig(const DenseMatrix& m) {
  check_symmetric(m);
  if (m.rows() == 0) return {};
  const DenseMatrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(sym);
  if (es.info() != Eigen::Success) throw MatrixError("symmetric eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

DenseMatrix dense_cholesky(const DenseMatrix& m) {
  check_symmetric(m);
  Eigen::LLT<DenseMatrix> llt(m);
  if (llt.info() != Eigen::Success) throw FactorizationError("matrix is not positive definite");
  return llt.matrixL();
}

DenseVector dense_pencil_eigenvalues(const DenseMatrix& e, const DenseMatrix& g) {
  check_symmetric(e);
  check_symmetric(g);
  const DenseMatrix l = dense_cholesky(g);
  // L^{-1} E L^{-T}
  const DenseMatrix left = l.triangularView<Eigen::Lower>().solve(e);
  const DenseMatrix whitened = l.triangularView<Eigen::Lower>().solve(left.transpose());
  return dense_sym_eig(0.5 * (whitened + whitened.transpose())).values;
}

DenseMatrix to_dense(const SparseMatrix& a) {
  DenseMatrix d = DenseMatrix::Zero(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k)
      d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(ci[k])) += v[k];
  return d;
}

}  // namespace elastopoint
