#include "elastopoint/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "elastopoint/assembly.hpp"
#include "elastopoint/errors.hpp"

namespace elastopoint {
namespace {

DenseMatrix gram_factor(const DenseMatrix& gram, const char* name) {
  try {
    return dense_cholesky(gram);
  } catch (const FactorizationError&) {
    throw ArgumentError(std::string(name) + " Gram matrix is not positive definite");
  } catch (const ArgumentError&) {
    throw ArgumentError(std::string(name) + " Gram matrix is not symmetric");
  }
}

double smallest_singular_value(const DenseMatrix& m) {
  if (m.rows() == 0) return std::numeric_limits<double>::infinity();
  if (m.rows() > m.cols()) return 0.0;
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double largest_singular_value(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  return svd.singularValues()(0);
}

// Orthonormal basis of symmetric d x d tensors under the Frobenius product.
std::vector<std::array<std::array<double, 3>, 3>> symmetric_tensor_basis(int d) {
  std::vector<std::array<std::array<double, 3>, 3>> basis;
  for (int p = 0; p < d; ++p) {
    std::array<std::array<double, 3>, 3> e{};
    e[p][p] = 1.0;
    basis.push_back(e);
  }
  const double off = 1.0 / std::sqrt(2.0);
  for (int p = 0; p < d; ++p) {
    for (int q = p + 1; q < d; ++q) {
      std::array<std::array<double, 3>, 3> e{};
      e[p][q] = off;
      e[q][p] = off;
      basis.push_back(e);
    }
  }
  return basis;
}

}  // namespace

double discrete_infsup(const DenseMatrix& pairing, const DenseMatrix& gram_sup, const DenseMatrix& gram_inf) {
  if (gram_inf.rows() != pairing.rows() || gram_sup.rows() != pairing.cols()) {
    throw ArgumentError("discrete_infsup: pairing is " + std::to_string(pairing.rows()) + "x" +
                        std::to_string(pairing.cols()) + " but Grams are " + std::to_string(gram_inf.rows()) +
                        " and " + std::to_string(gram_sup.rows()));
  }
  if (pairing.rows() == 0) return std::numeric_limits<double>::infinity();
  if (pairing.rows() > pairing.cols()) return 0.0;
  const DenseMatrix l_inf = gram_factor(gram_inf, "infimum-space");
  const DenseMatrix l_sup = gram_factor(gram_sup, "supremum-space");
  const DenseMatrix left = l_inf.triangularView<Eigen::Lower>().solve(pairing);
  const DenseMatrix whitened = l_sup.triangularView<Eigen::Lower>().solve(left.transpose()).transpose();
  return smallest_singular_value(whitened);
}

DenseMatrix kernel_basis(const DenseMatrix& constraint, const DenseMatrix& gram, double rank_tol) {
  if (constraint.cols() != gram.rows()) throw ArgumentError("kernel_basis: constraint and Gram sizes differ");
  const DenseMatrix l = gram_factor(gram, "kernel");
  const Eigen::Index n = gram.rows();
  DenseMatrix null_coords;
  if (constraint.rows() == 0 || n == 0) {
    null_coords = DenseMatrix::Identity(n, n);
  } else {
    // C L^{-T}: kernel coordinates in the whitened basis.
    const DenseMatrix w = l.triangularView<Eigen::Lower>().solve(constraint.transpose()).transpose();
    Eigen::JacobiSVD<DenseMatrix> svd(w, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (smax > 0.0 && sv(k) > rank_tol * smax) ++rank;
    null_coords = svd.matrixV().rightCols(n - rank);
  }
  return l.transpose().triangularView<Eigen::Upper>().solve(null_coords);
}

InfSupReport theorem31_report(const Theorem31Input& in, double rank_tol) {
  const Eigen::Index nx = in.gram_x.rows();
  const Eigen::Index ny = in.gram_y.rows();
  if (in.a.rows() != nx || in.a.cols() != ny) throw ArgumentError("theorem31_report: A must be dim X x dim Y");
  if (in.b.cols() != ny || in.b.rows() != in.gram_m.rows()) throw ArgumentError("theorem31_report: B must be dim M x dim Y");
  if (in.c.cols() != nx || in.c.rows() != in.gram_q.rows()) throw ArgumentError("theorem31_report: C must be dim Q x dim X");

  InfSupReport r;
  r.beta_b = discrete_infsup(in.b, in.gram_y, in.gram_m);
  r.beta_c = discrete_infsup(in.c, in.gram_x, in.gram_q);

  const DenseMatrix zc = kernel_basis(in.c, in.gram_x, rank_tol);
  const DenseMatrix zb = kernel_basis(in.b, in.gram_y, rank_tol);
  r.kernel_c_dim = static_cast<std::size_t>(zc.cols());
  r.kernel_b_dim = static_cast<std::size_t>(zb.cols());

  // Both bases are orthonormal in their Grams, so the restricted Grams are identities.
  const DenseMatrix a_kernel_rows = zc.transpose() * in.a;
  const DenseMatrix restricted = a_kernel_rows * zb;
  const DenseMatrix eye_c = DenseMatrix::Identity(zc.cols(), zc.cols());
  const DenseMatrix eye_b = DenseMatrix::Identity(zb.cols(), zb.cols());
  r.alpha_a_kernel = discrete_infsup(restricted, eye_b, eye_c);
  r.alpha_a_full = discrete_infsup(a_kernel_rows, in.gram_y, eye_c);

  if (zb.cols() == 0) {
    r.injective_on_kernels = true;
  } else {
    const double smin = smallest_singular_value(restricted.transpose());
    const double smax = largest_singular_value(restricted);
    r.injective_on_kernels = smax > 0.0 && smin > rank_tol * smax;
  }
  return r;
}

Theorem31Input weighted_pairing_system(const Mesh& mesh, double s, const Point& center) {
  if (!(std::abs(s) < 1.0)) throw ArgumentError("weighted pairing needs |s| < 1, got " + std::to_string(s));
  const int d = mesh.dim();
  for (int a = 0; a < d; ++a)
    if (!(center[a] > 0.0 && center[a] < 1.0)) throw ArgumentError("weight center must lie inside the unit box");
  const DofMap dofs(mesh);
  if (dofs.num_free() == 0) throw ArgumentError("mesh has no interior vertices");

  const WeightSpec plus{d, {center}, d * s};
  const WeightSpec minus{d, {center}, -d * s};
  const auto w_plus = cell_weight_integrals(mesh, plus, 4);
  const auto w_minus = cell_weight_integrals(mesh, minus, 4);

  const auto basis = symmetric_tensor_basis(d);
  const auto nt = static_cast<Eigen::Index>(basis.size());
  const auto n_tensor = static_cast<Eigen::Index>(mesh.num_cells()) * nt;
  const auto n_vec = static_cast<Eigen::Index>(dofs.num_free());

  Theorem31Input in;
  in.a = DenseMatrix::Zero(n_tensor, n_tensor);
  in.gram_x = DenseMatrix::Zero(n_tensor, n_tensor);
  in.gram_y = DenseMatrix::Zero(n_tensor, n_tensor);
  in.b = DenseMatrix::Zero(n_vec, n_tensor);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const double vol = mesh.cell_volume(c);
    const auto base = static_cast<Eigen::Index>(c) * nt;
    for (Eigen::Index t = 0; t < nt; ++t) {
      in.a(base + t, base + t) = vol;
      in.gram_x(base + t, base + t) = w_plus[c];
      in.gram_y(base + t, base + t) = w_minus[c];
    }
    const auto v = mesh.cell(c);
    const auto g = cell_gradients(mesh, c);
    for (int i = 0; i <= d; ++i) {
      const auto vi = static_cast<std::size_t>(v[i]);
      if (mesh.is_boundary_vertex(vi)) continue;
      for (int comp = 0; comp < d; ++comp) {
        const auto row = static_cast<Eigen::Index>(dofs.free_index(vi, comp));
        for (Eigen::Index t = 0; t < nt; ++t) {
          // eps(lambda_i e_comp) : E = (E g_i)[comp] for symmetric E.
          const auto& e = basis[static_cast<std::size_t>(t)];
          double pair = 0.0;
          for (int q = 0; q < d; ++q) pair += e[comp][q] * g[i][q];
          in.b(row, base + t) += vol * pair;
        }
      }
    }
  }
  in.c = in.b;
  in.gram_m = to_dense(assemble_form(dofs, {1.0, 0.0, 0.0}, w_plus));
  in.gram_q = to_dense(assemble_form(dofs, {1.0, 0.0, 0.0}, w_minus));
  return in;
}

InfSupReport weighted_pairing_demo(const Mesh& mesh, double s, const Point& center) {
  return theorem31_report(weighted_pairing_system(mesh, s, center));
}

namespace {

double smallest_pencil_eigenvalue_iterative(const SparseMatrix& e, const SparseMatrix& g) {
  const std::size_t n = e.rows();
  std::vector<double> x(n), gx(n), ex(n);
  // Fixed, non-symmetric start so every eigencomponent is present.
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.37 * std::sin(1.7 * static_cast<double>(i) + 0.3);
  double lambda = 0.0;
  CgOptions opts;
  opts.rel_tol = 1e-12;
  for (int it = 0; it < 1000; ++it) {
    g.multiply(x, gx);
    const auto solved = cg_solve(e, gx, opts);
    if (!solved.stats.converged) throw MatrixError("Korn inverse iteration: inner solve failed");
    x = solved.x;
    g.multiply(x, gx);
    e.multiply(x, ex);
    double xgx = 0.0;
    double xex = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      xgx += x[i] * gx[i];
      xex += x[i] * ex[i];
    }
    if (!(xgx > 0.0)) throw MatrixError("gradient form is singular");
    const double next = xex / xgx;
    const double scale = 1.0 / std::sqrt(xgx);
    for (double& xi : x) xi *= scale;
    if (it > 0 && std::abs(next - lambda) <= 1e-12 * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

}  // namespace

KornEstimate discrete_korn_constant(const Mesh& mesh, const std::optional<WeightSpec>& weight,
                                    std::size_t dense_limit) {
  const DofMap dofs(mesh);
  if (dofs.num_free() == 0) throw ArgumentError("Korn constant needs at least one free dof");
  std::vector<double> measure;
  if (weight) measure = cell_weight_integrals(mesh, *weight, 4);

  const SparseMatrix eps_form = assemble_form(dofs, {0.5, 0.5, 0.0}, measure);
  const SparseMatrix grad_form = assemble_form(dofs, {1.0, 0.0, 0.0}, measure);

  KornEstimate out;
  out.n_free = dofs.num_free();
  if (dofs.num_free() <= dense_limit) {
    try {
      out.lambda_min = dense_pencil_eigenvalues(to_dense(eps_form), to_dense(grad_form))(0);
    } catch (const FactorizationError&) {
      throw MatrixError("gradient form is singular");
    }
  } else {
    out.lambda_min = smallest_pencil_eigenvalue_iterative(eps_form, grad_form);
  }
  if (!(out.lambda_min > 0.0)) throw MatrixError("Korn pencil has a non-positive eigenvalue");
  out.constant = 1.0 / std::sqrt(out.lambda_min);
  return out;
}

}  // namespace elastopoint
