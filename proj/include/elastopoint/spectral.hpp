#pragma once

#include <cstddef>
#include <optional>

#include "elastopoint/mesh.hpp"
#include "elastopoint/solver.hpp"
#include "elastopoint/weights.hpp"

namespace elastopoint {

// Singular values at or below rank_tol * sigma_max count as zero.
inline constexpr double kDefaultRankTolerance = 1e-10;

/// Discrete inf-sup constant
///   inf_r sup_v B(v, r) / (|v|_Y |r|_M)
/// for a pairing matrix with pairing(i, j) = B(v_j, r_i): rows index the
/// infimum space M, columns the supremum space Y. Computed as the smallest
/// singular value of L_M^{-1} B L_Y^{-T} with G = L L^T.
///
/// Returns 0 when dim M > dim Y, and +infinity when M is empty (the condition
/// is vacuous). Throws ArgumentError if a Gram matrix is not SPD or sizes differ.
double discrete_infsup(const DenseMatrix& pairing, const DenseMatrix& gram_sup, const DenseMatrix& gram_inf);

/// Gram-orthonormal basis (columns) of { w : C w = 0 }, for a constraint
/// matrix with constraint(i, j) = C(w_j, q_i).
DenseMatrix kernel_basis(const DenseMatrix& constraint, const DenseMatrix& gram,
                         double rank_tol = kDefaultRankTolerance);

/// Constants of the generalized saddle point conditions for
///   A : X x Y,  B : Y x M,  C : X x Q.
/// Matrix conventions: a(i, j) = A(w_i, v_j), b(i, j) = B(v_j, r_i),
/// c(i, j) = C(w_j, q_i).
struct InfSupReport {
  double beta_b = 0.0;
  double beta_c = 0.0;
  // inf over ker C of sup over ker B.
  double alpha_a_kernel = 0.0;
  // inf over ker C of sup over all of Y; restricting the supremum can only
  // lower it, so alpha_a_kernel <= alpha_a_full.
  double alpha_a_full = 0.0;
  // Only v = 0 in ker B annihilates all of ker C under A.
  bool injective_on_kernels = false;
  std::size_t kernel_b_dim = 0;
  std::size_t kernel_c_dim = 0;
};

struct Theorem31Input {
  DenseMatrix a, b, c;
  DenseMatrix gram_x, gram_y, gram_m, gram_q;
};

InfSupReport theorem31_report(const Theorem31Input& in, double rank_tol = kDefaultRankTolerance);

/// Discrete version of the weighted tensor pairing a(S, T) = int S : T with
/// the constraint b1(z, T) = int eps(z) : T, under the weight r^{d s} about
/// `center` (r the distance to it):
///   X: cellwise-constant symmetric tensors, Gram int r^{ds} S : T
///   Y: the same tensors, Gram int r^{-ds} S : T
///   M: vector P1 fields vanishing on the boundary, Gram int r^{ds} grad z : grad z
///   Q: the same fields, Gram int r^{-ds} grad q : grad q
/// with B = b1 on Y x M and C = b1 on X x Q. Throws ArgumentError for |s| >= 1,
/// a center outside the open box or a mesh without interior vertices.
Theorem31Input weighted_pairing_system(const Mesh& mesh, double s, const Point& center);

InfSupReport weighted_pairing_demo(const Mesh& mesh, double s, const Point& center);

struct KornEstimate {
  double lambda_min = 0.0;  // smallest eigenvalue of the (eps-form, grad-form) pencil
  double constant = 0.0;    // lambda_min^{-1/2}
  std::size_t n_free = 0;
};

/// Discrete Korn constant on the zero-trace P1 space: the best C_h with
///   int w |grad v|^2 <= C_h^2 int w |eps(v)|^2.
/// Without a weight w = 1. Systems with more than `dense_limit` free dofs
/// use inverse iteration with CG instead of a dense pencil solve.
/// Throws ArgumentError when the mesh has no free dofs and MatrixError when
/// the gradient form is singular.
KornEstimate discrete_korn_constant(const Mesh& mesh, const std::optional<WeightSpec>& weight = std::nullopt,
                                    std::size_t dense_limit = 2000);

}  // namespace elastopoint
