#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "elastopoint/assembly.hpp"
#include "elastopoint/errors.hpp"
#include "elastopoint/solver.hpp"
#include "elastopoint/sparse.hpp"
#include "oracles.hpp"

namespace elastopoint {
namespace {

SparseMatrix from_dense(const oracle::Matrix& m) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j)
      if (m[i][j] != 0.0) t.push_back({i, j, m[i][j]});
  return SparseMatrix::from_triplets(m.size(), m.size(), std::move(t));
}

DenseMatrix eigen_of(const oracle::Matrix& m) {
  DenseMatrix out(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = m[i][j];
  return out;
}

TEST(Sparse, TripletsSumDuplicatesAndTranspose) {
  const auto a = SparseMatrix::from_triplets(2, 3, {{0, 2, 1.0}, {1, 0, 2.0}, {0, 2, 0.5}, {0, 0, -1.0}});
  EXPECT_EQ(a.nnz(), 3u);
  EXPECT_DOUBLE_EQ(a.at(0, 2), 1.5);
  EXPECT_DOUBLE_EQ(a.at(1, 1), 0.0);
  const auto t = a.transpose();
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_DOUBLE_EQ(t.at(2, 0), 1.5);
  EXPECT_DOUBLE_EQ(t.at(0, 1), 2.0);
  std::vector<double> y(2);
  a.multiply(std::vector<double>{1.0, 2.0, 3.0}, y);
  EXPECT_DOUBLE_EQ(y[0], 3.5);
  EXPECT_DOUBLE_EQ(y[1], 2.0);
}

TEST(Sparse, ThreadedProductIsBitIdentical) {
  const Mesh m(3, 14);
  const auto k = assemble_stiffness(DofMap(m), {1.0, 3.0}, StiffnessForm::kGradDiv);
  ASSERT_GE(k.rows(), 4096u);
  std::vector<double> x(k.rows());
  std::mt19937 rng(3);
  std::normal_distribution<double> nd;
  for (double& v : x) v = nd(rng);
  std::vector<double> y1(k.rows()), y4(k.rows());
  k.multiply(x, y1, 1);
  k.multiply(x, y4, 4);
  EXPECT_EQ(y1, y4);
}

TEST(Cg, IdentityConvergesImmediately) {
  const auto a = from_dense(oracle::identity(5));
  const std::vector<double> b{1, -2, 3, 0.5, 4};
  const auto r = cg_solve(a, b);
  EXPECT_TRUE(r.stats.converged);
  EXPECT_LE(r.stats.iterations, 1);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(r.x[i], b[i], 1e-14);
}

TEST(Cg, TwoByTwo) {
  const auto a = from_dense({{2.0, 1.0}, {1.0, 2.0}});
  const auto r = cg_solve(a, std::vector<double>{1.0, 1.0});
  EXPECT_TRUE(r.stats.converged);
  EXPECT_NEAR(r.x[0], 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(r.x[1], 1.0 / 3.0, 1e-10);
}

TEST(Cg, ZeroRightHandSide) {
  const auto a = from_dense({{2.0, 1.0}, {1.0, 2.0}});
  const auto r = cg_solve(a, std::vector<double>{0.0, 0.0});
  EXPECT_TRUE(r.stats.converged);
  EXPECT_EQ(r.stats.iterations, 0);
  EXPECT_EQ(r.x[0], 0.0);
  EXPECT_EQ(r.x[1], 0.0);
}

TEST(Cg, RejectsNonPositiveDiagonal) {
  EXPECT_THROW(cg_solve(from_dense({{0.0, 1.0}, {1.0, 2.0}}), std::vector<double>{1.0, 1.0}), MatrixError);
  EXPECT_THROW(cg_solve(from_dense({{-1.0, 0.0}, {0.0, 2.0}}), std::vector<double>{1.0, 1.0}), MatrixError);
}

TEST(Cg, ReportsNonConvergenceInsteadOfThrowing) {
  const Mesh m(2, 16);
  const auto k = assemble_stiffness(DofMap(m), {1.0, 1.0}, StiffnessForm::kGradDiv);
  std::vector<double> b(k.rows(), 1.0);
  CgOptions opt;
  opt.max_iter = 2;
  const auto r = cg_solve(k, b, opt);
  EXPECT_FALSE(r.stats.converged);
  EXPECT_EQ(r.stats.iterations, 2);
  EXPECT_GT(r.stats.final_relative_residual, 1e-10);
}

TEST(Cg, DefaultIterationCap) {
  EXPECT_EQ(default_max_iterations(100), 400);
  EXPECT_EQ(default_max_iterations(0), 200);
}

// The energy error of CG iterates decreases monotonically; compared against a
// dense solve of the same system.
TEST(Cg, EnergyErrorMonotoneAndMatchesDenseSolve) {
  const Mesh m(2, 8);
  const auto k = assemble_stiffness(DofMap(m), {1.0, 5.0}, StiffnessForm::kEpsDiv);
  std::vector<double> b(k.rows());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::sin(0.7 * static_cast<double>(i)) + 0.1;
  const DenseMatrix kd = to_dense(k);
  const DenseVector bd = Eigen::Map<const DenseVector>(b.data(), b.size());
  const DenseVector exact = kd.llt().solve(bd);

  std::vector<double> energy;
  CgOptions opt;
  opt.on_iterate = [&](int, std::span<const double> x) {
    const DenseVector e = Eigen::Map<const DenseVector>(x.data(), x.size()) - exact;
    energy.push_back(e.dot(kd * e));
  };
  const auto r = cg_solve(k, b, opt);
  ASSERT_TRUE(r.stats.converged);
  ASSERT_GE(energy.size(), 2u);
  for (std::size_t i = 1; i < energy.size(); ++i) EXPECT_LE(energy[i], energy[i - 1] * (1.0 + 1e-12) + 1e-28);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(r.x[i], exact[i], 1e-8 * exact.cwiseAbs().maxCoeff());
  EXPECT_LE(r.stats.final_relative_residual, 1e-10);
}

TEST(DenseEig, Examples) {
  DenseMatrix d(3, 3);
  d << 3, 0, 0, 0, 1, 0, 0, 0, 2;
  const auto e = dense_sym_eig(d);
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 2.0, 1e-14);
  EXPECT_NEAR(e.values[2], 3.0, 1e-14);

  DenseMatrix p(2, 2);
  p << 2, 1, 1, 2;
  const auto ep = dense_sym_eig(p);
  EXPECT_NEAR(ep.values[0], 1.0, 1e-14);
  EXPECT_NEAR(ep.values[1], 3.0, 1e-14);

  DenseMatrix bad(2, 2);
  bad << 1, 2, 0, 1;
  EXPECT_THROW(dense_sym_eig(bad), ArgumentError);
}

TEST(DenseEig, ReconstructsRandomSymmetric) {
  std::mt19937 rng(11);
  for (int n : {1, 4, 9, 20}) {
    const auto g = oracle::random_spd(rng, n);
    const DenseMatrix m = eigen_of(g);
    const auto e = dense_sym_eig(m);
    const DenseMatrix back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LE((back - m).cwiseAbs().maxCoeff(), 1e-12 * m.cwiseAbs().maxCoeff());
    const auto ref = oracle::jacobi_eigen(g);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(e.values[i], ref.values[i], 1e-11 * ref.values.back());
  }
}

TEST(DenseCholesky, Examples) {
  DenseMatrix m(2, 2);
  m << 4, 2, 2, 5;
  const DenseMatrix l = dense_cholesky(m);
  EXPECT_NEAR(l(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(l(1, 0), 1.0, 1e-15);
  EXPECT_NEAR(l(1, 1), 2.0, 1e-15);
  EXPECT_EQ(l(0, 1), 0.0);

  DenseMatrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  EXPECT_THROW(dense_cholesky(indefinite), FactorizationError);

  std::mt19937 rng(5);
  const DenseMatrix g = eigen_of(oracle::random_spd(rng, 12));
  const DenseMatrix lg = dense_cholesky(g);
  EXPECT_LE((lg * lg.transpose() - g).cwiseAbs().maxCoeff(), 1e-12 * g.cwiseAbs().maxCoeff());
}

TEST(DensePencil, MatchesWhitenedOracle) {
  std::mt19937 rng(21);
  const auto e = oracle::random_spd(rng, 7);
  const auto g = oracle::random_spd(rng, 7);
  const auto gi = oracle::inverse_sqrt(g);
  const auto ref = oracle::jacobi_eigen(oracle::multiply(oracle::multiply(gi, e), gi));
  const auto vals = dense_pencil_eigenvalues(eigen_of(e), eigen_of(g));
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(vals[i], ref.values[i], 1e-9 * ref.values.back());
}

}  // namespace
}  // namespace elastopoint
