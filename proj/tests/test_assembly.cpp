#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "elastopoint/assembly.hpp"
#include "elastopoint/errors.hpp"
#include "elastopoint/solver.hpp"
#include "oracles.hpp"

namespace elastopoint {
namespace {

using Tensor = std::array<std::array<double, 3>, 3>;

// Dense reference assembly written from the tensor definitions: every basis
// function lambda_i e_a gets an explicit gradient matrix, strain and trace.
oracle::Matrix dense_elasticity(const Mesh& mesh, double mu, double lambda, bool eps_form) {
  const DofMap dofs(mesh);
  const int d = mesh.dim();
  oracle::Matrix k = oracle::zeros(dofs.num_free(), dofs.num_free());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto v = mesh.cell(c);
    const auto g = cell_gradients(mesh, c);
    const double vol = mesh.cell_volume(c);
    auto grad = [&](int i, int a) {
      Tensor t{};
      for (int q = 0; q < d; ++q) t[a][q] = g[i][q];
      return t;
    };
    for (int i = 0; i <= d; ++i)
      for (int a = 0; a < d; ++a) {
        const auto r = dofs.free_index(v[i], a);
        if (r < 0) continue;
        for (int j = 0; j <= d; ++j)
          for (int b = 0; b < d; ++b) {
            const auto s = dofs.free_index(v[j], b);
            if (s < 0) continue;
            const Tensor gu = grad(i, a), gv = grad(j, b);
            double e = 0.0, tr_u = 0.0, tr_v = 0.0;
            for (int p = 0; p < 3; ++p) {
              tr_u += gu[p][p];
              tr_v += gv[p][p];
              for (int q = 0; q < 3; ++q) {
                if (eps_form) {
                  const double eu = 0.5 * (gu[p][q] + gu[q][p]);
                  const double ev = 0.5 * (gv[p][q] + gv[q][p]);
                  e += 2.0 * mu * eu * ev;
                } else {
                  e += mu * gu[p][q] * gv[p][q];
                }
              }
            }
            e += (eps_form ? lambda : mu + lambda) * tr_u * tr_v;
            k[r][s] += vol * e;
          }
      }
  }
  return k;
}

double max_abs_diff(const DenseMatrix& a, const oracle::Matrix& b) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b[i][j]));
  return m;
}

TEST(DofMap, FreeCounts) {
  const Mesh m21(2, 1), m22(2, 2), m32(3, 2);
  EXPECT_EQ(build_dof_map(m21).num_free(), 0u);
  EXPECT_EQ(build_dof_map(m22).num_free(), 2u);
  EXPECT_EQ(build_dof_map(m32).num_free(), 3u);
  const Mesh m(3, 4);
  const DofMap dofs(m);
  EXPECT_EQ(dofs.num_free(), 3u * 27u);
  // Ordered by (vertex, component).
  std::ptrdiff_t last = -1;
  for (std::size_t v = 0; v < m.num_vertices(); ++v)
    for (int c = 0; c < 3; ++c) {
      const auto f = dofs.free_index(v, c);
      EXPECT_EQ(f == DofMap::kConstrained, m.is_boundary_vertex(v));
      if (f != DofMap::kConstrained) {
        EXPECT_EQ(f, last + 1);
        last = f;
      }
    }
}

TEST(Stiffness, EmptySystemWhenNoFreeDofs) {
  const Mesh m(2, 1);
  const auto k = assemble_stiffness(DofMap(m), {1.0, 1.0}, StiffnessForm::kGradDiv);
  EXPECT_EQ(k.rows(), 0u);
  EXPECT_EQ(k.nnz(), 0u);
}

TEST(Stiffness, RejectsNonPositiveLame) {
  const Mesh m(2, 2);
  EXPECT_THROW(assemble_stiffness(DofMap(m), {0.0, 1.0}, StiffnessForm::kGradDiv), ArgumentError);
  EXPECT_THROW(assemble_stiffness(DofMap(m), {1.0, -1.0}, StiffnessForm::kEpsDiv), ArgumentError);
}

TEST(Stiffness, SymmetricForBothForms) {
  for (int dim : {2, 3}) {
    const Mesh m(dim, dim == 2 ? 5 : 3);
    const DofMap dofs(m);
    for (auto form : {StiffnessForm::kGradDiv, StiffnessForm::kEpsDiv}) {
      const auto k = assemble_stiffness(dofs, {1.3, 2.1}, form);
      EXPECT_LE(k.asymmetry(), 1e-12 * k.max_abs());
    }
  }
}

TEST(Stiffness, PureShearDiagonalPositive) {
  // mu = 1, lambda = 0: coefficients of the grad-div route written out directly.
  const Mesh m(2, 2);
  const auto k = assemble_form(DofMap(m), {1.0, 0.0, 1.0});
  for (std::size_t i = 0; i < k.rows(); ++i) EXPECT_GT(k.diagonal(i), 0.0);
}

TEST(Stiffness, MatchesDenseReferenceAndTransformIdentity) {
  for (int dim : {2, 3}) {
    const Mesh m(dim, dim == 2 ? 4 : 3);
    const DofMap dofs(m);
    for (auto [mu, lambda] : {std::pair{1.0, 1.0}, {1.0, 10.0}, {2.0, 0.5}}) {
      const auto grad_div = to_dense(assemble_stiffness(dofs, {mu, lambda}, StiffnessForm::kGradDiv));
      const auto eps_div = to_dense(assemble_stiffness(dofs, {mu, lambda}, StiffnessForm::kEpsDiv));
      EXPECT_LE(max_abs_diff(grad_div, dense_elasticity(m, mu, lambda, false)), 1e-12);
      EXPECT_LE(max_abs_diff(eps_div, dense_elasticity(m, mu, lambda, true)), 1e-12);
      EXPECT_LE((grad_div - eps_div).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Stiffness, PositiveDefinite) {
  for (int dim : {2, 3}) {
    const Mesh m(dim, dim == 2 ? 8 : 4);
    const DofMap dofs(m);
    ASSERT_LE(dofs.num_free(), 300u);
    for (auto form : {StiffnessForm::kGradDiv, StiffnessForm::kEpsDiv}) {
      const auto dense = to_dense(assemble_stiffness(dofs, {1.0, 1.0}, form));
      oracle::Matrix k = oracle::zeros(dense.rows(), dense.cols());
      for (Eigen::Index i = 0; i < dense.rows(); ++i)
        for (Eigen::Index j = 0; j < dense.cols(); ++j) k[i][j] = dense(i, j);
      EXPECT_GT(oracle::jacobi_eigen(k).values.front(), 0.0);
    }
  }
}

TEST(Stiffness, LinearInLameConstants) {
  const Mesh m(2, 6);
  const DofMap dofs(m);
  const auto base = assemble_stiffness(dofs, {0.7, 1.9}, StiffnessForm::kEpsDiv);
  const auto scaled = assemble_stiffness(dofs, {0.7 * 3.5, 1.9 * 3.5}, StiffnessForm::kEpsDiv);
  ASSERT_EQ(base.nnz(), scaled.nnz());
  for (std::size_t k = 0; k < base.nnz(); ++k)
    EXPECT_NEAR(scaled.values()[k], 3.5 * base.values()[k], 1e-12 * scaled.max_abs());
}

TEST(PointLoad, BarycenterSplitsInThirds) {
  const Mesh m(2, 4);
  // Pick a cell whose vertices are all interior.
  std::size_t cell = m.num_cells();
  for (std::size_t c = 0; c < m.num_cells() && cell == m.num_cells(); ++c) {
    bool interior = true;
    for (int v : m.cell(c)) interior = interior && !m.is_boundary_vertex(v);
    if (interior) cell = c;
  }
  ASSERT_LT(cell, m.num_cells());
  const DofMap dofs(m);
  PointLoadSet loads{{{m.cell_barycenter(cell), {1.0, 0.0, 0.0}}}};
  const auto rhs = assemble_point_load(dofs, loads);
  double total = 0.0;
  for (int v : m.cell(cell)) {
    EXPECT_NEAR(rhs[dofs.free_index(v, 0)], 1.0 / 3.0, 1e-14);
    EXPECT_EQ(rhs[dofs.free_index(v, 1)], 0.0);
    total += rhs[dofs.free_index(v, 0)];
  }
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(PointLoad, VertexAndEdgeMidpoint) {
  const Mesh m(3, 4);
  const DofMap dofs(m);
  const Point center{0.5, 0.5, 0.5};
  const auto at_vertex = assemble_point_load(dofs, {{{center, {1.0, -2.0, 3.0}}}});
  std::size_t vc = 0;
  for (std::size_t v = 0; v < m.num_vertices(); ++v)
    if (m.vertex(v) == center) vc = v;
  for (int c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(at_vertex[dofs.free_index(vc, c)], c == 0 ? 1.0 : (c == 1 ? -2.0 : 3.0));
  double others = 0.0;
  for (double x : at_vertex) others += std::abs(x);
  EXPECT_DOUBLE_EQ(others, 6.0);

  // Midpoint of the x-edge between (0.5,0.5,0.5) and (0.75,0.5,0.5).
  const auto mid = assemble_point_load(dofs, {{{{0.625, 0.5, 0.5}, {0.0, 0.0, 2.0}}}});
  std::size_t vr = 0;
  for (std::size_t v = 0; v < m.num_vertices(); ++v)
    if (m.vertex(v) == Point{0.75, 0.5, 0.5}) vr = v;
  EXPECT_NEAR(mid[dofs.free_index(vc, 2)], 1.0, 1e-14);
  EXPECT_NEAR(mid[dofs.free_index(vr, 2)], 1.0, 1e-14);
}

TEST(PointLoad, PartitionOfUnityBeforeElimination) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.01, 0.99), f(-2.0, 2.0);
  for (int dim : {2, 3}) {
    const Mesh m(dim, 5);
    PointLoadSet loads;
    Vec3 expected{0, 0, 0};
    for (int k = 0; k < 6; ++k) {
      PointLoad l;
      for (int a = 0; a < dim; ++a) {
        l.location[a] = u(rng);
        l.force[a] = f(rng);
        expected[a] += l.force[a];
      }
      loads.loads.push_back(l);
    }
    const auto full = point_load_full(m, loads);
    for (int a = 0; a < dim; ++a) {
      double s = 0.0;
      for (std::size_t v = 0; v < m.num_vertices(); ++v) s += full[v * dim + a];
      EXPECT_NEAR(s, expected[a], 1e-13);
    }
  }
}

TEST(PointLoad, Validation) {
  PointLoadSet empty;
  EXPECT_THROW(empty.validate(2), ValidationError);
  PointLoadSet boundary{{{{1.0, 0.5, 0.0}, {1.0, 0.0, 0.0}}}};
  EXPECT_THROW(boundary.validate(2), ValidationError);
  const Mesh m(2, 2);
  PointLoadSet outside{{{{1.5, 0.5, 0.0}, {1.0, 0.0, 0.0}}}};
  EXPECT_THROW(point_load_full(m, outside), DomainError);
}

TEST(SmoothLoad, ZeroForceAndBadOrder) {
  const Mesh m(2, 3);
  const DofMap dofs(m);
  const auto zero = assemble_smooth_load(dofs, [](const Point&) { return Vec3{0, 0, 0}; }, 2);
  for (double x : zero) EXPECT_EQ(x, 0.0);
  EXPECT_THROW(assemble_smooth_load(dofs, [](const Point&) { return Vec3{0, 0, 0}; }, 3), ArgumentError);
}

TEST(SmoothLoad, ConstantForceGivesPatchVolume) {
  // Interior vertex patches: 6 triangles of area 1/(2n^2) in 2D and 24
  // tetrahedra of volume 1/(6n^3) in 3D, so int phi_i = 1/n^d.
  for (int dim : {2, 3}) {
    const int n = dim == 2 ? 6 : 4;
    const Mesh m(dim, n);
    const DofMap dofs(m);
    const auto one = [](const Point&) { return Vec3{1, 1, 1}; };
    const auto q1 = assemble_smooth_load(dofs, one, 1);
    const auto q4 = assemble_smooth_load(dofs, one, 4);
    for (std::size_t i = 0; i < q1.size(); ++i) {
      EXPECT_NEAR(q1[i], std::pow(1.0 / n, dim), 1e-15);
      EXPECT_NEAR(q4[i], q1[i], 1e-15);
    }
  }
}

TEST(SmoothLoad, LinearForceOrderTwoMatchesOrderFour) {
  for (int dim : {2, 3}) {
    const Mesh m(dim, 4);
    const DofMap dofs(m);
    const auto lin = [](const Point& x) { return Vec3{1.0 + 2.0 * x[0] - x[1], 3.0 * x[1] + x[2], -x[0] + 0.5}; };
    const auto q2 = assemble_smooth_load(dofs, lin, 2);
    const auto q4 = assemble_smooth_load(dofs, lin, 4);
    for (std::size_t i = 0; i < q2.size(); ++i) EXPECT_NEAR(q2[i], q4[i], 1e-13);
  }
}

TEST(MassNorm, ConstantFieldHasUnitNorm) {
  for (int dim : {2, 3}) {
    const Mesh m(dim, 3);
    std::vector<double> field(m.num_vertices() * dim, 0.0);
    for (std::size_t v = 0; v < m.num_vertices(); ++v) field[v * dim] = 2.5;
    EXPECT_NEAR(mass_norm_sq(m, field, dim), 6.25, 1e-12);
  }
}

}  // namespace
}  // namespace elastopoint
