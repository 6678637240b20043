#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "elastopoint/assembly.hpp"
#include "elastopoint/mesh.hpp"
#include "elastopoint/solver.hpp"
#include "elastopoint/sparse.hpp"

namespace elastopoint {

/// Interpolation of coarse P1 functions onto the vertices of the once-refined
/// mesh (fine vertices x coarse vertices, scalar). Exact because the spaces are
/// nested. Throws ArgumentError unless fine has the same dimension and twice
/// the resolution of coarse.
SparseMatrix prolongation_operator(const Mesh& coarse, const Mesh& fine);

/// Nodal values of the coarse field (any number of components per vertex) at
/// the fine vertices.
std::vector<double> prolongate(const Mesh& coarse, std::span<const double> field, const Mesh& fine);

/// L2 distance between a level field and a reference field on a mesh
/// 2^k times finer: the level field is prolongated k times and the difference
/// measured with the consistent mass matrix of the reference mesh.
/// Throws ArgumentError when the resolutions are not related by a power of two.
double l2_error_nested(const Mesh& level_mesh, std::span<const double> level_field, const Mesh& ref_mesh,
                       std::span<const double> ref_field);

/// rate_i = log(e_{i-1}/e_i) / log(h_{i-1}/h_i). Throws DegenerateRateError for
/// a non-positive error and ArgumentError for bad lengths or mesh sizes.
std::vector<double> eoc(std::span<const double> errors, std::span<const double> hs);

struct SmoothForcing {
  VectorField force;
  // When set, errors are measured against it instead of a reference solve.
  std::optional<VectorField> exact;
  std::string description = "smooth";
};

using Forcing = std::variant<PointLoadSet, SmoothForcing>;

/// u = (phi, ..., phi) with phi = prod_a sin(pi x_a) and the body force
/// -div sigma(u) = -(mu lap u + (mu + lambda) grad div u) computed in closed form.
SmoothForcing manufactured_sine_solution(int dim, const LameParams& params);

std::string describe(const Forcing& forcing);

struct StudyOptions {
  int ref_extra_levels = 2;
  int quad_order = 4;
  CgOptions cg;
};

struct LevelSolution {
  Mesh mesh;
  std::vector<double> field;  // full nodal field, zero on the boundary
  std::size_t ndof = 0;
  SolveStats stats;
  double energy = 0.0;  // a(u_h, u_h) = <f, u_h>
};

/// Solves the Galerkin system on the n-mesh. Throws StudyError when CG does not
/// converge.
LevelSolution solve_level(int dim, int n, const LameParams& params, const Forcing& forcing,
                          const StudyOptions& options = {});

struct ConvergenceRow {
  int level = 0;
  int n = 0;
  double h = 0.0;
  std::size_t ndof = 0;
  double error_l2 = 0.0;
  std::optional<double> eoc;
};

struct ConvergenceReport {
  int dim = 2;
  LameParams params;
  std::string load_description;
  // Resolution of the reference solve, 0 when an exact solution was used.
  int reference_n = 0;
  std::vector<ConvergenceRow> rows;
};

/// Solves every level (n doubling between consecutive entries) and measures the
/// L2 error against the exact solution if the forcing provides one, otherwise
/// against a reference solve ref_extra_levels (>= 2) refinements past the
/// finest level.
ConvergenceReport run_convergence_study(int dim, std::span<const int> levels, const LameParams& params,
                                        const Forcing& forcing, const StudyOptions& options = {});

}  // namespace elastopoint
