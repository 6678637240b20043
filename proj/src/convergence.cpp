#include "elastopoint/convergence.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "elastopoint/errors.hpp"
#include "elastopoint/quadrature.hpp"

namespace elastopoint {

SparseMatrix prolongation_operator(const Mesh& coarse, const Mesh& fine) {
  if (coarse.dim() != fine.dim() || fine.n() != 2 * coarse.n()) {
    throw ArgumentError("meshes are not a nested pair (coarse n=" + std::to_string(coarse.n()) +
                        ", fine n=" + std::to_string(fine.n()) + ")");
  }
  std::vector<Triplet> t;
  t.reserve(fine.num_vertices() * static_cast<std::size_t>(coarse.dim() + 1));
  for (std::size_t v = 0; v < fine.num_vertices(); ++v) {
    const CellLocation loc = locate_point(coarse, fine.vertex(v));
    const auto cell = coarse.cell(loc.cell_index);
    for (std::size_t i = 0; i < cell.size(); ++i) {
      // Fine vertices sit on vertices or edge midpoints of coarse cells.
      const double w = std::round(2.0 * loc.barycentric[i]) / 2.0;
      if (std::abs(w - loc.barycentric[i]) > 1e-9) throw ArgumentError("fine vertex is not on a coarse edge");
      if (w != 0.0) t.push_back({v, static_cast<std::size_t>(cell[i]), w});
    }
  }
  return SparseMatrix::from_triplets(fine.num_vertices(), coarse.num_vertices(), std::move(t));
}

namespace {

std::vector<double> apply_componentwise(const SparseMatrix& p, std::span<const double> field, std::size_t nc) {
  std::vector<double> out(p.rows() * nc, 0.0);
  const auto rp = p.row_ptr();
  const auto ci = p.col_idx();
  const auto val = p.values();
  for (std::size_t r = 0; r < p.rows(); ++r)
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k)
      for (std::size_t c = 0; c < nc; ++c) out[r * nc + c] += val[k] * field[ci[k] * nc + c];
  return out;
}

}  // namespace

std::vector<double> prolongate(const Mesh& coarse, std::span<const double> field, const Mesh& fine) {
  if (field.empty() || field.size() % coarse.num_vertices() != 0) {
    throw ArgumentError("coarse field length does not match the coarse mesh");
  }
  return apply_componentwise(prolongation_operator(coarse, fine), field, field.size() / coarse.num_vertices());
}

double l2_error_nested(const Mesh& level_mesh, std::span<const double> level_field, const Mesh& ref_mesh,
                       std::span<const double> ref_field) {
  if (level_mesh.dim() != ref_mesh.dim()) throw ArgumentError("level and reference dimensions differ");
  int k = 0;
  for (int n = level_mesh.n(); n < ref_mesh.n(); n *= 2) ++k;
  if ((level_mesh.n() << k) != ref_mesh.n()) {
    throw ArgumentError("reference resolution " + std::to_string(ref_mesh.n()) + " is not a power-of-two refinement of " +
                        std::to_string(level_mesh.n()));
  }
  if (level_field.empty() || level_field.size() % level_mesh.num_vertices() != 0) {
    throw ArgumentError("level field length does not match the level mesh");
  }
  const std::size_t nc = level_field.size() / level_mesh.num_vertices();
  if (ref_field.size() != ref_mesh.num_vertices() * nc) throw ArgumentError("reference field length mismatch");

  std::vector<double> current(level_field.begin(), level_field.end());
  Mesh current_mesh = level_mesh;
  for (int step = 0; step < k; ++step) {
    Mesh next(current_mesh.dim(), current_mesh.n() * 2);
    current = prolongate(current_mesh, current, next);
    current_mesh = std::move(next);
  }
  for (std::size_t i = 0; i < current.size(); ++i) current[i] -= ref_field[i];
  return std::sqrt(mass_norm_sq(ref_mesh, current, static_cast<int>(nc)));
}

std::vector<double> eoc(std::span<const double> errors, std::span<const double> hs) {
  if (errors.size() != hs.size() || errors.size() < 2) {
    throw ArgumentError("eoc needs equally long error and mesh-size lists of length >= 2");
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0)) throw DegenerateRateError("non-positive error at index " + std::to_string(i));
    if (!(hs[i] > 0.0)) throw ArgumentError("non-positive mesh size at index " + std::to_string(i));
  }
  std::vector<double> rates;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (hs[i - 1] == hs[i]) throw ArgumentError("equal consecutive mesh sizes");
    rates.push_back(std::log(errors[i - 1] / errors[i]) / std::log(hs[i - 1] / hs[i]));
  }
  return rates;
}

SmoothForcing manufactured_sine_solution(int dim, const LameParams& params) {
  if (dim != 2 && dim != 3) throw ArgumentError("manufactured solution needs dim 2 or 3");
  params.validate();
  constexpr double pi = std::numbers::pi;
  SmoothForcing f;
  f.description = "manufactured sine";
  f.exact = [dim](const Point& x) {
    double phi = 1.0;
    for (int a = 0; a < dim; ++a) phi *= std::sin(pi * x[a]);
    Vec3 u{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) u[a] = phi;
    return u;
  };
  f.force = [dim, params](const Point& x) {
    std::array<double, 3> s{}, c{};
    for (int a = 0; a < dim; ++a) {
      s[a] = std::sin(pi * x[a]);
      c[a] = std::cos(pi * x[a]);
    }
    double phi = 1.0;
    for (int a = 0; a < dim; ++a) phi *= s[a];
    Vec3 out{0.0, 0.0, 0.0};
    for (int b = 0; b < dim; ++b) {
      // d_b div u = d_bb phi + sum_{a != b} d_ab phi
      double grad_div = -pi * pi * phi;
      for (int a = 0; a < dim; ++a) {
        if (a == b) continue;
        double mixed = pi * pi * c[a] * c[b];
        for (int e = 0; e < dim; ++e)
          if (e != a && e != b) mixed *= s[e];
        grad_div += mixed;
      }
      const double laplacian = -dim * pi * pi * phi;
      out[b] = -(params.mu * laplacian + (params.mu + params.lambda) * grad_div);
    }
    return out;
  };
  return f;
}

std::string describe(const Forcing& forcing) {
  if (const auto* p = std::get_if<PointLoadSet>(&forcing)) {
    return std::to_string(p->loads.size()) + " point load" + (p->loads.size() == 1 ? "" : "s");
  }
  return std::get<SmoothForcing>(forcing).description;
}

LevelSolution solve_level(int dim, int n, const LameParams& params, const Forcing& forcing,
                          const StudyOptions& options) {
  params.validate();
  LevelSolution sol{Mesh(dim, n), {}, 0, {}, 0.0};
  const DofMap dofs(sol.mesh);
  sol.ndof = dofs.num_free();
  std::vector<double> rhs;
  if (const auto* loads = std::get_if<PointLoadSet>(&forcing)) {
    loads->validate(dim);
    rhs = assemble_point_load(dofs, *loads);
  } else {
    rhs = assemble_smooth_load(dofs, std::get<SmoothForcing>(forcing).force, options.quad_order);
  }
  if (sol.ndof == 0) {
    sol.field.assign(dofs.num_total(), 0.0);
    sol.stats = {0, 0.0, true};
    return sol;
  }
  const SparseMatrix k = assemble_stiffness(dofs, params, StiffnessForm::kGradDiv);
  auto result = cg_solve(k, rhs, options.cg);
  sol.stats = result.stats;
  if (!result.stats.converged) {
    throw StudyError(n, "CG stopped after " + std::to_string(result.stats.iterations) +
                            " iterations at relative residual " + std::to_string(result.stats.final_relative_residual));
  }
  for (std::size_t i = 0; i < rhs.size(); ++i) sol.energy += rhs[i] * result.x[i];
  sol.field = dofs.expand(result.x);
  return sol;
}

namespace {

double l2_error_exact(const Mesh& mesh, std::span<const double> field, const VectorField& exact, int quad_order) {
  const int d = mesh.dim();
  const auto nc = static_cast<std::size_t>(d);
  const auto& rule = simplex_quadrature(d, quad_order);
  double total = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto v = mesh.cell(c);
    const double vol = mesh.cell_volume(c);
    for (const auto& q : rule) {
      Point x{0.0, 0.0, 0.0};
      Vec3 uh{0.0, 0.0, 0.0};
      for (int i = 0; i <= d; ++i) {
        const auto vi = static_cast<std::size_t>(v[i]);
        for (int a = 0; a < d; ++a) {
          x[a] += q.barycentric[i] * mesh.vertex(vi)[a];
          uh[a] += q.barycentric[i] * field[vi * nc + static_cast<std::size_t>(a)];
        }
      }
      const Vec3 u = exact(x);
      double e2 = 0.0;
      for (int a = 0; a < d; ++a) e2 += (u[a] - uh[a]) * (u[a] - uh[a]);
      total += q.weight * vol * e2;
    }
  }
  return std::sqrt(total);
}

}  // namespace

ConvergenceReport run_convergence_study(int dim, std::span<const int> levels, const LameParams& params,
                                        const Forcing& forcing, const StudyOptions& options) {
  if (levels.empty()) throw ArgumentError("convergence study needs at least one level");
  if (levels.front() < 1) throw ArgumentError("level resolutions must be positive");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] != 2 * levels[i - 1]) throw ArgumentError("levels must double from one entry to the next");
  }
  const auto* smooth = std::get_if<SmoothForcing>(&forcing);
  const bool use_exact = smooth != nullptr && smooth->exact.has_value();
  if (!use_exact && options.ref_extra_levels < 2) throw ArgumentError("reference must be at least 2 levels finer");

  ConvergenceReport report;
  report.dim = dim;
  report.params = params;
  report.load_description = describe(forcing);

  std::optional<LevelSolution> reference;
  if (!use_exact) {
    report.reference_n = levels.back() << options.ref_extra_levels;
    reference.emplace(solve_level(dim, report.reference_n, params, forcing, options));
  }

  std::vector<double> errors, hs;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const LevelSolution sol = solve_level(dim, levels[i], params, forcing, options);
    ConvergenceRow row;
    row.level = static_cast<int>(i);
    row.n = levels[i];
    row.h = sol.mesh.h();
    row.ndof = sol.ndof;
    row.error_l2 = use_exact ? l2_error_exact(sol.mesh, sol.field, *smooth->exact, options.quad_order)
                             : l2_error_nested(sol.mesh, sol.field, reference->mesh, reference->field);
    errors.push_back(row.error_l2);
    hs.push_back(row.h);
    if (i > 0) {
      const double e[2] = {errors[i - 1], errors[i]};
      const double h[2] = {hs[i - 1], hs[i]};
      row.eoc = eoc(e, h)[0];
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace elastopoint
