#include "elastopoint/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "elastopoint/errors.hpp"
#include "elastopoint/quadrature.hpp"

namespace elastopoint {

void LameParams::validate() const {
  if (!(mu > 0.0) || !(lambda > 0.0)) {
    throw ArgumentError("Lame constants must be positive (mu=" + std::to_string(mu) +
                        ", lambda=" + std::to_string(lambda) + ")");
  }
}

DofMap::DofMap(const Mesh& mesh) : mesh_(&mesh) {
  const auto d = static_cast<std::size_t>(mesh.dim());
  free_index_.assign(mesh.num_vertices() * d, kConstrained);
  std::ptrdiff_t next = 0;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.is_boundary_vertex(v)) continue;
    for (std::size_t c = 0; c < d; ++c) free_index_[v * d + c] = next++;
  }
  n_free_ = static_cast<std::size_t>(next);
}

std::vector<double> DofMap::expand(std::span<const double> free_values) const {
  if (free_values.size() != n_free_) throw ArgumentError("free vector has wrong length");
  std::vector<double> full(free_index_.size(), 0.0);
  for (std::size_t k = 0; k < free_index_.size(); ++k)
    if (free_index_[k] != kConstrained) full[k] = free_values[static_cast<std::size_t>(free_index_[k])];
  return full;
}

std::vector<double> DofMap::restrict_to_free(std::span<const double> full) const {
  if (full.size() != free_index_.size()) throw ArgumentError("nodal vector has wrong length");
  std::vector<double> out(n_free_, 0.0);
  for (std::size_t k = 0; k < free_index_.size(); ++k)
    if (free_index_[k] != kConstrained) out[static_cast<std::size_t>(free_index_[k])] = full[k];
  return out;
}

DofMap build_dof_map(const Mesh& mesh) { return DofMap(mesh); }

FormCoefficients stiffness_coefficients(const LameParams& params, StiffnessForm form) {
  params.validate();
  if (form == StiffnessForm::kGradDiv) return {params.mu, 0.0, params.mu + params.lambda};
  // 2 mu eps(u):eps(v) = mu grad u : grad v + mu grad u : (grad v)^T
  return {params.mu, params.mu, params.lambda};
}

namespace {

// Sorted vertex neighbourhoods (including the vertex itself), free vertices only.
std::vector<std::vector<std::size_t>> free_vertex_graph(const Mesh& mesh) {
  std::vector<std::vector<std::size_t>> adj(mesh.num_vertices());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto v = mesh.cell(c);
    for (int a : v) {
      if (mesh.is_boundary_vertex(static_cast<std::size_t>(a))) continue;
      for (int b : v)
        if (!mesh.is_boundary_vertex(static_cast<std::size_t>(b))) adj[a].push_back(static_cast<std::size_t>(b));
    }
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

}  // namespace

SparseMatrix assemble_form(const DofMap& dofs, const FormCoefficients& coeffs, std::span<const double> cell_measure) {
  const Mesh& mesh = dofs.mesh();
  const int d = mesh.dim();
  if (!cell_measure.empty() && cell_measure.size() != mesh.num_cells()) {
    throw ArgumentError("cell measure has " + std::to_string(cell_measure.size()) + " entries for " +
                        std::to_string(mesh.num_cells()) + " cells");
  }
  if (dofs.num_free() == 0) return SparseMatrix(0, 0);

  const auto graph = free_vertex_graph(mesh);
  std::vector<std::vector<std::size_t>> pattern(dofs.num_free());
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.is_boundary_vertex(v)) continue;
    std::vector<std::size_t> cols;
    cols.reserve(graph[v].size() * static_cast<std::size_t>(d));
    for (std::size_t w : graph[v])
      for (int b = 0; b < d; ++b) cols.push_back(static_cast<std::size_t>(dofs.free_index(w, b)));
    for (int a = 0; a < d; ++a) pattern[static_cast<std::size_t>(dofs.free_index(v, a))] = cols;
  }
  SparseMatrix k = SparseMatrix::from_pattern(dofs.num_free(), pattern);
  pattern.clear();

  const auto row_ptr = k.row_ptr();
  const auto col_idx = k.col_idx();
  auto values = k.values();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto v = mesh.cell(c);
    const double m = cell_measure.empty() ? mesh.cell_volume(c) : cell_measure[c];
    const auto g = cell_gradients(mesh, c);
    for (int i = 0; i <= d; ++i) {
      if (mesh.is_boundary_vertex(static_cast<std::size_t>(v[i]))) continue;
      for (int j = 0; j <= d; ++j) {
        if (mesh.is_boundary_vertex(static_cast<std::size_t>(v[j]))) continue;
        const double gij = g[i][0] * g[j][0] + g[i][1] * g[j][1] + g[i][2] * g[j][2];
        const auto first_col = static_cast<std::size_t>(dofs.free_index(static_cast<std::size_t>(v[j]), 0));
        for (int a = 0; a < d; ++a) {
          const auto row = static_cast<std::size_t>(dofs.free_index(static_cast<std::size_t>(v[i]), a));
          const auto begin = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[row]);
          const auto end = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[row + 1]);
          const auto pos = static_cast<std::size_t>(std::lower_bound(begin, end, first_col) - col_idx.begin());
          for (int b = 0; b < d; ++b) {
            double e = coeffs.grad_transpose * g[i][b] * g[j][a] + coeffs.div_div * g[i][a] * g[j][b];
            if (a == b) e += coeffs.grad_grad * gij;
            values[pos + static_cast<std::size_t>(b)] += m * e;
          }
        }
      }
    }
  }
  return k;
}

SparseMatrix assemble_stiffness(const DofMap& dofs, const LameParams& params, StiffnessForm form) {
  return assemble_form(dofs, stiffness_coefficients(params, form));
}

void PointLoadSet::validate(int dim) const {
  if (loads.empty()) throw ValidationError("point load set is empty");
  for (std::size_t k = 0; k < loads.size(); ++k) {
    for (int a = 0; a < dim; ++a) {
      const double x = loads[k].location[a];
      if (!(x > 0.0 && x < 1.0)) {
        throw ValidationError("load " + std::to_string(k) + " is not strictly inside the unit box");
      }
    }
  }
}

std::vector<double> point_load_full(const Mesh& mesh, const PointLoadSet& loads) {
  const auto d = static_cast<std::size_t>(mesh.dim());
  std::vector<double> full(mesh.num_vertices() * d, 0.0);
  for (const auto& load : loads.loads) {
    const CellLocation loc = locate_point(mesh, load.location);
    const auto v = mesh.cell(loc.cell_index);
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t c = 0; c < d; ++c)
        full[static_cast<std::size_t>(v[i]) * d + c] += load.force[c] * loc.barycentric[i];
  }
  return full;
}

std::vector<double> assemble_point_load(const DofMap& dofs, const PointLoadSet& loads) {
  return dofs.restrict_to_free(point_load_full(dofs.mesh(), loads));
}

std::vector<double> assemble_smooth_load(const DofMap& dofs, const VectorField& f, int quad_order) {
  const Mesh& mesh = dofs.mesh();
  const int d = mesh.dim();
  const auto& rule = simplex_quadrature(d, quad_order);
  std::vector<double> full(dofs.num_total(), 0.0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto v = mesh.cell(c);
    const double vol = mesh.cell_volume(c);
    for (const auto& q : rule) {
      Point x{0.0, 0.0, 0.0};
      for (int i = 0; i <= d; ++i)
        for (int a = 0; a < 3; ++a) x[a] += q.barycentric[i] * mesh.vertex(v[i])[a];
      const Vec3 fx = f(x);
      for (int i = 0; i <= d; ++i)
        for (int a = 0; a < d; ++a)
          full[static_cast<std::size_t>(v[i]) * d + a] += q.weight * vol * fx[a] * q.barycentric[i];
    }
  }
  return dofs.restrict_to_free(full);
}

double mass_norm_sq(const Mesh& mesh, std::span<const double> field, int components) {
  const auto nc = static_cast<std::size_t>(components);
  if (field.size() != mesh.num_vertices() * nc) throw ArgumentError("field length does not match mesh");
  const int d = mesh.dim();
  const double denom = (d + 1.0) * (d + 2.0);
  double total = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto v = mesh.cell(c);
    const double vol = mesh.cell_volume(c);
    double cell_sum = 0.0;
    for (std::size_t comp = 0; comp < nc; ++comp) {
      double s = 0.0;
      double sq = 0.0;
      for (int i = 0; i <= d; ++i) {
        const double u = field[static_cast<std::size_t>(v[i]) * nc + comp];
        s += u;
        sq += u * u;
      }
      // sum_ij u_i u_j (1 + delta_ij) = (sum u)^2 + sum u^2
      cell_sum += s * s + sq;
    }
    total += vol * cell_sum / denom;
  }
  return total;
}

}  // namespace elastopoint
