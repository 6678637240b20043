#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "elastopoint/mesh.hpp"
#include "elastopoint/sparse.hpp"

namespace elastopoint {

struct LameParams {
  double mu = 1.0;
  double lambda = 1.0;

  // Throws ArgumentError unless both constants are strictly positive.
  void validate() const;
};

/// Which algebraic route builds the elasticity form.
///  kGradDiv: mu (grad u : grad v) + (mu + lambda) div u div v
///  kEpsDiv:  2 mu eps(u) : eps(v) + lambda div u div v
/// The two agree on fields vanishing on the boundary.
enum class StiffnessForm { kGradDiv, kEpsDiv };

/// Vector P1 degrees of freedom. Dof (vertex v, component c) is free unless v
/// is a boundary vertex; free dofs are numbered by (vertex, component).
class DofMap {
 public:
  static constexpr std::ptrdiff_t kConstrained = -1;

  explicit DofMap(const Mesh& mesh);

  const Mesh& mesh() const noexcept { return *mesh_; }
  int components() const noexcept { return mesh_->dim(); }
  std::size_t num_free() const noexcept { return n_free_; }
  std::size_t num_total() const noexcept { return free_index_.size(); }

  std::ptrdiff_t free_index(std::size_t vertex, int component) const {
    return free_index_[vertex * static_cast<std::size_t>(components()) + static_cast<std::size_t>(component)];
  }

  // Full nodal field (vertex-major, component-minor) with zeros on constrained dofs.
  std::vector<double> expand(std::span<const double> free_values) const;
  // Drops constrained entries of a full nodal vector.
  std::vector<double> restrict_to_free(std::span<const double> full) const;

 private:
  const Mesh* mesh_;
  std::vector<std::ptrdiff_t> free_index_;
  std::size_t n_free_ = 0;
};

DofMap build_dof_map(const Mesh& mesh);

/// Coefficients of the three cellwise-constant bilinear terms
///   grad u : grad v,  grad u : (grad v)^T,  div u div v.
struct FormCoefficients {
  double grad_grad = 0.0;
  double grad_transpose = 0.0;
  double div_div = 0.0;
};

FormCoefficients stiffness_coefficients(const LameParams& params, StiffnessForm form);

/// Assembles sum_T m_T * (element form) over free dofs, where m_T is
/// `cell_measure[T]` (or the cell volume when the span is empty). A weight
/// integral per cell turns this into the weighted version of the form.
/// Constrained rows and columns are dropped.
SparseMatrix assemble_form(const DofMap& dofs, const FormCoefficients& coeffs,
                           std::span<const double> cell_measure = {});

/// Stiffness matrix over free dofs. An empty matrix (0 x 0) is returned when
/// the mesh has no free dofs.
SparseMatrix assemble_stiffness(const DofMap& dofs, const LameParams& params, StiffnessForm form);

struct PointLoad {
  Point location{};
  Vec3 force{};
};

/// f = sum_k f_k delta_{x_k}; every x_k must lie strictly inside the box.
struct PointLoadSet {
  std::vector<PointLoad> loads;

  // Throws ValidationError for an empty set or a location not strictly interior.
  void validate(int dim) const;
};

/// Pairing <f, phi> for every dof before boundary elimination (vertex-major,
/// component-minor). Entry (i, c) collects f_k[c] * lambda_i(x_k).
std::vector<double> point_load_full(const Mesh& mesh, const PointLoadSet& loads);

/// Right-hand side over free dofs for a sum of point loads.
std::vector<double> assemble_point_load(const DofMap& dofs, const PointLoadSet& loads);

using VectorField = std::function<Vec3(const Point&)>;

/// Right-hand side over free dofs for a smooth body force, integrated cellwise
/// with the Gauss rule of the given order (1, 2 or 4).
std::vector<double> assemble_smooth_load(const DofMap& dofs, const VectorField& f, int quad_order);

/// Consistent P1 mass form applied to a full nodal field of `components`
/// values per vertex: returns sum over cells of integral |v_h|^2.
double mass_norm_sq(const Mesh& mesh, std::span<const double> field, int components);

}  // namespace elastopoint
