#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace elastopoint {

// Coordinates are stored with three slots; the trailing slot is zero in 2D.
using Point = std::array<double, 3>;
using Vec3 = std::array<double, 3>;

inline constexpr double kLocateTolerance = 1e-12;

/// Structured simplicial triangulation of the unit box (0,1)^dim.
///
/// Every grid cell of side 1/n is split into dim! simplices following the
/// Kuhn (Freudenthal) pattern: one simplex per permutation of the axes, all
/// sharing the main diagonal of the cell. In 2D this is the two-triangle split
/// along the (0,0)-(1,1) diagonal. The same split is used at every resolution,
/// so the mesh at 2n refines the mesh at n.
///
/// Vertex (i,j[,k]) has index i + (n+1) j [+ (n+1)^2 k]. Cells are ordered by
/// grid cell (x fastest) and then by permutation in lexicographic order.
/// Every cell is stored with positive orientation.
class Mesh {
 public:
  Mesh(int dim, int n);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double h() const noexcept { return h_; }

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_cells() const noexcept { return cells_.size() / static_cast<std::size_t>(dim_ + 1); }
  int vertices_per_cell() const noexcept { return dim_ + 1; }

  const Point& vertex(std::size_t i) const { return vertices_[i]; }
  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  std::span<const int> cell(std::size_t c) const;
  bool is_boundary_vertex(std::size_t i) const { return boundary_[i] != 0; }
  std::size_t num_boundary_vertices() const noexcept;

  double cell_volume(std::size_t c) const;
  double cell_signed_volume(std::size_t c) const;
  double cell_diameter(std::size_t c) const;
  double cell_inradius(std::size_t c) const;
  Point cell_barycenter(std::size_t c) const;

 private:
  int dim_;
  int n_;
  double h_;
  std::vector<Point> vertices_;
  std::vector<int> cells_;
  std::vector<char> boundary_;
};

struct CellLocation {
  std::size_t cell_index = 0;
  // Only the first dim+1 entries are meaningful.
  std::array<double, 4> barycentric{};
};

Mesh build_unit_box_mesh(int dim, int n);

// Barycentric coordinates of x with respect to cell c (no containment check).
std::array<double, 4> barycentric_coordinates(const Mesh& mesh, std::size_t c, const Point& x);

/// Finds the lowest-index cell containing x (barycentrics >= -kLocateTolerance).
/// Throws DomainError if x lies outside the closed box.
CellLocation locate_point(const Mesh& mesh, const Point& x);

/// Gradients of the barycentric coordinates of the simplex with the given
/// dim+1 vertices; entry i belongs to vertex i.
std::array<Vec3, 4> simplex_gradients(int dim, std::span<const Point> vertices);

/// Gradients of the barycentric basis functions on cell c; entry i is the
/// gradient of the function equal to one at the cell's i-th vertex.
std::array<Vec3, 4> cell_gradients(const Mesh& mesh, std::size_t cell_index);

}  // namespace elastopoint
