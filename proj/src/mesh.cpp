#include "elastopoint/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "elastopoint/errors.hpp"

namespace elastopoint {
namespace {

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

Vec3 sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

double signed_volume(int dim, std::span<const Point* const> p) {
  if (dim == 2) {
    const Vec3 a = sub(*p[1], *p[0]);
    const Vec3 b = sub(*p[2], *p[0]);
    return 0.5 * (a[0] * b[1] - a[1] * b[0]);
  }
  const Vec3 a = sub(*p[1], *p[0]);
  const Vec3 b = sub(*p[2], *p[0]);
  const Vec3 c = sub(*p[3], *p[0]);
  const Vec3 axb = cross(a, b);
  return (axb[0] * c[0] + axb[1] * c[1] + axb[2] * c[2]) / 6.0;
}

// Axis permutations in lexicographic order.
std::vector<std::array<int, 3>> axis_permutations(int dim) {
  std::array<int, 3> p{0, 1, 2};
  std::vector<std::array<int, 3>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.begin() + dim));
  return out;
}

}  // namespace

Mesh::Mesh(int dim, int n) : dim_(dim), n_(n) {
  if (dim != 2 && dim != 3) throw ArgumentError("mesh dimension must be 2 or 3, got " + std::to_string(dim));
  if (n < 1) throw ArgumentError("cells per side must be positive, got " + std::to_string(n));
  h_ = std::sqrt(static_cast<double>(dim)) / n;

  const int np = n + 1;
  const int nz = dim == 3 ? np : 1;
  vertices_.reserve(static_cast<std::size_t>(np) * np * nz);
  boundary_.reserve(vertices_.capacity());
  const double dn = n;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < np; ++j) {
      for (int i = 0; i < np; ++i) {
        const Point x{i / dn, j / dn, dim == 3 ? k / dn : 0.0};
        vertices_.push_back(x);
        bool on_boundary = false;
        for (int a = 0; a < dim; ++a) on_boundary = on_boundary || x[a] == 0.0 || x[a] == 1.0;
        boundary_.push_back(on_boundary ? 1 : 0);
      }
    }
  }

  const auto perms = axis_permutations(dim);
  const std::array<int, 3> stride{1, np, np * np};
  const int cubes_z = dim == 3 ? n : 1;
  cells_.reserve(static_cast<std::size_t>(n) * n * cubes_z * perms.size() * (dim + 1));
  for (int k = 0; k < cubes_z; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int corner = i * stride[0] + j * stride[1] + k * stride[2];
        for (const auto& perm : perms) {
          std::array<int, 4> v{};
          v[0] = corner;
          for (int a = 0; a < dim; ++a) v[a + 1] = v[a] + stride[perm[a]];
          std::array<const Point*, 4> pts{};
          for (int a = 0; a <= dim; ++a) pts[a] = &vertices_[v[a]];
          if (signed_volume(dim, std::span<const Point* const>(pts.data(), dim + 1)) < 0.0) {
            std::swap(v[dim - 1], v[dim]);
          }
          cells_.insert(cells_.end(), v.begin(), v.begin() + dim + 1);
        }
      }
    }
  }
}

std::span<const int> Mesh::cell(std::size_t c) const {
  const auto w = static_cast<std::size_t>(dim_ + 1);
  return {cells_.data() + c * w, w};
}

std::size_t Mesh::num_boundary_vertices() const noexcept {
  return static_cast<std::size_t>(std::count(boundary_.begin(), boundary_.end(), 1));
}

double Mesh::cell_signed_volume(std::size_t c) const {
  const auto v = cell(c);
  std::array<const Point*, 4> pts{};
  for (int a = 0; a <= dim_; ++a) pts[a] = &vertices_[v[a]];
  return signed_volume(dim_, std::span<const Point* const>(pts.data(), dim_ + 1));
}

double Mesh::cell_volume(std::size_t c) const { return std::abs(cell_signed_volume(c)); }

double Mesh::cell_diameter(std::size_t c) const {
  const auto v = cell(c);
  double d = 0.0;
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b) d = std::max(d, distance(vertices_[v[a]], vertices_[v[b]]));
  return d;
}

double Mesh::cell_inradius(std::size_t c) const {
  const auto v = cell(c);
  const double vol = cell_volume(c);
  double facets = 0.0;
  if (dim_ == 2) {
    for (int a = 0; a < 3; ++a) facets += distance(vertices_[v[a]], vertices_[v[(a + 1) % 3]]);
    return 2.0 * vol / facets;
  }
  for (int skip = 0; skip < 4; ++skip) {
    std::array<int, 3> f{};
    int m = 0;
    for (int a = 0; a < 4; ++a)
      if (a != skip) f[m++] = v[a];
    facets += 0.5 * norm(cross(sub(vertices_[f[1]], vertices_[f[0]]), sub(vertices_[f[2]], vertices_[f[0]])));
  }
  return 3.0 * vol / facets;
}

Point Mesh::cell_barycenter(std::size_t c) const {
  const auto v = cell(c);
  Point x{0.0, 0.0, 0.0};
  for (int idx : v)
    for (int a = 0; a < 3; ++a) x[a] += vertices_[idx][a];
  for (double& xa : x) xa /= static_cast<double>(v.size());
  return x;
}

Mesh build_unit_box_mesh(int dim, int n) { return Mesh(dim, n); }

std::array<Vec3, 4> simplex_gradients(int dim, std::span<const Point> p) {
  if ((dim != 2 && dim != 3) || p.size() != static_cast<std::size_t>(dim + 1)) {
    throw ArgumentError("simplex_gradients needs dim+1 vertices in 2D or 3D");
  }
  std::array<Vec3, 4> g{};
  if (dim == 2) {
    const Vec3 a = sub(p[1], p[0]);
    const Vec3 b = sub(p[2], p[0]);
    const double det = a[0] * b[1] - a[1] * b[0];
    // Rows of the inverse of [a b].
    g[1] = {b[1] / det, -b[0] / det, 0.0};
    g[2] = {-a[1] / det, a[0] / det, 0.0};
  } else {
    const Vec3 a = sub(p[1], p[0]);
    const Vec3 b = sub(p[2], p[0]);
    const Vec3 c = sub(p[3], p[0]);
    const Vec3 bxc = cross(b, c);
    const double det = a[0] * bxc[0] + a[1] * bxc[1] + a[2] * bxc[2];
    const Vec3 cxa = cross(c, a);
    const Vec3 axb = cross(a, b);
    for (int k = 0; k < 3; ++k) {
      g[1][k] = bxc[k] / det;
      g[2][k] = cxa[k] / det;
      g[3][k] = axb[k] / det;
    }
  }
  for (int k = 0; k < 3; ++k) {
    double s = 0.0;
    for (int i = 1; i <= dim; ++i) s += g[i][k];
    g[0][k] = -s;
  }
  return g;
}

std::array<Vec3, 4> cell_gradients(const Mesh& mesh, std::size_t cell_index) {
  if (cell_index >= mesh.num_cells()) {
    throw ArgumentError("cell index " + std::to_string(cell_index) + " out of range (" +
                        std::to_string(mesh.num_cells()) + " cells)");
  }
  const auto v = mesh.cell(cell_index);
  std::array<Point, 4> p{};
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = mesh.vertex(static_cast<std::size_t>(v[i]));
  return simplex_gradients(mesh.dim(), std::span<const Point>(p.data(), v.size()));
}

std::array<double, 4> barycentric_coordinates(const Mesh& mesh, std::size_t c, const Point& x) {
  const auto g = cell_gradients(mesh, c);
  const Point& p0 = mesh.vertex(mesh.cell(c)[0]);
  const Vec3 dx = sub(x, p0);
  std::array<double, 4> lam{};
  double rest = 1.0;
  for (int i = 1; i <= mesh.dim(); ++i) {
    lam[i] = g[i][0] * dx[0] + g[i][1] * dx[1] + g[i][2] * dx[2];
    rest -= lam[i];
  }
  lam[0] = rest;
  return lam;
}

CellLocation locate_point(const Mesh& mesh, const Point& x) {
  const int dim = mesh.dim();
  const int n = mesh.n();
  for (int a = 0; a < dim; ++a) {
    if (!(x[a] >= 0.0 && x[a] <= 1.0)) {
      throw DomainError("point outside the closed unit box (coordinate " + std::to_string(a) + " = " +
                        std::to_string(x[a]) + ")");
    }
  }

  // Grid cells that may contain x: two per axis when x sits on a grid plane.
  std::array<std::array<int, 2>, 3> cand{};
  std::array<int, 3> ncand{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    const double t = x[a] * n;
    const double r = std::round(t);
    if (std::abs(t - r) <= kLocateTolerance * std::max(1, n)) {
      const int k = static_cast<int>(r);
      int m = 0;
      if (k - 1 >= 0) cand[a][m++] = k - 1;
      if (k <= n - 1) cand[a][m++] = k;
      ncand[a] = m;
    } else {
      cand[a][0] = std::clamp(static_cast<int>(std::floor(t)), 0, n - 1);
    }
  }

  std::vector<std::size_t> cubes;
  for (int k = 0; k < ncand[2]; ++k)
    for (int j = 0; j < ncand[1]; ++j)
      for (int i = 0; i < ncand[0]; ++i) {
        std::size_t idx = static_cast<std::size_t>(cand[0][i]) + static_cast<std::size_t>(n) * cand[1][j];
        if (dim == 3) idx += static_cast<std::size_t>(n) * n * cand[2][k];
        cubes.push_back(idx);
      }
  std::sort(cubes.begin(), cubes.end());

  const std::size_t per_cube = dim == 2 ? 2 : 6;
  for (std::size_t cube : cubes) {
    for (std::size_t local = 0; local < per_cube; ++local) {
      const std::size_t c = cube * per_cube + local;
      const auto lam = barycentric_coordinates(mesh, c, x);
      const double lo = *std::min_element(lam.begin(), lam.begin() + dim + 1);
      if (lo >= -kLocateTolerance) return {c, lam};
    }
  }
  throw DomainError("point location failed inside the unit box");
}

}  // namespace elastopoint
