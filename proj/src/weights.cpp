#include "elastopoint/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "elastopoint/errors.hpp"
#include "elastopoint/quadrature.hpp"

namespace elastopoint {

void WeightSpec::validate() const {
  if (dim != 2 && dim != 3) throw ArgumentError("weight dimension must be 2 or 3");
  if (centers.empty()) throw ArgumentError("weight needs at least one center");
  if (!(alpha > -dim && alpha < dim)) {
    throw ArgumentError("weight exponent " + std::to_string(alpha) + " outside (-" + std::to_string(dim) + ", " +
                        std::to_string(dim) + ")");
  }
}

double eval_weight(const WeightSpec& spec, const Point& x) {
  double best = -1.0;
  for (const auto& c : spec.centers) {
    double r2 = 0.0;
    for (int a = 0; a < spec.dim; ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
    if (r2 == 0.0 && spec.alpha < 0.0) throw PoleError("weight evaluated at a center with negative exponent");
    best = std::max(best, std::pow(std::sqrt(r2), spec.alpha));
  }
  return best;
}

namespace {

constexpr double kClosureTolerance = 1e-12;

// Calls visit(cell, parent barycentrics, weighted quadrature factor) for every
// quadrature point; the factor already includes rho(x), the rule weight and
// the piece volume.
void for_each_weighted_point(const Mesh& mesh, const WeightSpec& spec, int quad_order,
                             const std::function<void(std::size_t, const std::array<double, 4>&, double)>& visit) {
  spec.validate();
  if (spec.dim != mesh.dim()) throw ArgumentError("weight and mesh dimensions differ");
  const int d = mesh.dim();
  const auto& regular = simplex_quadrature(d, quad_order);
  const auto& refined = simplex_quadrature(d, 4);

  auto eval_at = [&](std::size_t c, const std::array<double, 4>& lam) {
    const auto v = mesh.cell(c);
    Point x{0.0, 0.0, 0.0};
    for (int i = 0; i <= d; ++i)
      for (int a = 0; a < d; ++a) x[a] += lam[i] * mesh.vertex(v[i])[a];
    return eval_weight(spec, x);
  };

  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const double vol = mesh.cell_volume(c);
    const std::array<double, 4>* singular = nullptr;
    std::array<double, 4> center_bary{};
    for (const auto& center : spec.centers) {
      center_bary = barycentric_coordinates(mesh, c, center);
      if (*std::min_element(center_bary.begin(), center_bary.begin() + d + 1) >= -kClosureTolerance) {
        singular = &center_bary;
        break;
      }
    }

    if (singular == nullptr) {
      for (const auto& q : regular) visit(c, q.barycentric, q.weight * vol * eval_at(c, q.barycentric));
      continue;
    }

    // Star split: piece k replaces vertex k by the center and has volume lam_k |T|.
    for (int k = 0; k <= d; ++k) {
      const double lk = std::max(0.0, (*singular)[k]);
      if (lk <= kClosureTolerance) continue;
      for (const auto& q : refined) {
        std::array<double, 4> lam{};
        for (int m = 0; m <= d; ++m) {
          if (m == k) {
            for (int i = 0; i <= d; ++i) lam[i] += q.barycentric[m] * (*singular)[i];
          } else {
            lam[m] += q.barycentric[m];
          }
        }
        visit(c, lam, q.weight * lk * vol * eval_at(c, lam));
      }
    }
  }
}

std::size_t components_of(const Mesh& mesh, std::span<const double> field) {
  if (mesh.num_vertices() == 0 || field.size() % mesh.num_vertices() != 0 || field.empty()) {
    throw ArgumentError("field length is not a multiple of the vertex count");
  }
  return field.size() / mesh.num_vertices();
}

void check_norm_order(int quad_order) {
  if (quad_order != 2 && quad_order != 4) throw ArgumentError("weighted norms support quadrature orders 2 and 4");
}

}  // namespace

std::vector<double> cell_weight_integrals(const Mesh& mesh, const WeightSpec& spec, int quad_order) {
  std::vector<double> out(mesh.num_cells(), 0.0);
  for_each_weighted_point(mesh, spec, quad_order,
                          [&](std::size_t c, const std::array<double, 4>&, double w) { out[c] += w; });
  return out;
}

double weighted_l2_norm_sq(const Mesh& mesh, std::span<const double> field, const WeightSpec& spec, int quad_order) {
  check_norm_order(quad_order);
  const std::size_t nc = components_of(mesh, field);
  const int d = mesh.dim();
  double total = 0.0;
  for_each_weighted_point(mesh, spec, quad_order, [&](std::size_t c, const std::array<double, 4>& lam, double w) {
    const auto v = mesh.cell(c);
    double sq = 0.0;
    for (std::size_t comp = 0; comp < nc; ++comp) {
      double u = 0.0;
      for (int i = 0; i <= d; ++i) u += lam[i] * field[static_cast<std::size_t>(v[i]) * nc + comp];
      sq += u * u;
    }
    total += w * sq;
  });
  return total;
}

double weighted_h1_seminorm_sq(const Mesh& mesh, std::span<const double> field, const WeightSpec& spec,
                               int quad_order) {
  check_norm_order(quad_order);
  const std::size_t nc = components_of(mesh, field);
  const auto omega = cell_weight_integrals(mesh, spec, quad_order);
  const int d = mesh.dim();
  double total = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto v = mesh.cell(c);
    const auto g = cell_gradients(mesh, c);
    double sq = 0.0;
    for (std::size_t comp = 0; comp < nc; ++comp) {
      Vec3 grad{0.0, 0.0, 0.0};
      for (int i = 0; i <= d; ++i)
        for (int a = 0; a < d; ++a) grad[a] += field[static_cast<std::size_t>(v[i]) * nc + comp] * g[i][a];
      sq += grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2];
    }
    total += omega[c] * sq;
  }
  return total;
}

namespace {

// Sample cells this close to a weight center (in units of their side) are
// split into 2^dim children, down to kPoleDepth levels. A leaf whose midpoint
// is exactly a center is split once more.
constexpr int kPoleDepth2d = 10;
constexpr int kPoleDepth3d = 6;

struct BallSums {
  double volume = 0.0;
  double weight = 0.0;
  double inverse = 0.0;
};

void sample_box(const WeightSpec& spec, const Ball& ball, const Point& mid, double side, int depth, BallSums& sums) {
  const int d = spec.dim;
  bool near_pole = false;
  for (const auto& c : spec.centers) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) r2 += (mid[a] - c[a]) * (mid[a] - c[a]);
    near_pole = near_pole || (depth > 0 && r2 <= d * side * side) || r2 == 0.0;
  }
  if (near_pole) {
    const double half = 0.5 * side;
    const int children = 1 << d;
    for (int m = 0; m < children; ++m) {
      Point child = mid;
      for (int a = 0; a < d; ++a) child[a] += ((m >> a) & 1 ? 0.25 : -0.25) * side;
      sample_box(spec, ball, child, half, depth - 1, sums);
    }
    return;
  }
  double off2 = 0.0;
  for (int a = 0; a < d; ++a) off2 += (mid[a] - ball.center[a]) * (mid[a] - ball.center[a]);
  if (off2 > ball.radius * ball.radius) return;
  const double vol = d == 2 ? side * side : side * side * side;
  const double w = eval_weight(spec, mid);
  sums.volume += vol;
  sums.weight += vol * w;
  sums.inverse += vol / w;
}

}  // namespace

double a2_ball_product(const WeightSpec& spec, const Ball& ball, int points_per_axis) {
  spec.validate();
  if (!(ball.radius > 0.0)) throw ArgumentError("ball radius must be positive");
  if (points_per_axis < 2) throw ArgumentError("need at least 2 sample points per axis");
  const int m = points_per_axis + (points_per_axis % 2);
  const int d = spec.dim;
  const double step = 2.0 * ball.radius / m;
  const int depth = d == 2 ? kPoleDepth2d : kPoleDepth3d;
  BallSums sums;
  const int mz = d == 3 ? m : 1;
  for (int k = 0; k < mz; ++k) {
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) {
        const Point mid{ball.center[0] + (i + 0.5) * step - ball.radius, ball.center[1] + (j + 0.5) * step - ball.radius,
                        d == 3 ? ball.center[2] + (k + 0.5) * step - ball.radius : 0.0};
        sample_box(spec, ball, mid, step, depth, sums);
      }
    }
  }
  return (sums.weight / sums.volume) * (sums.inverse / sums.volume);
}

double estimate_a2(const WeightSpec& spec, std::span<const Ball> balls, int points_per_axis) {
  if (balls.empty()) throw ArgumentError("A2 estimate needs at least one ball");
  double best = 0.0;
  for (const auto& b : balls) best = std::max(best, a2_ball_product(spec, b, points_per_axis));
  return best;
}

std::vector<Ball> standard_ball_family(const WeightSpec& spec, int count) {
  spec.validate();
  if (count < 1) throw ArgumentError("ball family needs a positive count");
  constexpr double kOffsets[] = {0.0, 0.5, 1.0, 2.0, 4.0};
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Ball> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int radius_step = (i / 5) % 10;
    const double r = 0.4 * std::pow(2.0, -0.5 * radius_step);
    const double t = golden * i;
    // Unit direction; in 3D tilt out of the plane as well.
    Vec3 dir{std::cos(t), std::sin(t), 0.0};
    if (spec.dim == 3) {
      const double z = std::cos(0.5 * t);
      const double s = std::sqrt(1.0 - z * z);
      dir = {s * std::cos(t), s * std::sin(t), z};
    }
    const Point& base = spec.centers[static_cast<std::size_t>(i) % spec.centers.size()];
    const double off = kOffsets[i % 5] * r;
    out.push_back({{base[0] + off * dir[0], base[1] + off * dir[1], base[2] + off * dir[2]}, r});
  }
  return out;
}

}  // namespace elastopoint
