#pragma once

#include <span>
#include <vector>

#include "elastopoint/mesh.hpp"

namespace elastopoint {

/// Power-of-distance weight  rho(x) = max_k |x - x_k|^alpha,  alpha in (-dim, dim).
///
/// The formula is evaluated literally. For a single center this is |x - x_1|^alpha.
/// With several centers and alpha < 0 the largest power comes from the nearest
/// center, so the weight is singular at every center; for alpha > 0 it is the
/// farthest center that dominates.
struct WeightSpec {
  int dim = 2;
  std::vector<Point> centers;
  double alpha = 0.0;

  // Throws ArgumentError for no centers, a bad dimension or alpha outside (-dim, dim).
  void validate() const;
};

/// Throws PoleError when alpha < 0 and x coincides with a center.
double eval_weight(const WeightSpec& spec, const Point& x);

/// Integral of the weight over every cell. Cells whose closure contains a
/// center are split into sub-simplices meeting at that center and each piece
/// is integrated with the order-4 rule; all other cells use `quad_order`.
std::vector<double> cell_weight_integrals(const Mesh& mesh, const WeightSpec& spec, int quad_order);

/// Integral of rho |v_h|^2 for a nodal P1 field with field.size() / num_vertices
/// components per vertex. quad_order must be 2 or 4.
double weighted_l2_norm_sq(const Mesh& mesh, std::span<const double> field, const WeightSpec& spec, int quad_order);

/// Integral of rho |grad v_h|^2 (Frobenius) for a nodal P1 field.
double weighted_h1_seminorm_sq(const Mesh& mesh, std::span<const double> field, const WeightSpec& spec,
                               int quad_order);

struct Ball {
  Point center{};
  double radius = 0.0;
};

/// (mean of rho over the ball) * (mean of 1/rho over the ball), both taken over
/// the midpoints of a points_per_axis^dim grid on the bounding cube that fall
/// inside the ball. An odd points_per_axis is rounded up so no sample sits at
/// the ball center.
double a2_ball_product(const WeightSpec& spec, const Ball& ball, int points_per_axis);

/// Maximum of a2_ball_product over the sampled balls. This is a lower bound of
/// the Muckenhoupt A2 characteristic, never a certified value.
/// Throws ArgumentError for an empty sample.
double estimate_a2(const WeightSpec& spec, std::span<const Ball> balls, int points_per_axis);

/// Deterministic family of `count` balls around the weight centers: radii from
/// 0.4 down to about 0.018, centered on a weight center or offset from it by
/// 0.5, 1, 2 or 4 radii.
std::vector<Ball> standard_ball_family(const WeightSpec& spec, int count);

}  // namespace elastopoint
