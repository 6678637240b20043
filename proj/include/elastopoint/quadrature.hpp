#pragma once

#include <array>
#include <vector>

namespace elastopoint {

struct QuadraturePoint {
  std::array<double, 4> barycentric{};
  double weight = 0.0;  // relative to the simplex volume; weights sum to 1
};

/// Symmetric Gauss rules on the reference simplex, exact for polynomials of
/// total degree <= order. Supported orders: 1, 2, 4. Throws ArgumentError
/// otherwise.
///
///  2D: centroid; 3-point interior rule; Dunavant 6-point degree-4 rule.
///  3D: centroid; 4-point rule; 14-point positive-weight degree-5 rule.
const std::vector<QuadraturePoint>& simplex_quadrature(int dim, int order);

}  // namespace elastopoint
