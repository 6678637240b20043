#include "elastopoint/quadrature.hpp"

#include <string>

#include "elastopoint/errors.hpp"

namespace elastopoint {
namespace {

void add_orbit3(std::vector<QuadraturePoint>& q, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  q.push_back({{a, a, b, 0.0}, w});
  q.push_back({{a, b, a, 0.0}, w});
  q.push_back({{b, a, a, 0.0}, w});
}

// (a, a, a, 1-3a) and its permutations.
void add_orbit4(std::vector<QuadraturePoint>& q, double a, double w) {
  const double b = 1.0 - 3.0 * a;
  for (int k = 0; k < 4; ++k) {
    std::array<double, 4> l{a, a, a, a};
    l[k] = b;
    q.push_back({l, w});
  }
}

// (a, a, b, b) with b = 1/2 - a, all six arrangements.
void add_orbit22(std::vector<QuadraturePoint>& q, double a, double w) {
  const double b = 0.5 - a;
  const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (const auto& p : pairs) {
    std::array<double, 4> l{b, b, b, b};
    l[p[0]] = a;
    l[p[1]] = a;
    q.push_back({l, w});
  }
}

std::vector<QuadraturePoint> make_rule(int dim, int order) {
  std::vector<QuadraturePoint> q;
  if (dim == 2) {
    switch (order) {
      case 1:
        q.push_back({{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0}, 1.0});
        break;
      case 2:
        add_orbit3(q, 1.0 / 6, 1.0 / 3);
        break;
      case 4:
        add_orbit3(q, 0.44594849091596488632, 0.22338158967801146570);
        add_orbit3(q, 0.09157621350977074346, 0.10995174365532186764);
        break;
    }
  } else if (dim == 3) {
    switch (order) {
      case 1:
        q.push_back({{0.25, 0.25, 0.25, 0.25}, 1.0});
        break;
      case 2:
        add_orbit4(q, 0.13819660112501051518, 0.25);
        break;
      case 4:
        // Weights below are for the unit tetrahedron (volume 1/6).
        add_orbit4(q, 0.09273525031089122640, 6.0 * 0.01224884051939366);
        add_orbit4(q, 0.31088591926330060980, 6.0 * 0.01878132095300264);
        add_orbit22(q, 0.04550370412564964, 6.0 * 0.007091003462846911);
        break;
    }
  }
  return q;
}

}  // namespace

const std::vector<QuadraturePoint>& simplex_quadrature(int dim, int order) {
  static const std::array<std::array<std::vector<QuadraturePoint>, 5>, 2> rules = [] {
    std::array<std::array<std::vector<QuadraturePoint>, 5>, 2> r;
    for (int d = 2; d <= 3; ++d)
      for (int o : {1, 2, 4}) r[d - 2][o] = make_rule(d, o);
    return r;
  }();
  if ((dim != 2 && dim != 3) || (order != 1 && order != 2 && order != 4)) {
    throw ArgumentError("unsupported quadrature: dim " + std::to_string(dim) + ", order " + std::to_string(order) +
                        " (orders 1, 2, 4 are available)");
  }
  return rules[dim - 2][order];
}

}  // namespace elastopoint
