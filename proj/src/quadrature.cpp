#include "stokeslip/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace stokeslip {

namespace {

// Edge-midpoint rule, exact to degree 2.
constexpr TriQuadPoint kDegree2[] = {
    {0.5, 0.5, 0.0, 1.0 / 3.0},
    {0.0, 0.5, 0.5, 1.0 / 3.0},
    {0.5, 0.0, 0.5, 1.0 / 3.0},
};

// 7-point rule, exact to degree 5.
constexpr double kA1 = 0.059715871789770, kB1 = 0.470142064105115, kW1 = 0.132394152788506;
constexpr double kA2 = 0.797426985353087, kB2 = 0.101286507323456, kW2 = 0.125939180544827;
constexpr TriQuadPoint kDegree5[] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {kA1, kB1, kB1, kW1},
    {kB1, kA1, kB1, kW1},
    {kB1, kB1, kA1, kW1},
    {kA2, kB2, kB2, kW2},
    {kB2, kA2, kB2, kW2},
    {kB2, kB2, kA2, kW2},
};

// 12-point rule, exact to degree 6.
constexpr double kC1 = 0.873821971016996, kD1 = 0.063089014491502, kV1 = 0.050844906370207;
constexpr double kC2 = 0.501426509658179, kD2 = 0.249286745170910, kV2 = 0.116786275726379;
constexpr double kC3 = 0.636502499121399, kD3 = 0.310352451033785, kE3 = 0.053145049844816;
constexpr double kV3 = 0.082851075618374;
constexpr TriQuadPoint kDegree6[] = {
    {kC1, kD1, kD1, kV1}, {kD1, kC1, kD1, kV1}, {kD1, kD1, kC1, kV1},
    {kC2, kD2, kD2, kV2}, {kD2, kC2, kD2, kV2}, {kD2, kD2, kC2, kV2},
    {kC3, kD3, kE3, kV3}, {kC3, kE3, kD3, kV3}, {kD3, kC3, kE3, kV3},
    {kD3, kE3, kC3, kV3}, {kE3, kC3, kD3, kV3}, {kE3, kD3, kC3, kV3},
};

const EdgeQuadPoint kEdge1[] = {{0.5, 1.0}};
const double kG2 = 0.5 / std::sqrt(3.0);
const EdgeQuadPoint kEdge2[] = {{0.5 - kG2, 0.5}, {0.5 + kG2, 0.5}};
const double kG3 = 0.5 * std::sqrt(0.6);
const EdgeQuadPoint kEdge3[] = {{0.5 - kG3, 5.0 / 18.0}, {0.5, 8.0 / 18.0}, {0.5 + kG3, 5.0 / 18.0}};

}  // namespace

std::span<const TriQuadPoint> triangle_rule(int degree) {
  if (degree <= 2) return kDegree2;
  if (degree <= 5) return kDegree5;
  if (degree <= 6) return kDegree6;
  throw std::invalid_argument("triangle_rule: unsupported degree");
}

std::span<const EdgeQuadPoint> edge_rule(int n_points) {
  switch (n_points) {
    case 1: return kEdge1;
    case 2: return kEdge2;
    case 3: return kEdge3;
    default: throw std::invalid_argument("edge_rule: unsupported point count");
  }
}

}  // namespace stokeslip
