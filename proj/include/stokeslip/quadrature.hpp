#pragma once

#include <span>

namespace stokeslip {

// Quadrature node in barycentric coordinates; weights sum to 1 and scale with
// the triangle area.
struct TriQuadPoint {
  double l0, l1, l2, w;
};

// Symmetric rule exact for polynomials up to the requested degree.
// Supported degrees: 2 (3 points), 5 (7 points), 6 (12 points); a request in
// between returns the next rule up.
std::span<const TriQuadPoint> triangle_rule(int degree);

// Gauss-Legendre node on [0, 1]; weights sum to 1 and scale with edge length.
struct EdgeQuadPoint {
  double t, w;
};

// 1-point (midpoint), 2-point, or 3-point Gauss rule on [0, 1].
std::span<const EdgeQuadPoint> edge_rule(int n_points);

}  // namespace stokeslip
