#pragma once

#include <functional>

#include "stokeslip/mesh.hpp"

namespace stokeslip {

// Outward unit normal of a boundary edge (constant along the edge).
Vec2 boundary_edge_normal(const Mesh& mesh, const BoundaryEdge& edge);

struct NormalDefect {
  double max_over_edges = 0.0;    // max over 2-point Gauss nodes of all boundary edges
  double max_at_midpoints = 0.0;  // max over edge midpoints
};

// |n(pi(x)) - n_h| between the exact normal at the projected point and the
// facet normal; first order along edges, second order at midpoints.
NormalDefect normal_defect(const Mesh& mesh, const SmoothDomain& domain);

// |int_Gamma f - int_Gamma_h f(pi(x))| with the curved integral computed by
// dense trapezoid quadrature on the circle parametrization (unit disk only)
// and the facet integral by 3-point Gauss per edge.
double surface_integral_defect(const Mesh& mesh, const SmoothDomain& domain,
                               const std::function<double(Vec2)>& f);

// Max |signed distance| over the 3-point Gauss nodes of all boundary edges;
// measures how far the facets stray from the curved boundary between their
// endpoints.
double boundary_gauss_max_distance(const Mesh& mesh, const SmoothDomain& domain);

// Walks the boundary loop with 16 samples per edge and checks that projected
// samples advance strictly monotonically in polar angle with total winding
// 2 pi (unit disk only). Returns false for reentrant or overlapping facets.
bool projection_injectivity_check(const Mesh& mesh, const SmoothDomain& domain);

}  // namespace stokeslip
