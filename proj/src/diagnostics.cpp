#include "stokeslip/diagnostics.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "stokeslip/quadrature.hpp"

namespace stokeslip {

Vec2 boundary_edge_normal(const Mesh& mesh, const BoundaryEdge& edge) {
  // The domain lies left of a -> b, so the outward normal is the right perp.
  return normalized(right_perp(mesh.vertices[edge.b] - mesh.vertices[edge.a]));
}

NormalDefect normal_defect(const Mesh& mesh, const SmoothDomain& domain) {
  NormalDefect result;
  for (const auto& e : mesh.boundary_edges) {
    const Vec2 a = mesh.vertices[e.a], b = mesh.vertices[e.b];
    const Vec2 nh = boundary_edge_normal(mesh, e);
    for (const auto& q : edge_rule(2)) {
      const Vec2 x = a + q.t * (b - a);
      result.max_over_edges =
          std::max(result.max_over_edges, norm(domain.project(x).normal_at_foot - nh));
    }
    const Vec2 mid = 0.5 * (a + b);
    result.max_at_midpoints =
        std::max(result.max_at_midpoints, norm(domain.project(mid).normal_at_foot - nh));
  }
  return result;
}

double surface_integral_defect(const Mesh& mesh, const SmoothDomain& domain,
                               const std::function<double(Vec2)>& f) {
  if (domain.kind() != SmoothDomain::Kind::UnitDisk) {
    throw ConfigError("surface_integral_defect: exact boundary quadrature requires the unit disk");
  }
  // Trapezoid rule on the periodic parametrization converges spectrally.
  const int n = 4096;
  double exact = 0.0;
  for (int i = 0; i < n; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / n;
    exact += f({std::cos(theta), std::sin(theta)});
  }
  exact *= 2.0 * std::numbers::pi / n;

  double facet = 0.0;
  for (const auto& e : mesh.boundary_edges) {
    const Vec2 a = mesh.vertices[e.a], b = mesh.vertices[e.b];
    const double len = norm(b - a);
    for (const auto& q : edge_rule(3)) {
      facet += q.w * len * f(domain.project(a + q.t * (b - a)).foot);
    }
  }
  return std::abs(exact - facet);
}

double boundary_gauss_max_distance(const Mesh& mesh, const SmoothDomain& domain) {
  double worst = 0.0;
  for (const auto& e : mesh.boundary_edges) {
    const Vec2 a = mesh.vertices[e.a], b = mesh.vertices[e.b];
    for (const auto& q : edge_rule(3)) {
      worst = std::max(worst, std::abs(domain.signed_distance(a + q.t * (b - a))));
    }
  }
  return worst;
}

bool projection_injectivity_check(const Mesh& mesh, const SmoothDomain& domain) {
  if (domain.kind() != SmoothDomain::Kind::UnitDisk) {
    throw ConfigError("projection_injectivity_check requires the unit disk");
  }
  if (mesh.boundary_edges.empty()) return false;

  // Chain the directed boundary edges into a single loop.
  std::map<int, const BoundaryEdge*> next_from;
  for (const auto& e : mesh.boundary_edges) {
    if (!next_from.emplace(e.a, &e).second) return false;  // branching boundary
  }
  std::vector<const BoundaryEdge*> loop;
  const int start = mesh.boundary_edges.front().a;
  int v = start;
  for (size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
    const auto it = next_from.find(v);
    if (it == next_from.end()) return false;
    loop.push_back(it->second);
    v = it->second->b;
  }
  if (v != start) return false;  // boundary is not one closed loop

  const int samples_per_edge = 16;
  double total = 0.0;
  double prev = 0.0;
  bool have_prev = false;
  for (const auto* e : loop) {
    const Vec2 a = mesh.vertices[e->a], b = mesh.vertices[e->b];
    for (int i = 0; i < samples_per_edge; ++i) {
      const double t = (i + 0.5) / samples_per_edge;
      const Vec2 foot = domain.project(a + t * (b - a)).foot;
      const double theta = std::atan2(foot.y, foot.x);
      if (have_prev) {
        double d = theta - prev;
        while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
        while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
        if (!(d > 0.0)) return false;  // projected samples must advance
        total += d;
      }
      prev = theta;
      have_prev = true;
    }
  }
  // Close the loop back to the first sample and require a single winding.
  {
    const auto* e = loop.front();
    const Vec2 a = mesh.vertices[e->a], b = mesh.vertices[e->b];
    const double t = 0.5 / samples_per_edge;
    const Vec2 foot = domain.project(a + t * (b - a)).foot;
    double d = std::atan2(foot.y, foot.x) - prev;
    while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    if (!(d > 0.0)) return false;
    total += d;
  }
  return std::abs(total - 2.0 * std::numbers::pi) < 1e-9;
}

}  // namespace stokeslip
