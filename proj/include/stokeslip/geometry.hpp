#pragma once

#include <cmath>
#include <functional>

#include "stokeslip/errors.hpp"

namespace stokeslip {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }
// Rotate by -90 degrees; for a counterclockwise boundary this turns an edge
// direction into the outward normal direction.
inline Vec2 right_perp(Vec2 a) { return {a.y, -a.x}; }

// Closest-point decomposition x = foot + distance * normal_at_foot.
struct ProjectionResult {
  Vec2 foot;
  double distance = 0.0;  // signed: negative inside the domain
  Vec2 normal_at_foot;
};

// A bounded domain with smooth boundary, either the unit disk (analytic fast
// paths) or the sublevel set {phi < 0} of a user-supplied level-set function.
// All closest-point queries are restricted to a tubular neighborhood of the
// boundary whose half-width is tubular_width().
class SmoothDomain {
 public:
  enum class Kind { UnitDisk, LevelSet };

  static SmoothDomain unit_disk();
  // grad_phi must be nonzero near the zero level set; curvature_bound is an
  // upper bound on boundary curvature supplied by the caller and controls the
  // tubular half-width 0.5 / curvature_bound.
  static SmoothDomain level_set(std::function<double(Vec2)> phi,
                                std::function<Vec2(Vec2)> grad_phi,
                                double curvature_bound);

  Kind kind() const { return kind_; }
  double tubular_width() const { return delta_; }

  // Signed distance to the boundary, negative inside. For level-set domains
  // the query point must lie inside the tubular neighborhood.
  double signed_distance(Vec2 x) const;

  // Closest-point projection onto the boundary. Throws
  // OutsideTubularNeighborhood when |signed distance| >= tubular_width(), and
  // NonConvergence if the level-set Newton solve fails.
  ProjectionResult project(Vec2 x) const;

  // Outward unit normal at a point on the boundary (|signed distance| must be
  // <= 1e-8, else NotOnBoundary).
  Vec2 outward_normal(Vec2 x) const;

 private:
  SmoothDomain() = default;
  ProjectionResult project_level_set(Vec2 x) const;

  Kind kind_ = Kind::UnitDisk;
  std::function<double(Vec2)> phi_;
  std::function<Vec2(Vec2)> grad_;
  double delta_ = 0.9;
};

}  // namespace stokeslip
