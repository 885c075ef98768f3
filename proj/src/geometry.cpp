#include "stokeslip/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace stokeslip {

SmoothDomain SmoothDomain::unit_disk() {
  SmoothDomain d;
  d.kind_ = Kind::UnitDisk;
  d.delta_ = 0.9;  // curvature 1; keep clear of the center singularity
  return d;
}

SmoothDomain SmoothDomain::level_set(std::function<double(Vec2)> phi,
                                     std::function<Vec2(Vec2)> grad_phi,
                                     double curvature_bound) {
  if (!(curvature_bound > 0.0)) throw ConfigError("curvature_bound must be positive");
  SmoothDomain d;
  d.kind_ = Kind::LevelSet;
  d.phi_ = std::move(phi);
  d.grad_ = std::move(grad_phi);
  d.delta_ = 0.5 / curvature_bound;
  return d;
}

double SmoothDomain::signed_distance(Vec2 x) const {
  if (kind_ == Kind::UnitDisk) return norm(x) - 1.0;
  return project(x).distance;
}

// Damped Newton for the closest point y on {phi = 0}:
//   phi(y) = 0  and  (x - y) parallel to grad phi(y).
// The Jacobian is formed by central differences so only phi and grad phi are
// required from the caller.
ProjectionResult SmoothDomain::project_level_set(Vec2 x) const {
  const double phi_x = phi_(x);
  const Vec2 g_x = grad_(x);
  const double g2 = dot(g_x, g_x);
  if (!(g2 > 0.0) || !std::isfinite(g2)) {
    throw NonConvergence("level-set projection: gradient vanishes at query point");
  }
  Vec2 y = x - (phi_x / g2) * g_x;  // first-order foot estimate

  auto residual = [&](Vec2 p) -> Vec2 { return {phi_(p), cross(x - p, grad_(p))}; };

  Vec2 f = residual(y);
  double fn = std::hypot(f.x, f.y);
  const double tol = 1e-12;
  const int max_iter = 50;
  for (int iter = 0; iter < max_iter && fn > tol; ++iter) {
    const double step = 1e-6 * std::max(1.0, std::max(std::abs(y.x), std::abs(y.y)));
    const Vec2 fpx = residual({y.x + step, y.y});
    const Vec2 fmx = residual({y.x - step, y.y});
    const Vec2 fpy = residual({y.x, y.y + step});
    const Vec2 fmy = residual({y.x, y.y - step});
    const double j00 = (fpx.x - fmx.x) / (2.0 * step), j01 = (fpy.x - fmy.x) / (2.0 * step);
    const double j10 = (fpx.y - fmx.y) / (2.0 * step), j11 = (fpy.y - fmy.y) / (2.0 * step);
    const double det = j00 * j11 - j01 * j10;
    if (!(std::abs(det) > 1e-300)) {
      throw NonConvergence("level-set projection: singular Newton Jacobian");
    }
    const Vec2 d = {(-f.x * j11 + f.y * j01) / det, (-j00 * f.y + j10 * f.x) / det};

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 40; ++k) {
      const Vec2 yt = y + lambda * d;
      const Vec2 ft = residual(yt);
      const double ftn = std::hypot(ft.x, ft.y);
      if (ftn < fn) {
        y = yt;
        f = ft;
        fn = ftn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;  // line search stalled; report below if unconverged
  }
  if (!(fn <= tol)) {
    throw NonConvergence("level-set projection: Newton did not reach tolerance 1e-12");
  }
  const Vec2 n = normalized(grad_(y));
  return {y, dot(x - y, n), n};
}

ProjectionResult SmoothDomain::project(Vec2 x) const {
  if (kind_ == Kind::UnitDisk) {
    const double r = norm(x);
    const double d = r - 1.0;
    if (!(std::abs(d) < delta_)) {
      throw OutsideTubularNeighborhood("projection query outside tubular neighborhood");
    }
    const Vec2 n = x / r;
    return {n, d, n};
  }
  ProjectionResult p = project_level_set(x);
  if (!(std::abs(p.distance) < delta_)) {
    throw OutsideTubularNeighborhood("projection query outside tubular neighborhood");
  }
  return p;
}

Vec2 SmoothDomain::outward_normal(Vec2 x) const {
  if (kind_ == Kind::UnitDisk) {
    const double r = norm(x);
    if (!(std::abs(r - 1.0) <= 1e-8)) throw NotOnBoundary("point is not on the unit circle");
    return x / r;
  }
  const double d = project_level_set(x).distance;
  if (!(std::abs(d) <= 1e-8)) throw NotOnBoundary("point is not on the boundary");
  return normalized(grad_(x));
}

}  // namespace stokeslip
