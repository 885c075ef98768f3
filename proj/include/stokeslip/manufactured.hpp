#pragma once

#include <array>
#include <functional>

#include "stokeslip/geometry.hpp"

namespace stokeslip {

// Closed-form exact solution of  u - nu*Lap(u) + grad(p) = f,  div(u) = 0
// with slip data (g, tau) on the boundary of the unit disk. All fields are
// globally analytic, so their formulas double as the extensions onto the
// polygonal computational domain.
struct ManufacturedCase {
  double nu = 1.0;
  std::function<Vec2(Vec2)> velocity;
  // Row-major gradient [du0/dx, du0/dy, du1/dx, du1/dy].
  std::function<std::array<double, 4>(Vec2)> velocity_gradient;
  std::function<double(Vec2)> pressure;
  std::function<Vec2(Vec2)> body_force;       // f
  std::function<double(Vec2)> boundary_flux;  // g, the prescribed u . n on the boundary
  std::function<Vec2(Vec2)> traction;         // tau, the tangential stress data

  // Exact norms over the disk for verification output.
  double l2_velocity_norm = 0.0;
  double h1_velocity_norm = 0.0;
  double l2_pressure_norm = 0.0;
};

// The rotating-flow benchmark: u = (-y, x) * (x^2 + y^2), p = 8 x y, nu = 1,
// u . n = 0 on the unit circle.
ManufacturedCase builtin_disk_case();

// sigma(u, p) n . n evaluated from the closed forms; the penalty multiplier
// approximates its negative on the boundary.
double normal_stress(const ManufacturedCase& mc, Vec2 x, Vec2 n);

}  // namespace stokeslip
