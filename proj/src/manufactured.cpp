#include "stokeslip/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace stokeslip {

ManufacturedCase builtin_disk_case() {
  ManufacturedCase mc;
  mc.nu = 1.0;
  mc.velocity = [](Vec2 p) -> Vec2 {
    const double r2 = p.x * p.x + p.y * p.y;
    return {-p.y * r2, p.x * r2};
  };
  mc.velocity_gradient = [](Vec2 p) -> std::array<double, 4> {
    return {-2.0 * p.x * p.y, -(p.x * p.x + 3.0 * p.y * p.y),
            3.0 * p.x * p.x + p.y * p.y, 2.0 * p.x * p.y};
  };
  mc.pressure = [](Vec2 p) { return 8.0 * p.x * p.y; };
  mc.body_force = [](Vec2 p) -> Vec2 {
    const double r2 = p.x * p.x + p.y * p.y;
    return {-p.y * r2 + 16.0 * p.y, p.x * r2};
  };
  mc.boundary_flux = [](Vec2) { return 0.0; };
  mc.traction = [](Vec2 p) -> Vec2 {
    const double x = p.x, y = p.y;
    // (I - n n^T) sigma n with n extended as the coordinate vector (x, y).
    const double mx = -10.0 * x * x * y - 2.0 * y * y * y;  // sigma * (x, y), first row
    const double my = 2.0 * x * x * x - 6.0 * x * y * y;
    return {(1.0 - x * x) * mx - x * y * my, -x * y * mx + (1.0 - y * y) * my};
  };
  mc.l2_velocity_norm = std::sqrt(std::numbers::pi / 4.0);
  mc.h1_velocity_norm = std::sqrt(43.0 * std::numbers::pi / 12.0);
  mc.l2_pressure_norm = std::sqrt(8.0 * std::numbers::pi / 3.0);
  return mc;
}

double normal_stress(const ManufacturedCase& mc, Vec2 x, Vec2 n) {
  const auto g = mc.velocity_gradient(x);
  const double sxx = -mc.pressure(x) + mc.nu * 2.0 * g[0];
  const double sxy = mc.nu * (g[1] + g[2]);
  const double syy = -mc.pressure(x) + mc.nu * 2.0 * g[3];
  return n.x * (sxx * n.x + sxy * n.y) + n.y * (sxy * n.x + syy * n.y);
}

}  // namespace stokeslip
