#include "stokeslip/assembly.hpp"

#include <array>
#include <cmath>

#include "stokeslip/diagnostics.hpp"
#include "stokeslip/quadrature.hpp"

namespace stokeslip {

ElementChoice ElementChoice::p1(double eta) {
  if (!(eta > 0.0)) throw ConfigError("P1 pressure requires positive stabilization eta");
  return {ElementKind::P1, eta};
}

ElementChoice ElementChoice::p1b() { return {ElementKind::P1b, 0.0}; }

DofMap DofMap::make(const Mesh& mesh, ElementChoice element) {
  return {mesh.n_vertices(), mesh.n_triangles(), element.bubbles()};
}

namespace {

// Barycentric scalar basis on one triangle: three vertex hats and optionally
// the cubic bubble 27 l0 l1 l2.
struct TriBasis {
  std::array<Vec2, 3> p;
  double area = 0.0;
  std::array<Vec2, 3> grad;  // constant hat gradients
  int n = 3;

  TriBasis(const Mesh& mesh, const std::array<int, 3>& tri, bool bubbles) {
    for (int i = 0; i < 3; ++i) p[i] = mesh.vertices[tri[i]];
    area = triangle_area(p[0], p[1], p[2]);
    const double inv2a = 0.5 / area;
    for (int i = 0; i < 3; ++i) {
      const Vec2 e = p[(i + 2) % 3] - p[(i + 1) % 3];
      grad[i] = {-e.y * inv2a, e.x * inv2a};  // left perp of opposite edge
    }
    n = bubbles ? 4 : 3;
  }

  Vec2 point(const TriQuadPoint& q) const { return q.l0 * p[0] + q.l1 * p[1] + q.l2 * p[2]; }

  void values(const TriQuadPoint& q, double* out) const {
    out[0] = q.l0;
    out[1] = q.l1;
    out[2] = q.l2;
    if (n == 4) out[3] = 27.0 * q.l0 * q.l1 * q.l2;
  }

  void gradients(const TriQuadPoint& q, Vec2* out) const {
    out[0] = grad[0];
    out[1] = grad[1];
    out[2] = grad[2];
    if (n == 4) {
      out[3] = 27.0 * (q.l1 * q.l2 * grad[0] + q.l0 * q.l2 * grad[1] + q.l0 * q.l1 * grad[2]);
    }
  }

  int scalar_dof(const DofMap& dofs, const std::array<int, 3>& tri, int tri_index, int i,
                 int comp) const {
    return i < 3 ? dofs.velocity_dof(tri[i], comp) : dofs.bubble_dof(tri_index, comp);
  }
};

double component(Vec2 v, int c) { return c == 0 ? v.x : v.y; }

}  // namespace

CsrMatrix assemble_velocity_form(const Mesh& mesh, const DofMap& dofs, double nu) {
  CsrBuilder builder(dofs.n_velocity(), dofs.n_velocity());
  const auto rule = triangle_rule(dofs.bubbles ? 6 : 2);
  double vals[4];
  Vec2 grads[4];
  for (int ti = 0; ti < mesh.n_triangles(); ++ti) {
    const auto& tri = mesh.triangles[ti];
    const TriBasis basis(mesh, tri, dofs.bubbles);
    const int nb = basis.n;
    std::array<double, 64> local{};  // (nb*2)^2 <= 64
    for (const auto& q : rule) {
      basis.values(q, vals);
      basis.gradients(q, grads);
      const double w = q.w * basis.area;
      for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < nb; ++j) {
          const double mass = vals[i] * vals[j];
          const double gdot = dot(grads[i], grads[j]);
          for (int c = 0; c < 2; ++c) {
            for (int d = 0; d < 2; ++d) {
              // mass + nu * (delta_cd grad.grad + d-deriv of N_i * c-deriv of N_j);
              // the inner product is parenthesized so the (i,c)/(j,d) and
              // (j,d)/(i,c) entries round identically and the block is
              // bit-exactly symmetric even after scaling by 1/epsilon.
              double v = nu * (component(grads[i], d) * component(grads[j], c));
              if (c == d) v += mass + nu * gdot;
              local[size_t(2 * i + c) * (2 * nb) + (2 * j + d)] += w * v;
            }
          }
        }
      }
    }
    for (int i = 0; i < nb; ++i) {
      for (int c = 0; c < 2; ++c) {
        const int gi = basis.scalar_dof(dofs, tri, ti, i, c);
        for (int j = 0; j < nb; ++j) {
          for (int d = 0; d < 2; ++d) {
            const int gj = basis.scalar_dof(dofs, tri, ti, j, d);
            builder.add(gi, gj, local[size_t(2 * i + c) * (2 * nb) + (2 * j + d)]);
          }
        }
      }
    }
  }
  return builder.build();
}

CsrMatrix assemble_divergence_form(const Mesh& mesh, const DofMap& dofs) {
  CsrBuilder builder(dofs.n_pressure(), dofs.n_velocity());
  const auto rule = triangle_rule(dofs.bubbles ? 5 : 2);
  double vals[4];
  Vec2 grads[4];
  for (int ti = 0; ti < mesh.n_triangles(); ++ti) {
    const auto& tri = mesh.triangles[ti];
    const TriBasis basis(mesh, tri, dofs.bubbles);
    const int nb = basis.n;
    std::array<double, 24> local{};  // 3 pressure rows x nb*2 velocity cols
    for (const auto& q : rule) {
      basis.values(q, vals);
      basis.gradients(q, grads);
      const double w = q.w * basis.area;
      for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < nb; ++j) {
          for (int c = 0; c < 2; ++c) {
            local[size_t(k) * (2 * nb) + (2 * j + c)] -= w * vals[k] * component(grads[j], c);
          }
        }
      }
    }
    for (int k = 0; k < 3; ++k) {
      for (int j = 0; j < nb; ++j) {
        for (int c = 0; c < 2; ++c) {
          builder.add(tri[k], basis.scalar_dof(dofs, tri, ti, j, c),
                      local[size_t(k) * (2 * nb) + (2 * j + c)]);
        }
      }
    }
  }
  return builder.build();
}

CsrMatrix assemble_pressure_stabilization(const Mesh& mesh, const DofMap& dofs,
                                          ElementChoice element, double h) {
  CsrBuilder builder(dofs.n_pressure(), dofs.n_pressure());
  if (element.eta > 0.0) {
    const double scale = element.eta * h * h;
    for (const auto& tri : mesh.triangles) {
      const TriBasis basis(mesh, tri, false);
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          builder.add(tri[k], tri[l], scale * basis.area * dot(basis.grad[k], basis.grad[l]));
        }
      }
    }
  }
  return builder.build();
}

CsrMatrix assemble_penalty(const Mesh& mesh, const DofMap& dofs, PenaltyScheme scheme) {
  CsrBuilder builder(dofs.n_velocity(), dofs.n_velocity());
  for (const auto& e : mesh.boundary_edges) {
    const Vec2 n = boundary_edge_normal(mesh, e);
    const double len = norm(mesh.vertices[e.b] - mesh.vertices[e.a]);
    const int verts[2] = {e.a, e.b};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        // Exact edge integrals of the linear traces give 1/3 and 1/6; the
        // one-point midpoint rule gives 1/4 everywhere.
        double w;
        if (scheme == PenaltyScheme::Full) {
          w = (i == j) ? len / 3.0 : len / 6.0;
        } else {
          w = len / 4.0;
        }
        for (int c = 0; c < 2; ++c) {
          for (int d = 0; d < 2; ++d) {
            builder.add(dofs.velocity_dof(verts[i], c), dofs.velocity_dof(verts[j], d),
                        w * (component(n, c) * component(n, d)));
          }
        }
      }
    }
  }
  return builder.build();
}

std::vector<double> assemble_rhs(const Mesh& mesh, const DofMap& dofs, const ManufacturedCase& mc,
                                 double epsilon, PenaltyScheme scheme, RhsOptions opts) {
  std::vector<double> rhs(dofs.n_total(), 0.0);
  const auto rule = triangle_rule(6);
  double vals[4];
  for (int ti = 0; ti < mesh.n_triangles(); ++ti) {
    const auto& tri = mesh.triangles[ti];
    const TriBasis basis(mesh, tri, dofs.bubbles);
    for (const auto& q : rule) {
      basis.values(q, vals);
      const Vec2 f = mc.body_force(basis.point(q));
      const double w = q.w * basis.area;
      for (int i = 0; i < basis.n; ++i) {
        for (int c = 0; c < 2; ++c) {
          rhs[basis.scalar_dof(dofs, tri, ti, i, c)] += w * vals[i] * component(f, c);
        }
      }
    }
  }

  for (const auto& e : mesh.boundary_edges) {
    const Vec2 a = mesh.vertices[e.a], b = mesh.vertices[e.b];
    const double len = norm(b - a);
    const Vec2 n = boundary_edge_normal(mesh, e);

    // Tangential traction, 3-point Gauss on the linear endpoint traces.
    for (const auto& q : edge_rule(3)) {
      const Vec2 tau = mc.traction(a + q.t * (b - a));
      const double wa = q.w * len * (1.0 - q.t);
      const double wb = q.w * len * q.t;
      for (int c = 0; c < 2; ++c) {
        rhs[dofs.velocity_dof(e.a, c)] += wa * component(tau, c);
        rhs[dofs.velocity_dof(e.b, c)] += wb * component(tau, c);
      }
    }

    // Penalty data term (1/eps) c(g, v . n).
    const double ga = mc.boundary_flux(a), gb = mc.boundary_flux(b);
    double data_a, data_b;
    if (scheme == PenaltyScheme::Full) {
      data_a = len * (ga / 3.0 + gb / 6.0);
      data_b = len * (ga / 6.0 + gb / 3.0);
    } else {
      const double gm =
          opts.reduced_interpolates_flux ? 0.5 * (ga + gb) : mc.boundary_flux(0.5 * (a + b));
      data_a = data_b = len * gm * 0.5;
    }
    for (int c = 0; c < 2; ++c) {
      rhs[dofs.velocity_dof(e.a, c)] += data_a * component(n, c) / epsilon;
      rhs[dofs.velocity_dof(e.b, c)] += data_b * component(n, c) / epsilon;
    }
  }
  return rhs;
}

CsrMatrix SaddleSystem::full_matrix() const {
  const int nu = dofs.n_velocity();
  const int n = dofs.n_total();
  CsrBuilder builder(n, n);
  builder.add_block(velocity_form, 0, 0);
  builder.add_block(penalty, 0, 0, 1.0 / epsilon);
  builder.add_block(divergence, nu, 0);
  builder.add_block(divergence, 0, nu, 1.0, /*transpose=*/true);
  builder.add_block(stabilization, nu, nu, -1.0);
  return builder.build();
}

std::vector<double> SaddleSystem::full_rhs() const {
  std::vector<double> rhs = rhs_velocity;
  rhs.insert(rhs.end(), rhs_pressure.begin(), rhs_pressure.end());
  return rhs;
}

SaddleSystem build_saddle_system(const Mesh& mesh, const ManufacturedCase& mc,
                                 ElementChoice element, double epsilon, PenaltyScheme scheme,
                                 RhsOptions opts) {
  if (!(epsilon > 0.0)) throw ConfigError("penalty epsilon must be positive");
  if (element.kind == ElementKind::P1 && !(element.eta > 0.0)) {
    throw ConfigError("P1 pressure requires positive stabilization eta");
  }
  SaddleSystem sys;
  sys.dofs = DofMap::make(mesh, element);
  sys.epsilon = epsilon;
  sys.scheme = scheme;
  const double h = mesh_stats(mesh).h;
  sys.velocity_form = assemble_velocity_form(mesh, sys.dofs, mc.nu);
  sys.penalty = assemble_penalty(mesh, sys.dofs, scheme);
  sys.divergence = assemble_divergence_form(mesh, sys.dofs);
  sys.stabilization = assemble_pressure_stabilization(mesh, sys.dofs, element, h);
  const std::vector<double> rhs = assemble_rhs(mesh, sys.dofs, mc, epsilon, scheme, opts);
  sys.rhs_velocity.assign(rhs.begin(), rhs.begin() + sys.dofs.n_velocity());
  sys.rhs_pressure.assign(sys.dofs.n_pressure(), 0.0);
  return sys;
}

ConstrainedSystem build_dirichlet_system(const Mesh& mesh, const ManufacturedCase& mc,
                                         ElementChoice element) {
  const DofMap dofs = DofMap::make(mesh, element);
  const int n = dofs.n_total();
  const int nu = dofs.n_velocity();
  const double h = mesh_stats(mesh).h;

  const CsrMatrix a = assemble_velocity_form(mesh, dofs, mc.nu);
  const CsrMatrix b = assemble_divergence_form(mesh, dofs);
  const CsrMatrix d = assemble_pressure_stabilization(mesh, dofs, element, h);

  std::vector<char> constrained(n, 0);
  std::vector<double> value(n, 0.0);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (!mesh.is_boundary_vertex[v]) continue;
    const Vec2 uv = mc.velocity(mesh.vertices[v]);
    for (int c = 0; c < 2; ++c) {
      constrained[dofs.velocity_dof(v, c)] = 1;
      value[dofs.velocity_dof(v, c)] = component(uv, c);
    }
  }
  constrained[dofs.pressure_dof(0)] = 1;  // fix the pressure gauge
  value[dofs.pressure_dof(0)] = 0.0;

  std::vector<double> rhs =
      assemble_rhs(mesh, dofs, mc, /*epsilon=*/1.0, PenaltyScheme::Full, {});
  // The penalty data term is absent here: the built case has zero boundary
  // flux, and constrained rows are overwritten below regardless.

  CsrBuilder builder(n, n);
  const auto add_filtered = [&](int i, int j, double v) {
    if (constrained[i]) return;
    if (constrained[j]) {
      rhs[i] -= v * value[j];
      return;
    }
    builder.add(i, j, v);
  };
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k) {
      add_filtered(i, a.col_indices()[k], a.values()[k]);
    }
  }
  for (int i = 0; i < b.rows(); ++i) {
    for (int k = b.row_offsets()[i]; k < b.row_offsets()[i + 1]; ++k) {
      add_filtered(nu + i, b.col_indices()[k], b.values()[k]);          // B
      add_filtered(b.col_indices()[k], nu + i, b.values()[k]);          // B^T
    }
  }
  for (int i = 0; i < d.rows(); ++i) {
    for (int k = d.row_offsets()[i]; k < d.row_offsets()[i + 1]; ++k) {
      add_filtered(nu + i, nu + d.col_indices()[k], -d.values()[k]);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (constrained[i]) {
      builder.add(i, i, 1.0);
      rhs[i] = value[i];
    }
  }
  rhs.resize(n, 0.0);  // ensure the pressure block exists even if loads were velocity-only
  return {builder.build(), std::move(rhs), dofs};
}

}  // namespace stokeslip
