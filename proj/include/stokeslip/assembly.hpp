#pragma once

#include <vector>

#include "stokeslip/csr.hpp"
#include "stokeslip/manufactured.hpp"
#include "stokeslip/mesh.hpp"

namespace stokeslip {

enum class ElementKind { P1, P1b };

// Velocity/pressure pairing: continuous P1 velocities with pressure-gradient
// stabilization (eta > 0 required), or P1 enriched with a cubic bubble per
// triangle (stabilization off).
struct ElementChoice {
  ElementKind kind = ElementKind::P1;
  double eta = 0.01;  // pressure stabilization weight, scaled by h^2

  static ElementChoice p1(double eta = 0.01);
  static ElementChoice p1b();
  bool bubbles() const { return kind == ElementKind::P1b; }
};

// Boundary quadrature for the penalty form: Full integrates edgewise linear
// normal traces exactly; Reduced uses the one-point midpoint rule.
enum class PenaltyScheme { Full, Reduced };

// Global dof layout: velocity block first (two interleaved components per
// vertex, then two per triangle for bubbles), pressure block after.
struct DofMap {
  int n_vertices = 0;
  int n_triangles = 0;
  bool bubbles = false;

  static DofMap make(const Mesh& mesh, ElementChoice element);

  int velocity_dof(int vertex, int comp) const { return 2 * vertex + comp; }
  int bubble_dof(int tri, int comp) const { return 2 * n_vertices + 2 * tri + comp; }
  int pressure_dof(int vertex) const { return n_velocity() + vertex; }
  int n_velocity() const { return 2 * n_vertices + (bubbles ? 2 * n_triangles : 0); }
  int n_pressure() const { return n_vertices; }
  int n_total() const { return n_velocity() + n_pressure(); }
};

// Velocity form: mass plus nu/2 times the symmetric-gradient pairing;
// symmetric positive definite.
CsrMatrix assemble_velocity_form(const Mesh& mesh, const DofMap& dofs, double nu);

// Divergence coupling b(v, q) = -int q div v, one row per pressure dof.
CsrMatrix assemble_divergence_form(const Mesh& mesh, const DofMap& dofs);

// Pressure stabilization eta h^2 (grad p, grad q); empty for bubble elements.
CsrMatrix assemble_pressure_stabilization(const Mesh& mesh, const DofMap& dofs,
                                          ElementChoice element, double h);

// Boundary penalty on normal traces; nonzero rows touch only velocity dofs of
// boundary vertices. Symmetric positive semidefinite.
CsrMatrix assemble_penalty(const Mesh& mesh, const DofMap& dofs, PenaltyScheme scheme);

struct RhsOptions {
  // The reduced-scheme data term evaluates g at edge midpoints by default;
  // this switches it to the midpoint value of the vertex interpolant of g.
  bool reduced_interpolates_flux = false;
};

// Load vector: volume force, tangential boundary traction, and the penalty
// data term scaled by 1/epsilon. The pressure block right-hand side is zero.
std::vector<double> assemble_rhs(const Mesh& mesh, const DofMap& dofs, const ManufacturedCase& mc,
                                 double epsilon, PenaltyScheme scheme, RhsOptions opts = {});

// Symmetric block system
//   [ A + C/eps  B^T ] [u]   [F]
//   [ B          -D  ] [p] = [0]
struct SaddleSystem {
  CsrMatrix velocity_form;     // A
  CsrMatrix penalty;           // C (unscaled)
  CsrMatrix divergence;        // B
  CsrMatrix stabilization;     // D
  std::vector<double> rhs_velocity;
  std::vector<double> rhs_pressure;
  double epsilon = 1.0;
  PenaltyScheme scheme = PenaltyScheme::Reduced;
  DofMap dofs;

  CsrMatrix full_matrix() const;
  std::vector<double> full_rhs() const;
};

SaddleSystem build_saddle_system(const Mesh& mesh, const ManufacturedCase& mc,
                                 ElementChoice element, double epsilon, PenaltyScheme scheme,
                                 RhsOptions opts = {});

// Same volume forms with velocity fixed to the exact field at boundary
// vertices (no penalty); the pressure gauge is pinned at vertex 0. Constraints
// are eliminated symmetrically.
struct ConstrainedSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
  DofMap dofs;
};

ConstrainedSystem build_dirichlet_system(const Mesh& mesh, const ManufacturedCase& mc,
                                         ElementChoice element);

}  // namespace stokeslip
