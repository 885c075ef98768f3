#pragma once

#include <vector>

#include "stokeslip/assembly.hpp"
#include "stokeslip/solver.hpp"

namespace stokeslip {

// Discretization errors against the closed-form fields, measured with
// degree-5 quadrature on the computational domain. The pressure error is
// gauge-corrected: k_h is the mean of (p_h - p exact) and the reported norm
// is ||(p + k_h) - p_h||.
struct ErrorReport {
  double l2_velocity = 0.0;
  double h1_velocity = 0.0;  // full norm, sqrt(L2^2 + seminorm^2)
  double l2_pressure = 0.0;
  double k_h = 0.0;
  double boundary_penetration = 0.0;  // max |u_h . n_h| at 3-point Gauss nodes
  double boundary_speed = 0.0;        // mean |u_h| at boundary edge midpoints
};

ErrorReport error_norms(const Mesh& mesh, const DofMap& dofs, const std::vector<double>& solution,
                        const ManufacturedCase& mc);

struct SlipReport {
  double penetration = 0.0;
  double speed = 0.0;
};

SlipReport boundary_slip_report(const Mesh& mesh, const DofMap& dofs,
                                const std::vector<double>& solution);

// Penalty multiplier recovered pointwise from the computed velocity:
// (u_h . n_h - g) / eps. The full scheme carries one linear function per
// boundary edge (values at both endpoints); the reduced scheme carries one
// midpoint value per edge.
struct LambdaRecovery {
  PenaltyScheme scheme = PenaltyScheme::Reduced;
  std::vector<std::array<double, 2>> endpoint_values;  // full scheme, per edge
  std::vector<double> midpoint_values;                 // reduced scheme, per edge
};

LambdaRecovery recover_lambda(const Mesh& mesh, const DofMap& dofs,
                              const std::vector<double>& solution, const ManufacturedCase& mc,
                              double epsilon, PenaltyScheme scheme);

// Observed order between consecutive levels; NaN when the mesh sizes match.
double rate(double e_prev, double e_cur, double h_prev, double h_cur);

// Least-squares slope of log(e) against log(h) over a refinement sequence.
double fit_rate(const std::vector<std::pair<double, double>>& h_and_e);

// Penalty scaling per level: eps = 0.1 h, eps = 0.1 h^2, or a fixed value.
struct EpsRule {
  enum class Kind { PropH, PropH2, Fixed };
  Kind kind = Kind::PropH2;
  double value = 1e-8;  // used by Fixed

  double eval(double h) const;
  static EpsRule prop_h();
  static EpsRule prop_h2();
  static EpsRule fixed(double eps);
};

enum class Comparator { PenaltyFull, PenaltyReduced, Dirichlet };

struct ConvergenceRecord {
  int level = 0;
  double h = 0.0;
  int n_dof = 0;
  double epsilon = 0.0;  // 0 for the Dirichlet comparator
  ErrorReport errors;
  SolveReport solve;
  double rate_l2_velocity = 0.0;  // NaN on the first level
  double rate_h1_velocity = 0.0;
  double rate_l2_pressure = 0.0;
};

// Refines the base mesh level-by-level, solves the selected scheme, and
// collects errors with observed rates. Solver non-convergence is recorded in
// the rows, never thrown.
std::vector<ConvergenceRecord> convergence_study(const Mesh& base_mesh, const SmoothDomain& domain,
                                                 const ManufacturedCase& mc, ElementChoice element,
                                                 Comparator comparator, EpsRule eps_rule,
                                                 const SolverConfig& solver, int levels);

// Penalty-conditioning sweep on a fixed mesh: two-norm condition estimate,
// iteration counts for GMRES at two restart lengths and for BiCGSTAB, and the
// dense LU relative residual, per epsilon.
struct SweepRow {
  double epsilon = 0.0;
  double cond2 = 0.0;
  SolveReport gmres_r30;
  SolveReport gmres_r200;
  SolveReport bicgstab;
  double lu_residual = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // log-log slope of cond2 against 1/eps over the three smallest epsilons
  double cond_slope = 0.0;
};

SweepResult epsilon_sweep(const Mesh& mesh, const ManufacturedCase& mc, ElementChoice element,
                          PenaltyScheme scheme, const std::vector<double>& eps_list,
                          const SolverConfig& base);

}  // namespace stokeslip
