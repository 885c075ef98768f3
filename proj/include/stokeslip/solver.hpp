#pragma once

#include <string>
#include <vector>

#include "stokeslip/csr.hpp"

namespace stokeslip {

enum class SolveMethod { Gmres, Bicgstab, DenseLu };
enum class PrecondKind { None, Ilu0 };

struct SolverConfig {
  SolveMethod method = SolveMethod::Gmres;
  int restart = 200;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  // Total inner-iteration budget; 0 selects 50 restart cycles for GMRES and
  // the equivalent count for BiCGSTAB.
  int max_iter = 0;
  PrecondKind precond = PrecondKind::Ilu0;
  int dense_cap = 6000;  // largest n admitted to dense factorization paths
};

// Outcome of one linear solve. Non-convergence is recorded, not thrown; the
// returned iterate is the best one visited. Residuals are true residuals
// ||b - A x|| (GMRES re-verifies after each restart cycle).
struct SolveReport {
  SolveMethod method = SolveMethod::Gmres;
  PrecondKind precond_used = PrecondKind::None;
  int iterations = 0;
  bool converged = false;
  double final_residual = 0.0;    // absolute
  double relative_residual = 0.0; // against ||b|| (absolute residual when b = 0)
  std::vector<double> residual_history;
};

struct SolveResult {
  std::vector<double> x;
  SolveReport report;
};

// Incomplete LU with zero fill: the factor pattern equals the matrix pattern.
// Throws BreakdownError on an exact zero pivot (including a structurally
// missing diagonal).
class Ilu0 {
 public:
  explicit Ilu0(const CsrMatrix& a);
  void apply(const std::vector<double>& r, std::vector<double>& z) const;
  const CsrMatrix& factors() const { return lu_; }

 private:
  CsrMatrix lu_;
  std::vector<int> diag_;
};

// Restarted GMRES, right-preconditioned so residual estimates track the true
// residual. If the ILU(0) construction breaks down the solve retries without
// preconditioning (reported in precond_used).
SolveResult gmres_solve(const CsrMatrix& a, const std::vector<double>& b, const SolverConfig& cfg);

SolveResult bicgstab_solve(const CsrMatrix& a, const std::vector<double>& b,
                           const SolverConfig& cfg);

// Dense partial-pivot LU with one step of iterative refinement. Throws
// SingularMatrix; requires n <= cfg.dense_cap.
SolveResult dense_lu_solve(const CsrMatrix& a, const std::vector<double>& b,
                           const SolverConfig& cfg);

SolveResult solve_linear(const CsrMatrix& a, const std::vector<double>& b,
                         const SolverConfig& cfg);

// Two-norm condition number: largest singular value by power iteration on
// A^T A (tolerance 1e-6, at most 500 iterations), smallest by inverse power
// iteration through a dense LU. Returns infinity for singular matrices.
double condition_estimate(const CsrMatrix& a);

std::string method_name(SolveMethod m);

}  // namespace stokeslip
