#include "stokeslip/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

#include "stokeslip/dense.hpp"
#include "stokeslip/errors.hpp"

namespace stokeslip {

namespace {

double norm2(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

std::vector<double> residual_of(const CsrMatrix& a, const std::vector<double>& b,
                                const std::vector<double>& x) {
  std::vector<double> r = a.multiply(x);
  for (size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

// Builds the preconditioner, falling back to the identity when ILU(0) breaks
// down on an exact zero pivot.
std::unique_ptr<Ilu0> make_precond(const CsrMatrix& a, const SolverConfig& cfg,
                                   PrecondKind& used) {
  used = PrecondKind::None;
  if (cfg.precond != PrecondKind::Ilu0) return nullptr;
  try {
    auto p = std::make_unique<Ilu0>(a);
    used = PrecondKind::Ilu0;
    return p;
  } catch (const BreakdownError&) {
    return nullptr;
  }
}

void finish_report(const CsrMatrix& a, const std::vector<double>& b, const std::vector<double>& x,
                   double target, double bnorm, SolveReport& report) {
  const double rnorm = norm2(residual_of(a, b, x));
  report.final_residual = rnorm;
  report.relative_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  report.converged = rnorm <= target;
}

}  // namespace

std::string method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::Gmres: return "gmres";
    case SolveMethod::Bicgstab: return "bicgstab";
    case SolveMethod::DenseLu: return "dense_lu";
  }
  return "unknown";
}

Ilu0::Ilu0(const CsrMatrix& a) : lu_(a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("ilu0: matrix must be square");
  const int n = a.rows();
  const auto& off = lu_.row_offsets();
  const auto& col = lu_.col_indices();
  auto& val = lu_.values();
  diag_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int k = off[i]; k < off[i + 1]; ++k) {
      if (col[k] == i) diag_[i] = k;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int kk = off[i]; kk < off[i + 1] && col[kk] < i; ++kk) {
      const int k = col[kk];
      if (diag_[k] < 0 || val[diag_[k]] == 0.0) {
        throw BreakdownError("ilu0: exact zero pivot");
      }
      const double lik = val[kk] / val[diag_[k]];
      val[kk] = lik;
      // Subtract lik * (row k upper part), restricted to row i's pattern.
      int pos = kk + 1;
      for (int mm = diag_[k] + 1; mm < off[k + 1]; ++mm) {
        const int j = col[mm];
        while (pos < off[i + 1] && col[pos] < j) ++pos;
        if (pos < off[i + 1] && col[pos] == j) val[pos] -= lik * val[mm];
      }
    }
    if (diag_[i] < 0 || val[diag_[i]] == 0.0) {
      throw BreakdownError("ilu0: exact zero pivot");
    }
  }
}

void Ilu0::apply(const std::vector<double>& r, std::vector<double>& z) const {
  const int n = lu_.rows();
  const auto& off = lu_.row_offsets();
  const auto& col = lu_.col_indices();
  const auto& val = lu_.values();
  z = r;
  for (int i = 0; i < n; ++i) {  // unit lower solve
    double acc = z[i];
    for (int k = off[i]; k < diag_[i]; ++k) acc -= val[k] * z[col[k]];
    z[i] = acc;
  }
  for (int i = n - 1; i >= 0; --i) {  // upper solve
    double acc = z[i];
    for (int k = diag_[i] + 1; k < off[i + 1]; ++k) acc -= val[k] * z[col[k]];
    z[i] = acc / val[diag_[i]];
  }
}

SolveResult gmres_solve(const CsrMatrix& a, const std::vector<double>& b,
                        const SolverConfig& cfg) {
  if (a.rows() != a.cols()) throw std::invalid_argument("gmres: matrix must be square");
  const int n = a.rows();
  const int m = std::max(1, cfg.restart);
  const long budget = cfg.max_iter > 0 ? cfg.max_iter : 50L * m;

  SolveResult out;
  out.report.method = SolveMethod::Gmres;
  auto prec = make_precond(a, cfg, out.report.precond_used);

  out.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  const double target = std::max(cfg.rel_tol * bnorm, cfg.abs_tol);
  if (bnorm <= target) {
    finish_report(a, b, out.x, target, bnorm, out.report);
    return out;
  }

  std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
  std::vector<double> hess(size_t(m + 1) * m, 0.0);
  const auto h = [&](int i, int j) -> double& { return hess[size_t(j) * (m + 1) + i]; };
  std::vector<double> cs(m), sn(m), g(m + 1), y(m), z(n), w(n);

  long total = 0;
  while (total < budget) {
    std::vector<double> r = residual_of(a, b, out.x);
    const double rnorm = norm2(r);
    if (rnorm <= target) break;
    for (int i = 0; i < n; ++i) v[0][i] = r[i] / rnorm;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = rnorm;

    int j = 0;
    for (; j < m && total < budget;) {
      if (prec) {
        prec->apply(v[j], z);
      } else {
        z = v[j];
      }
      a.multiply(z, w);
      for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
        const double hij = dot(w, v[i]);
        h(i, j) = hij;
        axpy(-hij, v[i], w);
      }
      const double hj1 = norm2(w);
      h(j + 1, j) = hj1;
      if (hj1 > 0.0) {
        for (int i = 0; i < n; ++i) v[j + 1][i] = w[i] / hj1;
      }
      for (int i = 0; i < j; ++i) {
        const double t0 = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
        h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
        h(i, j) = t0;
      }
      const double denom = std::hypot(h(j, j), h(j + 1, j));
      cs[j] = denom > 0.0 ? h(j, j) / denom : 1.0;
      sn[j] = denom > 0.0 ? h(j + 1, j) / denom : 0.0;
      h(j, j) = denom;
      h(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++total;
      ++j;
      out.report.residual_history.push_back(std::abs(g[j]));
      if (std::abs(g[j]) <= target || hj1 == 0.0) break;
    }

    for (int i = j - 1; i >= 0; --i) {  // back substitution
      double acc = g[i];
      for (int k = i + 1; k < j; ++k) acc -= h(i, k) * y[k];
      y[i] = acc / h(i, i);
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (int i = 0; i < j; ++i) axpy(y[i], v[i], w);
    if (prec) {
      prec->apply(w, z);
      axpy(1.0, z, out.x);
    } else {
      axpy(1.0, w, out.x);
    }
    if (j == 0) break;  // no progress possible
  }

  out.report.iterations = static_cast<int>(total);
  finish_report(a, b, out.x, target, bnorm, out.report);
  return out;
}

SolveResult bicgstab_solve(const CsrMatrix& a, const std::vector<double>& b,
                           const SolverConfig& cfg) {
  if (a.rows() != a.cols()) throw std::invalid_argument("bicgstab: matrix must be square");
  const int n = a.rows();
  const long budget = cfg.max_iter > 0 ? cfg.max_iter : 50L * std::max(1, cfg.restart);

  SolveResult out;
  out.report.method = SolveMethod::Bicgstab;
  auto prec = make_precond(a, cfg, out.report.precond_used);

  out.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  const double target = std::max(cfg.rel_tol * bnorm, cfg.abs_tol);
  if (bnorm <= target) {
    finish_report(a, b, out.x, target, bnorm, out.report);
    return out;
  }

  std::vector<double> r = b, rhat = b, p(n, 0.0), vv(n, 0.0), s(n), t(n), phat(n), shat(n);
  std::vector<double> best_x = out.x;
  double best_res = norm2(r);
  double rho = 1.0, alpha = 1.0, omega = 1.0;

  long iter = 0;
  while (iter < budget) {
    ++iter;
    const double rho1 = dot(rhat, r);
    if (rho1 == 0.0 || !std::isfinite(rho1)) break;  // breakdown: keep best iterate
    if (iter == 1) {
      p = r;
    } else {
      const double beta = (rho1 / rho) * (alpha / omega);
      if (!std::isfinite(beta)) break;
      for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * vv[i]);
    }
    if (prec) {
      prec->apply(p, phat);
    } else {
      phat = p;
    }
    a.multiply(phat, vv);
    const double rv = dot(rhat, vv);
    if (rv == 0.0 || !std::isfinite(rv)) break;
    alpha = rho1 / rv;
    for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * vv[i];
    if (norm2(s) <= target) {
      axpy(alpha, phat, out.x);
      out.report.residual_history.push_back(norm2(s));
      break;
    }
    if (prec) {
      prec->apply(s, shat);
    } else {
      shat = s;
    }
    a.multiply(shat, t);
    const double tt = dot(t, t);
    if (tt == 0.0 || !std::isfinite(tt)) break;
    omega = dot(t, s) / tt;
    if (omega == 0.0 || !std::isfinite(omega)) break;
    for (int i = 0; i < n; ++i) {
      out.x[i] += alpha * phat[i] + omega * shat[i];
      r[i] = s[i] - omega * t[i];
    }
    rho = rho1;
    const double rnorm = norm2(r);
    out.report.residual_history.push_back(rnorm);
    if (rnorm < best_res) {
      best_res = rnorm;
      best_x = out.x;
    }
    if (rnorm <= target) break;
  }

  out.report.iterations = static_cast<int>(iter);
  finish_report(a, b, out.x, target, bnorm, out.report);
  if (!out.report.converged && best_res < out.report.final_residual) {
    out.x = best_x;
    finish_report(a, b, out.x, target, bnorm, out.report);
  }
  return out;
}

SolveResult dense_lu_solve(const CsrMatrix& a, const std::vector<double>& b,
                           const SolverConfig& cfg) {
  if (a.rows() != a.cols()) throw std::invalid_argument("dense lu: matrix must be square");
  if (a.rows() > cfg.dense_cap) {
    throw ConfigError("dense solver requested beyond the dense size cap");
  }
  SolveResult out;
  out.report.method = SolveMethod::DenseLu;
  DenseLu lu;
  lu.factor(to_dense(a));
  out.x = lu.solve(b);
  // One step of fixed-precision iterative refinement.
  const std::vector<double> r = residual_of(a, b, out.x);
  axpy(1.0, lu.solve(r), out.x);

  const double bnorm = norm2(b);
  const double target = std::max(cfg.rel_tol * bnorm, cfg.abs_tol);
  finish_report(a, b, out.x, target, bnorm, out.report);
  return out;
}

SolveResult solve_linear(const CsrMatrix& a, const std::vector<double>& b,
                         const SolverConfig& cfg) {
  switch (cfg.method) {
    case SolveMethod::Gmres: return gmres_solve(a, b, cfg);
    case SolveMethod::Bicgstab: return bicgstab_solve(a, b, cfg);
    case SolveMethod::DenseLu: return dense_lu_solve(a, b, cfg);
  }
  throw std::invalid_argument("unknown solve method");
}

double condition_estimate(const CsrMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("condition estimate: matrix must be square");
  const int n = a.rows();
  std::mt19937 rng(20240717u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double tol = 1e-6;
  const int max_iter = 500;

  std::vector<double> v(n), w(n), u(n);
  for (double& x : v) x = gauss(rng);
  double scale = norm2(v);
  for (double& x : v) x /= scale;

  double sigma_max = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    a.multiply(v, w);
    const double sigma = norm2(w);
    a.multiply_transpose(w, u);
    const double un = norm2(u);
    if (un == 0.0) return a.nnz() == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) v[i] = u[i] / un;
    if (it > 0 && std::abs(sigma - sigma_max) <= tol * sigma) {
      sigma_max = sigma;
      break;
    }
    sigma_max = sigma;
  }

  DenseLu lu;
  try {
    lu.factor(to_dense(a));
  } catch (const SingularMatrix&) {
    return std::numeric_limits<double>::infinity();
  }
  for (double& x : v) x = gauss(rng);
  scale = norm2(v);
  for (double& x : v) x /= scale;
  double lambda = 0.0;  // dominant eigenvalue of (A^T A)^{-1} = 1 / sigma_min^2
  for (int it = 0; it < max_iter; ++it) {
    const std::vector<double> y = lu.solve_transpose(v);
    w = lu.solve(y);
    const double wn = norm2(w);
    if (wn == 0.0 || !std::isfinite(wn)) return std::numeric_limits<double>::infinity();
    const bool done = it > 0 && std::abs(wn - lambda) <= tol * wn;
    lambda = wn;
    for (int i = 0; i < n; ++i) v[i] = w[i] / wn;
    if (done) break;
  }
  return sigma_max * std::sqrt(lambda);
}

}  // namespace stokeslip
