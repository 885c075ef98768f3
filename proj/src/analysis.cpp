#include "stokeslip/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stokeslip/diagnostics.hpp"
#include "stokeslip/errors.hpp"
#include "stokeslip/quadrature.hpp"

namespace stokeslip {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct TriFrame {
  Vec2 v[3];
  double area = 0.0;
  Vec2 grad[3];  // barycentric gradients
};

TriFrame tri_frame(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  TriFrame f;
  for (int k = 0; k < 3; ++k) f.v[k] = mesh.vertices[tri[k]];
  f.area = triangle_area(f.v[0], f.v[1], f.v[2]);
  const double s = 1.0 / (2.0 * f.area);
  f.grad[0] = Vec2{(f.v[1].y - f.v[2].y) * s, (f.v[2].x - f.v[1].x) * s};
  f.grad[1] = Vec2{(f.v[2].y - f.v[0].y) * s, (f.v[0].x - f.v[2].x) * s};
  f.grad[2] = Vec2{(f.v[0].y - f.v[1].y) * s, (f.v[1].x - f.v[0].x) * s};
  return f;
}

Vec2 edge_velocity(const DofMap& dofs, const std::vector<double>& x, const BoundaryEdge& e,
                   double t) {
  // Bubbles vanish on edges, so the trace is the linear interpolant.
  Vec2 ua{x[dofs.velocity_dof(e.a, 0)], x[dofs.velocity_dof(e.a, 1)]};
  Vec2 ub{x[dofs.velocity_dof(e.b, 0)], x[dofs.velocity_dof(e.b, 1)]};
  return (1.0 - t) * ua + t * ub;
}

}  // namespace

ErrorReport error_norms(const Mesh& mesh, const DofMap& dofs, const std::vector<double>& x,
                        const ManufacturedCase& mc) {
  ErrorReport rep;
  double l2u2 = 0.0, semi2 = 0.0, int_dp = 0.0, int_dp2 = 0.0, area_total = 0.0;
  const auto rule = triangle_rule(5);

  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const TriFrame f = tri_frame(mesh, t);
    const auto& tri = mesh.triangles[t];
    Vec2 uv[3];
    double pv[3];
    for (int k = 0; k < 3; ++k) {
      uv[k] = Vec2{x[dofs.velocity_dof(tri[k], 0)], x[dofs.velocity_dof(tri[k], 1)]};
      pv[k] = x[dofs.pressure_dof(tri[k])];
    }
    Vec2 ub{0.0, 0.0};
    if (dofs.bubbles) ub = Vec2{x[dofs.bubble_dof(t, 0)], x[dofs.bubble_dof(t, 1)]};

    for (const auto& q : rule) {
      const double l[3] = {q.l0, q.l1, q.l2};
      const Vec2 xq = l[0] * f.v[0] + l[1] * f.v[1] + l[2] * f.v[2];
      const double w = q.w * f.area;

      Vec2 uh = l[0] * uv[0] + l[1] * uv[1] + l[2] * uv[2];
      // Row-major gradient [du0/dx, du0/dy, du1/dx, du1/dy].
      double gh[4] = {0.0, 0.0, 0.0, 0.0};
      for (int k = 0; k < 3; ++k) {
        gh[0] += uv[k].x * f.grad[k].x;
        gh[1] += uv[k].x * f.grad[k].y;
        gh[2] += uv[k].y * f.grad[k].x;
        gh[3] += uv[k].y * f.grad[k].y;
      }
      if (dofs.bubbles) {
        const double phi = 27.0 * l[0] * l[1] * l[2];
        const Vec2 gphi = 27.0 * (l[1] * l[2] * f.grad[0] + l[0] * l[2] * f.grad[1] +
                                  l[0] * l[1] * f.grad[2]);
        uh = uh + phi * ub;
        gh[0] += ub.x * gphi.x;
        gh[1] += ub.x * gphi.y;
        gh[2] += ub.y * gphi.x;
        gh[3] += ub.y * gphi.y;
      }

      const Vec2 du = uh - mc.velocity(xq);
      const auto ge = mc.velocity_gradient(xq);
      l2u2 += w * dot(du, du);
      for (int c = 0; c < 4; ++c) {
        const double d = gh[c] - ge[c];
        semi2 += w * d * d;
      }

      const double dp = l[0] * pv[0] + l[1] * pv[1] + l[2] * pv[2] - mc.pressure(xq);
      int_dp += w * dp;
      int_dp2 += w * dp * dp;
      area_total += w;
    }
  }

  rep.l2_velocity = std::sqrt(l2u2);
  rep.h1_velocity = std::sqrt(l2u2 + semi2);
  rep.k_h = int_dp / area_total;
  // ||(p + k_h) - p_h||^2 = int dp^2 - (int dp)^2 / |Omega| with dp = p_h - p.
  rep.l2_pressure = std::sqrt(std::max(0.0, int_dp2 - int_dp * int_dp / area_total));

  const SlipReport slip = boundary_slip_report(mesh, dofs, x);
  rep.boundary_penetration = slip.penetration;
  rep.boundary_speed = slip.speed;
  return rep;
}

SlipReport boundary_slip_report(const Mesh& mesh, const DofMap& dofs,
                                const std::vector<double>& x) {
  SlipReport rep;
  const auto gauss = edge_rule(3);
  double speed_sum = 0.0;
  for (const auto& e : mesh.boundary_edges) {
    const Vec2 n = boundary_edge_normal(mesh, e);
    for (const auto& q : gauss)
      rep.penetration = std::max(rep.penetration, std::abs(dot(edge_velocity(dofs, x, e, q.t), n)));
    speed_sum += norm(edge_velocity(dofs, x, e, 0.5));
  }
  if (!mesh.boundary_edges.empty()) rep.speed = speed_sum / static_cast<double>(mesh.boundary_edges.size());
  return rep;
}

LambdaRecovery recover_lambda(const Mesh& mesh, const DofMap& dofs,
                              const std::vector<double>& x, const ManufacturedCase& mc,
                              double epsilon, PenaltyScheme scheme) {
  if (epsilon <= 0.0) throw ConfigError("recover_lambda: epsilon must be positive");
  LambdaRecovery rec;
  rec.scheme = scheme;
  for (const auto& e : mesh.boundary_edges) {
    const Vec2 n = boundary_edge_normal(mesh, e);
    const Vec2 pa = mesh.vertices[e.a];
    const Vec2 pb = mesh.vertices[e.b];
    if (scheme == PenaltyScheme::Full) {
      const double la = (dot(edge_velocity(dofs, x, e, 0.0), n) - mc.boundary_flux(pa)) / epsilon;
      const double lb = (dot(edge_velocity(dofs, x, e, 1.0), n) - mc.boundary_flux(pb)) / epsilon;
      rec.endpoint_values.push_back({la, lb});
    } else {
      const Vec2 m = 0.5 * (pa + pb);
      rec.midpoint_values.push_back(
          (dot(edge_velocity(dofs, x, e, 0.5), n) - mc.boundary_flux(m)) / epsilon);
    }
  }
  return rec;
}

double rate(double e_prev, double e_cur, double h_prev, double h_cur) {
  if (!(h_prev > 0.0) || !(h_cur > 0.0) || h_prev == h_cur) return kNaN;
  if (!(e_prev > 0.0) || !(e_cur > 0.0)) return kNaN;
  return std::log(e_prev / e_cur) / std::log(h_prev / h_cur);
}

double fit_rate(const std::vector<std::pair<double, double>>& h_and_e) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const auto& [h, e] : h_and_e) {
    if (!(h > 0.0) || !(e > 0.0) || !std::isfinite(h) || !std::isfinite(e)) continue;
    const double lx = std::log(h), ly = std::log(e);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return kNaN;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return kNaN;
  return (n * sxy - sx * sy) / denom;
}

double EpsRule::eval(double h) const {
  switch (kind) {
    case Kind::PropH:
      return 0.1 * h;
    case Kind::PropH2:
      return 0.1 * h * h;
    case Kind::Fixed:
      return value;
  }
  return value;
}

EpsRule EpsRule::prop_h() { return EpsRule{Kind::PropH, 0.0}; }
EpsRule EpsRule::prop_h2() { return EpsRule{Kind::PropH2, 0.0}; }
EpsRule EpsRule::fixed(double eps) {
  if (eps <= 0.0) throw ConfigError("fixed epsilon must be positive");
  return EpsRule{Kind::Fixed, eps};
}

std::vector<ConvergenceRecord> convergence_study(const Mesh& base_mesh, const SmoothDomain& domain,
                                                 const ManufacturedCase& mc, ElementChoice element,
                                                 Comparator comparator, EpsRule eps_rule,
                                                 const SolverConfig& solver, int levels) {
  if (levels < 2) throw ConfigError("convergence_study: at least 2 levels are needed for rates");
  std::vector<ConvergenceRecord> out;
  Mesh mesh = base_mesh;
  for (int level = 0; level < levels; ++level) {
    if (level > 0) mesh = refine(mesh, domain);
    const MeshStats stats = mesh_stats(mesh);

    ConvergenceRecord rec;
    rec.level = level;
    rec.h = stats.h;

    if (comparator == Comparator::Dirichlet) {
      const ConstrainedSystem sys = build_dirichlet_system(mesh, mc, element);
      rec.n_dof = sys.dofs.n_total();
      rec.epsilon = 0.0;
      const SolveResult res = solve_linear(sys.matrix, sys.rhs, solver);
      rec.solve = res.report;
      rec.errors = error_norms(mesh, sys.dofs, res.x, mc);
    } else {
      const PenaltyScheme scheme =
          comparator == Comparator::PenaltyFull ? PenaltyScheme::Full : PenaltyScheme::Reduced;
      rec.epsilon = eps_rule.eval(stats.h);
      const SaddleSystem sys = build_saddle_system(mesh, mc, element, rec.epsilon, scheme);
      rec.n_dof = sys.dofs.n_total();
      const SolveResult res = solve_linear(sys.full_matrix(), sys.full_rhs(), solver);
      rec.solve = res.report;
      rec.errors = error_norms(mesh, sys.dofs, res.x, mc);
    }

    if (out.empty()) {
      rec.rate_l2_velocity = kNaN;
      rec.rate_h1_velocity = kNaN;
      rec.rate_l2_pressure = kNaN;
    } else {
      const ConvergenceRecord& prev = out.back();
      rec.rate_l2_velocity = rate(prev.errors.l2_velocity, rec.errors.l2_velocity, prev.h, rec.h);
      rec.rate_h1_velocity = rate(prev.errors.h1_velocity, rec.errors.h1_velocity, prev.h, rec.h);
      rec.rate_l2_pressure = rate(prev.errors.l2_pressure, rec.errors.l2_pressure, prev.h, rec.h);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

SweepResult epsilon_sweep(const Mesh& mesh, const ManufacturedCase& mc, ElementChoice element,
                          PenaltyScheme scheme, const std::vector<double>& eps_list,
                          const SolverConfig& base) {
  SweepResult result;
  for (const double eps : eps_list) {
    const SaddleSystem sys = build_saddle_system(mesh, mc, element, eps, scheme);
    const CsrMatrix k = sys.full_matrix();
    const std::vector<double> b = sys.full_rhs();

    SweepRow row;
    row.epsilon = eps;
    row.cond2 = condition_estimate(k);

    SolverConfig g30 = base;
    g30.method = SolveMethod::Gmres;
    g30.restart = 30;
    g30.max_iter = 0;
    row.gmres_r30 = gmres_solve(k, b, g30).report;

    SolverConfig g200 = g30;
    g200.restart = 200;
    row.gmres_r200 = gmres_solve(k, b, g200).report;

    SolverConfig bi = base;
    bi.method = SolveMethod::Bicgstab;
    bi.max_iter = 0;
    row.bicgstab = bicgstab_solve(k, b, bi).report;

    SolverConfig lu = base;
    lu.method = SolveMethod::DenseLu;
    row.lu_residual = dense_lu_solve(k, b, lu).report.relative_residual;

    result.rows.push_back(std::move(row));
  }

  // Condition growth over the three smallest epsilons, as a slope in 1/eps.
  std::vector<SweepRow> sorted = result.rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.epsilon < b.epsilon; });
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : sorted) {
    if (pts.size() == 3) break;
    if (std::isfinite(row.cond2)) pts.push_back({1.0 / row.epsilon, row.cond2});
  }
  result.cond_slope = fit_rate(pts);
  return result;
}

}  // namespace stokeslip
