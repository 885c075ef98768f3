#pragma once

#include <string>
#include <vector>

#include "stokeslip/analysis.hpp"

namespace stokeslip {

// Shortest deterministic decimal rendering used by every CSV writer, so
// identical runs reproduce byte-identical files.
std::string format_g(double v);

// Rate column convention: first level renders "---", a negative observed
// order renders "(<0)", otherwise two decimals.
std::string rate_cell(double r);

// Schema: level,h,dof,l2u,rate_l2u,h1u,rate_h1u,l2p,rate_l2p,iters,converged
std::string convergence_csv(const std::vector<ConvergenceRecord>& records);

struct LabeledStudy {
  std::string label;
  std::vector<ConvergenceRecord> records;
};

// Velocity-error comparison table: an H1 error and rate column pair per
// study, one row per refinement level.
std::string convergence_markdown(const std::vector<LabeledStudy>& studies);

// Log-log H1 error against h: one polyline per study plus a slope-1
// reference triangle. Self-contained SVG, no external assets.
std::string convergence_svg(const std::vector<LabeledStudy>& studies);

// Schema: eps,cond2,iters_gmres_r30,iters_gmres_r200,iters_bicgstab,
//         conv_gmres,conv_bicgstab,lu_residual
// conv_gmres reports 1 only when both restart lengths converged.
std::string sweep_csv(const SweepResult& sweep);

// Log-log condition number against epsilon with a slope -2 reference
// triangle.
std::string sweep_svg(const SweepResult& sweep);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace stokeslip
