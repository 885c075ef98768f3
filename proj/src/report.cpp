#include "stokeslip/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stokeslip/errors.hpp"

namespace stokeslip {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> pts;  // positive (x, y)
};

double map_coord(double v, double lo, double hi, double p0, double p1) {
  return p0 + (v - lo) / (hi - lo) * (p1 - p0);
}

// Shared log-log chart scaffold: axes with decade ticks, one polyline with
// point markers per series, a legend, and a slope-annotated reference
// triangle whose legs are exact in log units.
std::string loglog_svg(const std::vector<Series>& series, const std::string& x_label,
                       const std::string& y_label, double tri_slope) {
  constexpr double kW = 640, kH = 480, kL = 80, kR = 620, kT = 24, kB = 430;

  double lx0 = 0.0, lx1 = 0.0, ly0 = 0.0, ly1 = 0.0;
  bool any = false;
  for (const auto& s : series)
    for (const auto& [x, y] : s.pts) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) continue;
      const double lx = std::log10(x), ly = std::log10(y);
      if (!any) {
        lx0 = lx1 = lx;
        ly0 = ly1 = ly;
        any = true;
      } else {
        lx0 = std::min(lx0, lx);
        lx1 = std::max(lx1, lx);
        ly0 = std::min(ly0, ly);
        ly1 = std::max(ly1, ly);
      }
    }
  if (!any) {
    lx0 = ly0 = -1.0;
    lx1 = ly1 = 1.0;
  }
  if (lx1 - lx0 < 1e-9) {
    lx0 -= 0.5;
    lx1 += 0.5;
  }
  if (ly1 - ly0 < 1e-9) {
    ly0 -= 0.5;
    ly1 += 0.5;
  }
  const double padx = 0.06 * (lx1 - lx0), pady = 0.08 * (ly1 - ly0);
  lx0 -= padx;
  lx1 += padx;
  ly0 -= pady;
  ly1 += pady;

  auto X = [&](double lx) { return map_coord(lx, lx0, lx1, kL, kR); };
  auto Y = [&](double ly) { return map_coord(ly, ly0, ly1, kB, kT); };
  auto px = [](double v) { return fmt("%.2f", v); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kR - kL << "\" height=\""
      << kB - kT << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // Decade ticks; thin to at most a dozen labels per axis.
  const int xstep = std::max(1, static_cast<int>((lx1 - lx0) / 12.0) + 1);
  for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1));
       e += xstep) {
    const double x = X(e);
    svg << "<line x1=\"" << px(x) << "\" y1=\"" << kB << "\" x2=\"" << px(x) << "\" y2=\""
        << kB + 5 << "\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << px(x) << "\" y=\"" << kB + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">1e" << e
        << "</text>\n";
  }
  const int ystep = std::max(1, static_cast<int>((ly1 - ly0) / 10.0) + 1);
  for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1));
       e += ystep) {
    const double y = Y(e);
    svg << "<line x1=\"" << kL - 5 << "\" y1=\"" << px(y) << "\" x2=\"" << kL << "\" y2=\""
        << px(y) << "\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << kL - 8 << "\" y=\"" << px(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e" << e
        << "</text>\n";
  }
  svg << "<text x=\"" << (kL + kR) / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
      << "</text>\n";
  svg << "<text x=\"16\" y=\"" << (kT + kB) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 "
      << (kT + kB) / 2 << ")\">" << y_label << "</text>\n";

  int idx = 0;
  for (const auto& s : series) {
    const char* color = kPalette[idx % 5];
    std::ostringstream pts;
    for (const auto& [x, y] : s.pts) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(y)) continue;
      pts << px(X(std::log10(x))) << "," << px(Y(std::log10(y))) << " ";
    }
    svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    for (const auto& [x, y] : s.pts) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(y)) continue;
      svg << "<circle cx=\"" << px(X(std::log10(x))) << "\" cy=\"" << px(Y(std::log10(y)))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    svg << "<text x=\"" << kR - 10 << "\" y=\"" << kT + 18 + 16 * idx
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
        << "\">" << s.label << "</text>\n";
    ++idx;
  }

  // Slope reference triangle: horizontal leg of run decades, vertical leg of
  // |slope| * run decades, hypotenuse carrying the nominal order.
  {
    const double run = std::min(0.30 * (lx1 - lx0), 0.60 * (ly1 - ly0) / std::abs(tri_slope));
    const double ax = lx0 + 0.55 * (lx1 - lx0);
    const double bx = ax + run;
    const double base = tri_slope > 0.0 ? ly0 + 0.10 * (ly1 - ly0) : ly1 - 0.10 * (ly1 - ly0);
    const double rise = tri_slope * run;
    svg << "<polygon points=\"" << px(X(ax)) << "," << px(Y(base)) << " " << px(X(bx)) << ","
        << px(Y(base)) << " " << px(X(bx)) << "," << px(Y(base + rise))
        << "\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << px(X(bx) + 6) << "\" y=\"" << px((Y(base) + Y(base + rise)) / 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#555555\">"
        << fmt("%g", std::abs(tri_slope)) << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

std::string format_g(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt("%.12g", v);
}

std::string rate_cell(double r) {
  if (std::isnan(r)) return "---";
  if (r < 0.0) return "(<0)";
  return fmt("%.2f", r);
}

std::string convergence_csv(const std::vector<ConvergenceRecord>& records) {
  std::ostringstream out;
  out << "level,h,dof,l2u,rate_l2u,h1u,rate_h1u,l2p,rate_l2p,iters,converged\n";
  for (const auto& r : records) {
    out << r.level << "," << format_g(r.h) << "," << r.n_dof << ","
        << format_g(r.errors.l2_velocity) << "," << format_g(r.rate_l2_velocity) << ","
        << format_g(r.errors.h1_velocity) << "," << format_g(r.rate_h1_velocity) << ","
        << format_g(r.errors.l2_pressure) << "," << format_g(r.rate_l2_pressure) << ","
        << r.solve.iterations << "," << (r.solve.converged ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string convergence_markdown(const std::vector<LabeledStudy>& studies) {
  std::ostringstream out;
  out << "| level | h |";
  for (const auto& s : studies) out << " " << s.label << " H1 error | rate |";
  out << "\n|---|---|";
  for (size_t i = 0; i < studies.size(); ++i) out << "---|---|";
  out << "\n";

  size_t levels = 0;
  for (const auto& s : studies) levels = std::max(levels, s.records.size());
  for (size_t l = 0; l < levels; ++l) {
    double h = 0.0;
    for (const auto& s : studies)
      if (l < s.records.size()) h = s.records[l].h;
    out << "| " << l << " | " << fmt("%.4g", h) << " |";
    for (const auto& s : studies) {
      if (l < s.records.size()) {
        const auto& r = s.records[l];
        out << " " << fmt("%.4g", r.errors.h1_velocity) << " | " << rate_cell(r.rate_h1_velocity)
            << " |";
      } else {
        out << "  |  |";
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string convergence_svg(const std::vector<LabeledStudy>& studies) {
  std::vector<Series> series;
  for (const auto& s : studies) {
    Series row{s.label, {}};
    for (const auto& r : s.records) row.pts.push_back({r.h, r.errors.h1_velocity});
    series.push_back(std::move(row));
  }
  return loglog_svg(series, "h", "H1 velocity error", 1.0);
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out << "eps,cond2,iters_gmres_r30,iters_gmres_r200,iters_bicgstab,conv_gmres,conv_bicgstab,"
         "lu_residual\n";
  for (const auto& r : sweep.rows) {
    const bool conv_gmres = r.gmres_r30.converged && r.gmres_r200.converged;
    out << format_g(r.epsilon) << "," << format_g(r.cond2) << "," << r.gmres_r30.iterations << ","
        << r.gmres_r200.iterations << "," << r.bicgstab.iterations << "," << (conv_gmres ? 1 : 0)
        << "," << (r.bicgstab.converged ? 1 : 0) << "," << format_g(r.lu_residual) << "\n";
  }
  return out.str();
}

std::string sweep_svg(const SweepResult& sweep) {
  Series s{"cond2", {}};
  for (const auto& r : sweep.rows)
    if (std::isfinite(r.cond2)) s.pts.push_back({r.epsilon, r.cond2});
  return loglog_svg({s}, "epsilon", "condition number", -2.0);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace stokeslip
