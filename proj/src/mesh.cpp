#include "stokeslip/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace stokeslip {

double triangle_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * cross(b - a, c - a); }

double triangle_quality(Vec2 a, Vec2 b, Vec2 c) {
  const double la = norm(b - a), lb = norm(c - b), lc = norm(a - c);
  const double s = 0.5 * (la + lb + lc);
  const double area = triangle_area(a, b, c);
  const double diameter = std::max({la, lb, lc});
  if (!(s > 0.0) || !(diameter > 0.0)) return 0.0;
  return area / s / diameter;  // inradius (area / s) over longest edge
}

void finalize_mesh(Mesh& mesh) {
  const int nv = mesh.n_vertices();
  if (nv < 3 || mesh.triangles.empty()) throw TopologyError("mesh has too few vertices or triangles");

  for (const auto& t : mesh.triangles) {
    for (int v : t) {
      if (v < 0 || v >= nv) throw TopologyError("triangle references a vertex out of range");
    }
    if (!(triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) > 0.0)) {
      throw TopologyError("triangle with non-positive area (orientation or degeneracy)");
    }
  }

  // Each directed edge may appear once; an undirected edge is interior when
  // both directions appear, boundary when only one does.
  std::map<std::pair<int, int>, int> directed;  // (a, b) -> triangle
  for (int ti = 0; ti < mesh.n_triangles(); ++ti) {
    const auto& t = mesh.triangles[ti];
    for (int e = 0; e < 3; ++e) {
      const auto key = std::make_pair(t[e], t[(e + 1) % 3]);
      if (!directed.emplace(key, ti).second) {
        throw TopologyError("directed edge appears twice (inconsistent orientation)");
      }
    }
  }

  mesh.boundary_edges.clear();
  mesh.is_boundary_vertex.assign(nv, 0);
  int n_edges = 0;
  for (const auto& [edge, tri] : directed) {
    if (edge.first < edge.second) ++n_edges;
    if (!directed.count({edge.second, edge.first})) {
      if (edge.first > edge.second) ++n_edges;  // boundary edge counted once
      mesh.boundary_edges.push_back({edge.first, edge.second, tri});
      mesh.is_boundary_vertex[edge.first] = 1;
      mesh.is_boundary_vertex[edge.second] = 1;
    }
  }

  const int euler = nv - n_edges + mesh.n_triangles();
  if (euler != 1) throw TopologyError("Euler characteristic is not 1 (not a triangulated disk)");
}

void validate_mesh(const Mesh& mesh) {
  Mesh copy = mesh;
  finalize_mesh(copy);
  if (copy.boundary_edges.size() != mesh.boundary_edges.size()) {
    throw TopologyError("stored boundary edges disagree with triangle connectivity");
  }
}

Mesh build_disk_mesh(int rings) {
  if (rings < 1) throw ConfigError("build_disk_mesh: rings must be >= 1");
  const int M = rings;
  Mesh mesh;
  mesh.vertices.push_back({0.0, 0.0});
  // Ring k starts at index 1 + 3k(k-1) and holds 6k vertices.
  for (int k = 1; k <= M; ++k) {
    const double r = static_cast<double>(k) / M;
    for (int j = 0; j < 6 * k; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / (6.0 * k);
      mesh.vertices.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
  }
  const auto ring_start = [](int k) { return 1 + 3 * k * (k - 1); };

  for (int j = 0; j < 6; ++j) {
    mesh.triangles.push_back({0, 1 + j, 1 + (j + 1) % 6});
  }
  for (int k = 2; k <= M; ++k) {
    const int si = ring_start(k - 1), so = ring_start(k);
    const int ni = 6 * (k - 1), no = 6 * k;
    for (int s = 0; s < 6; ++s) {
      // Sector s: k inner nodes, k + 1 outer nodes (endpoints shared with the
      // neighboring sectors).
      for (int j = 0; j < k; ++j) {
        const int o0 = so + (s * k + j) % no;
        const int o1 = so + (s * k + j + 1) % no;
        const int i0 = si + (s * (k - 1) + j) % ni;
        mesh.triangles.push_back({o0, o1, i0});
        if (j + 1 < k) {
          const int i1 = si + (s * (k - 1) + j + 1) % ni;
          mesh.triangles.push_back({i0, o1, i1});
        }
      }
    }
  }
  finalize_mesh(mesh);
  return mesh;
}

Mesh refine(const Mesh& mesh, const SmoothDomain& domain) {
  const auto undirected = [](int i, int j) {
    return std::make_pair(std::min(i, j), std::max(i, j));
  };
  std::map<std::pair<int, int>, int> boundary;
  for (const auto& e : mesh.boundary_edges) {
    boundary.emplace(undirected(e.a, e.b), 1);
  }

  Mesh out;
  out.vertices = mesh.vertices;
  std::map<std::pair<int, int>, int> midpoint_of;
  const auto midpoint = [&](int i, int j) {
    const auto key = undirected(i, j);
    const auto it = midpoint_of.find(key);
    if (it != midpoint_of.end()) return it->second;
    Vec2 m = 0.5 * (mesh.vertices[i] + mesh.vertices[j]);
    if (boundary.count(key)) m = domain.project(m).foot;  // keep boundary vertices on the curve
    const int idx = out.n_vertices();
    out.vertices.push_back(m);
    midpoint_of.emplace(key, idx);
    return idx;
  };

  out.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const int m01 = midpoint(t[0], t[1]);
    const int m12 = midpoint(t[1], t[2]);
    const int m20 = midpoint(t[2], t[0]);
    out.triangles.push_back({t[0], m01, m20});
    out.triangles.push_back({t[1], m12, m01});
    out.triangles.push_back({t[2], m20, m12});
    out.triangles.push_back({m01, m12, m20});
  }
  finalize_mesh(out);

  const MeshStats stats = mesh_stats(out);
  if (stats.min_quality < 0.10) {
    throw QualityDegradation("refinement dropped triangle quality below 0.10", stats.min_quality);
  }
  return out;
}

MeshStats mesh_stats(const Mesh& mesh) {
  MeshStats s;
  for (const auto& t : mesh.triangles) {
    const Vec2 a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
    s.h = std::max({s.h, norm(b - a), norm(c - b), norm(a - c)});
    const double q = triangle_quality(a, b, c);
    s.min_quality = (s.min_quality == 0.0) ? q : std::min(s.min_quality, q);
  }
  for (const auto& e : mesh.boundary_edges) {
    s.boundary_edge_max = std::max(s.boundary_edge_max, norm(mesh.vertices[e.b] - mesh.vertices[e.a]));
  }
  s.n_dof_p1 = 3 * mesh.n_vertices();
  s.n_dof_p1b = 3 * mesh.n_vertices() + 2 * mesh.n_triangles();
  return s;
}

double max_boundary_distance(const Mesh& mesh, const SmoothDomain& domain) {
  double worst = 0.0;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (!mesh.is_boundary_vertex[v]) continue;
    worst = std::max(worst, std::abs(domain.signed_distance(mesh.vertices[v])));
  }
  return worst;
}

void snap_boundary(Mesh& mesh, const SmoothDomain& domain) {
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (mesh.is_boundary_vertex[v]) mesh.vertices[v] = domain.project(mesh.vertices[v]).foot;
  }
}

Mesh scale_mesh(const Mesh& mesh, double sx, double sy) {
  if (!(sx > 0.0) || !(sy > 0.0)) throw ConfigError("scale_mesh: factors must be positive");
  Mesh out = mesh;
  for (auto& v : out.vertices) v = {sx * v.x, sy * v.y};
  finalize_mesh(out);
  return out;
}

void export_triangle(const Mesh& mesh, const std::string& node_path, const std::string& ele_path) {
  std::ofstream node(node_path);
  if (!node) throw std::ios_base::failure("cannot open " + node_path + " for writing");
  node << mesh.n_vertices() << " 2 0 1\n";
  char buf[80];
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    std::snprintf(buf, sizeof(buf), "%d %.17g %.17g %d\n", v + 1, mesh.vertices[v].x,
                  mesh.vertices[v].y, mesh.is_boundary_vertex[v] ? 1 : 0);
    node << buf;
  }
  if (!node.flush()) throw std::ios_base::failure("failed writing " + node_path);

  std::ofstream ele(ele_path);
  if (!ele) throw std::ios_base::failure("cannot open " + ele_path + " for writing");
  ele << mesh.n_triangles() << " 3 0\n";
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    ele << (t + 1) << ' ' << (tri[0] + 1) << ' ' << (tri[1] + 1) << ' ' << (tri[2] + 1) << '\n';
  }
  if (!ele.flush()) throw std::ios_base::failure("failed writing " + ele_path);
}

namespace {

// Reads the next non-comment, non-blank line; returns false at EOF.
bool next_data_line(std::istream& in, std::string& line, int& line_number) {
  while (std::getline(in, line)) {
    ++line_number;
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

Mesh import_triangle(const std::string& node_path, const std::string& ele_path) {
  std::ifstream node(node_path);
  if (!node) throw std::ios_base::failure("cannot open " + node_path);
  std::string line;
  int ln = 0;
  if (!next_data_line(node, line, ln)) throw ParseError("missing .node header", ln);
  int nv = 0, dim = 0, n_attr = 0, n_marker = 0;
  {
    std::istringstream h(line);
    if (!(h >> nv >> dim >> n_attr >> n_marker)) throw ParseError("malformed .node header", ln);
  }
  if (nv < 3) throw ParseError(".node header: vertex count must be >= 3", ln);
  if (dim != 2) throw ParseError(".node header: dimension must be 2", ln);
  if (n_attr != 0) throw ParseError(".node header: attributes are not supported", ln);
  if (n_marker != 0 && n_marker != 1) throw ParseError(".node header: marker column must be 0 or 1", ln);

  Mesh mesh;
  mesh.vertices.resize(nv);
  for (int i = 0; i < nv; ++i) {
    if (!next_data_line(node, line, ln)) throw ParseError("unexpected end of .node file", ln);
    std::istringstream row(line);
    int idx = 0;
    double x = 0.0, y = 0.0;
    if (!(row >> idx >> x >> y)) throw ParseError("malformed .node row", ln);
    if (n_marker == 1) {
      int marker = 0;
      if (!(row >> marker)) throw ParseError("missing boundary marker in .node row", ln);
    }
    if (idx != i + 1) throw ParseError(".node indices must be 1-based and contiguous", ln);
    mesh.vertices[i] = {x, y};
  }

  std::ifstream ele(ele_path);
  if (!ele) throw std::ios_base::failure("cannot open " + ele_path);
  ln = 0;
  if (!next_data_line(ele, line, ln)) throw ParseError("missing .ele header", ln);
  int nt = 0, nodes_per_tri = 0, ele_attr = 0;
  {
    std::istringstream h(line);
    if (!(h >> nt >> nodes_per_tri >> ele_attr)) throw ParseError("malformed .ele header", ln);
  }
  if (nt < 1) throw ParseError(".ele header: triangle count must be >= 1", ln);
  if (nodes_per_tri != 3) throw ParseError(".ele header: nodes per triangle must be 3", ln);
  if (ele_attr != 0) throw ParseError(".ele header: attributes are not supported", ln);

  mesh.triangles.resize(nt);
  for (int t = 0; t < nt; ++t) {
    if (!next_data_line(ele, line, ln)) throw ParseError("unexpected end of .ele file", ln);
    std::istringstream row(line);
    int idx = 0, a = 0, b = 0, c = 0;
    if (!(row >> idx >> a >> b >> c)) throw ParseError("malformed .ele row", ln);
    if (idx != t + 1) throw ParseError(".ele indices must be 1-based and contiguous", ln);
    if (a < 1 || a > nv || b < 1 || b > nv || c < 1 || c > nv) {
      throw ParseError(".ele row references a vertex out of range", ln);
    }
    mesh.triangles[t] = {a - 1, b - 1, c - 1};
  }

  finalize_mesh(mesh);  // throws TopologyError on structural violations
  return mesh;
}

}  // namespace stokeslip
