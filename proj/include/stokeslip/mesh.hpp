#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stokeslip/geometry.hpp"

namespace stokeslip {

// Boundary edge directed so the domain lies on its left; (a, b) appear
// consecutively in the counterclockwise vertex list of triangle tri.
struct BoundaryEdge {
  int a = 0;
  int b = 0;
  int tri = 0;
};

// Conforming triangulation with positively oriented (counterclockwise)
// triangles. boundary_edges and the vertex flags are derived data kept in
// sync by the builders in this header.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<std::uint8_t> is_boundary_vertex;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
};

struct MeshStats {
  double h = 0.0;                 // longest edge
  double min_quality = 0.0;       // min over triangles of inradius / longest side
  double boundary_edge_max = 0.0;
  int n_dof_p1 = 0;               // 2 velocity dofs per vertex + 1 pressure dof per vertex
  int n_dof_p1b = 0;              // adds 2 bubble dofs per triangle
};

double triangle_area(Vec2 a, Vec2 b, Vec2 c);
double triangle_quality(Vec2 a, Vec2 b, Vec2 c);

// Populates boundary edges, vertex flags; throws TopologyError on violations
// (non-positive areas, non-manifold edges, wrong Euler characteristic).
void finalize_mesh(Mesh& mesh);

// Structural validation of an already finalized mesh.
void validate_mesh(const Mesh& mesh);

// Concentric-ring triangulation of the unit disk: ring k of M at radius k/M
// carries 6k equally spaced vertices, giving 1 + 3M(M+1) vertices, 6M^2
// triangles, and 6M boundary edges, all boundary vertices exactly on the
// unit circle.
Mesh build_disk_mesh(int rings);

// Red refinement: every triangle splits into four via edge midpoints;
// midpoints of boundary edges are projected onto the domain boundary so the
// refined mesh keeps its boundary vertices on the curve. Throws
// QualityDegradation if the refined min quality drops below 0.10.
Mesh refine(const Mesh& mesh, const SmoothDomain& domain);

MeshStats mesh_stats(const Mesh& mesh);

// Max |signed distance| over boundary vertices; the mesh hypotheses require
// this to be at most 1e-12.
double max_boundary_distance(const Mesh& mesh, const SmoothDomain& domain);

// Projects every boundary vertex onto the domain boundary (used after
// importing externally generated meshes).
void snap_boundary(Mesh& mesh, const SmoothDomain& domain);

// Anisotropic scaling (x, y) -> (sx * x, sy * y); orientation-preserving for
// positive factors. Used to derive elliptical meshes from disk meshes.
Mesh scale_mesh(const Mesh& mesh, double sx, double sy);

// Triangle-format mesh files (.node / .ele), 1-based indices, coordinates
// written losslessly. The .node boundary marker column carries the
// boundary-vertex flag.
void export_triangle(const Mesh& mesh, const std::string& node_path, const std::string& ele_path);
Mesh import_triangle(const std::string& node_path, const std::string& ele_path);

}  // namespace stokeslip
