// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sfvem/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sfvem {

enum class MeshFamilyTag { Quad, Pentagon, ConcaveOctagon };

/// One of the three polygonal tessellation families of the unit square:
/// uniform quadrilaterals, convex-concave pentagon pairs, concave octagons.
struct MeshFamily {
  MeshFamilyTag tag = MeshFamilyTag::Quad;
  double delta = 0.0;  // displacement as a fraction of the cell width, in [0, 0.25]

  static MeshFamily quad() { return {MeshFamilyTag::Quad, 0.0}; }
  static MeshFamily pentagon(double delta = 0.1) { return {MeshFamilyTag::Pentagon, delta}; }
  static MeshFamily concave_octagon(double delta = 0.15) {
    return {MeshFamilyTag::ConcaveOctagon, delta};
  }
};

MeshFamily mesh_family_from_name(const std::string& name);
std::string mesh_family_name(MeshFamilyTag tag);

struct CellGeometry {
  Vec2 centroid = Vec2::Zero();
  double diameter = 0.0;
  double area = 0.0;
  Vec2 star_point = Vec2::Zero();
  bool degenerate = false;  // zero/negative area, non-simple, or empty kernel
};

struct EdgeRecord {
  int v0 = -1, v1 = -1;           // v0 < v1; orientation v0->v1 is the global one
  int left_cell = -1, right_cell = -1;
  bool boundary = false;
};

/// Conforming polygonal tessellation with adjacency, boundary flags, and
/// per-cell geometry cache. Immutable after construction.
class PolygonMesh {
 public:
  /// Build adjacency and geometry from raw vertices and CCW cell cycles.
  /// Throws on topological defects (an edge traversed twice in the same
  /// direction or shared by more than two cells). Geometric defects are
  /// recorded per cell and surface through validate_mesh.
  static PolygonMesh from_cells(std::vector<Vec2> vertices,
                                std::vector<std::vector<int>> cells);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const Vec2& vertex(int v) const { return vertices_[v]; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<int>& cell(int c) const { return cells_[c]; }
  const EdgeRecord& edge(int e) const { return edges_[e]; }
  const CellGeometry& cell_geometry(int c) const { return geometry_[c]; }

  /// Global edge index of cell side j (from cell vertex j to j+1).
  int cell_edge(int c, int j) const { return cell_edges_[c][j]; }
  /// True when side j of cell c runs opposite to the global edge orientation.
  bool cell_edge_reversed(int c, int j) const { return cell_edge_reversed_[c][j]; }

  bool vertex_on_boundary(int v) const { return boundary_vertex_[v]; }
  bool edge_on_boundary(int e) const { return edges_[e].boundary; }

  std::vector<Vec2> cell_vertices(int c) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::vector<int>> cells_;
  std::vector<EdgeRecord> edges_;
  std::vector<std::vector<int>> cell_edges_;
  std::vector<std::vector<bool>> cell_edge_reversed_;
  std::vector<bool> boundary_vertex_;
  std::vector<CellGeometry> geometry_;
};

struct ValidationReport {
  bool passed = false;
  double min_star_ratio = 0.0;  // min over cells of kernel inradius / h_E
  double min_edge_ratio = 0.0;  // min over cells of shortest edge / h_E
  int max_vertex_count = 0;
  std::vector<int> offending_cells;
};

/// Generate one of the three mesh families at refinement n (n x n grid).
/// Throws std::invalid_argument for out-of-range delta and std::runtime_error
/// naming the first bad cell if the construction produces a non-simple or
/// non-star-shaped polygon.
PolygonMesh generate_mesh(MeshFamily family, int n);

/// Check the shape-regularity ratios against the constant c_T and report
/// structurally broken cells. Never throws on geometric defects.
ValidationReport validate_mesh(const PolygonMesh& mesh, double c_T);

/// h = max over cells of the cell diameter.
double mesh_size(const PolygonMesh& mesh);

/// Text format: line 1 "NV NC", then NV lines "x y", then NC lines
/// "m i1 ... im" with 0-based CCW vertex indices.
void write_mesh(std::ostream& os, const PolygonMesh& mesh);
PolygonMesh read_mesh(std::istream& is);
void write_mesh_file(const std::string& path, const PolygonMesh& mesh);
PolygonMesh read_mesh_file(const std::string& path);

}  // namespace sfvem
