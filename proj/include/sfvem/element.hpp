// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sfvem/mesh.hpp"

#include <vector>

namespace sfvem {

/// Standalone copy of one polygonal cell with its geometry cache. Small
/// enough to pass by value; projection and quadrature work on this type so
/// single cells can be exercised without a mesh.
struct Element {
  std::vector<Vec2> vertices;  // CCW
  Vec2 centroid = Vec2::Zero();
  double diameter = 0.0;
  double area = 0.0;
  Vec2 star_point = Vec2::Zero();

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  Vec2 edge_start(int j) const { return vertices[j]; }
  Vec2 edge_end(int j) const { return vertices[(j + 1) % vertices.size()]; }

  /// Build from raw CCW vertices; computes centroid, diameter, area and a
  /// star point. Throws if the polygon is not simple or has empty kernel.
  static Element from_vertices(std::vector<Vec2> vertices);

  static Element from_mesh_cell(const PolygonMesh& mesh, int cell);

  /// Unit square [0,1]^2, handy in tests.
  static Element unit_square();
};

}  // namespace sfvem
