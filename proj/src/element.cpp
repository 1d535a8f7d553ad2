// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "sfvem/element.hpp"

#include <stdexcept>

namespace sfvem {

Element Element::from_vertices(std::vector<Vec2> vertices) {
  Element e;
  e.vertices = std::move(vertices);
  e.area = polygon_signed_area(e.vertices);
  if (e.area <= 0.0 || !polygon_is_simple(e.vertices))
    throw std::runtime_error("Element: polygon is not simple with positive CCW area");
  e.centroid = polygon_centroid(e.vertices);
  e.diameter = polygon_diameter(e.vertices);
  const auto star = polygon_star_point(e.vertices);
  if (!star) throw std::runtime_error("Element: polygon is not star-shaped");
  e.star_point = star->point;
  return e;
}

Element Element::from_mesh_cell(const PolygonMesh& mesh, int cell) {
  const CellGeometry& g = mesh.cell_geometry(cell);
  if (g.degenerate)
    throw std::runtime_error("Element: cell " + std::to_string(cell) + " is degenerate");
  Element e;
  e.vertices = mesh.cell_vertices(cell);
  e.centroid = g.centroid;
  e.diameter = g.diameter;
  e.area = g.area;
  e.star_point = g.star_point;
  return e;
}

Element Element::unit_square() {
  return from_vertices({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)});
}

}  // namespace sfvem
