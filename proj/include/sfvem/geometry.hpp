// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace sfvem {

using Vec2 = Eigen::Vector2d;

/// z-component of the 2D cross product (b - a) x (c - a).
inline double cross2(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

/// Signed area of a polygon (positive for counter-clockwise orientation).
double polygon_signed_area(const std::vector<Vec2>& poly);

/// Area-weighted centroid. Requires nonzero area.
Vec2 polygon_centroid(const std::vector<Vec2>& poly);

/// Diameter of the polygon = maximum pairwise vertex distance.
double polygon_diameter(const std::vector<Vec2>& poly);

/// True if the closed polyline has no self-intersections, no repeated
/// vertices, and positive signed area.
bool polygon_is_simple(const std::vector<Vec2>& poly);

/// Kernel of a CCW polygon (set of points seeing the whole interior),
/// each bounding half-plane shifted inward by `inset`. Empty result means
/// the inset kernel is empty.
std::vector<Vec2> polygon_kernel(const std::vector<Vec2>& poly, double inset = 0.0);

/// True if p lies in the kernel of the CCW polygon with margin >= -tol.
bool point_in_kernel(const std::vector<Vec2>& poly, const Vec2& p, double tol = 1e-12);

struct StarPoint {
  Vec2 point;     // a point of the kernel, as deep as possible
  double radius;  // radius of the largest ball contained in the kernel
};

/// Deepest kernel point of a CCW polygon (centroid when it already lies
/// comfortably inside the kernel, else a Chebyshev-style center found by
/// bisection on the inset radius). nullopt when the kernel is empty.
std::optional<StarPoint> polygon_star_point(const std::vector<Vec2>& poly);

/// Largest inset radius r such that the r-inset kernel is nonempty.
double polygon_kernel_radius(const std::vector<Vec2>& poly);

}  // namespace sfvem
