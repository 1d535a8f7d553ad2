// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "sfvem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sfvem {

double polygon_signed_area(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % m];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * twice;
}

Vec2 polygon_centroid(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  Vec2 acc = Vec2::Zero();
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % m];
    const double w = a.x() * b.y() - b.x() * a.y();
    twice += w;
    acc += w * (a + b);
  }
  return acc / (3.0 * twice);
}

double polygon_diameter(const std::vector<Vec2>& poly) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j)
      d2 = std::max(d2, (poly[i] - poly[j]).squaredNorm());
  return std::sqrt(d2);
}

namespace {

// Proper or improper intersection of open segments (a,b) and (c,d),
// ignoring contacts at shared endpoints.
bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double d1 = cross2(c, d, a);
  const double d2 = cross2(c, d, b);
  const double d3 = cross2(a, b, c);
  const double d4 = cross2(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  return false;
}

}  // namespace

bool polygon_is_simple(const std::vector<Vec2>& poly) {
  const std::size_t m = poly.size();
  if (m < 3) return false;
  if (polygon_signed_area(poly) <= 0.0) return false;
  const double scale = polygon_diameter(poly);
  for (std::size_t i = 0; i < m; ++i)
    if ((poly[i] - poly[(i + 1) % m]).norm() <= 1e-14 * std::max(1.0, scale))
      return false;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      // Skip edges sharing a vertex.
      if (j == i || (j + 1) % m == i || (i + 1) % m == j) continue;
      if (segments_cross(poly[i], poly[(i + 1) % m], poly[j], poly[(j + 1) % m]))
        return false;
    }
  }
  return true;
}

namespace {

// Clip a convex region by the half-plane n.(p - a) >= inset, n the inward
// unit normal of edge a->b of a CCW polygon.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& region, const Vec2& a,
                                 const Vec2& b, double inset) {
  Vec2 t = b - a;
  const double len = t.norm();
  if (len == 0.0) return region;
  const Vec2 n(-t.y() / len, t.x() / len);  // inward for CCW
  std::vector<Vec2> out;
  const std::size_t m = region.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& p = region[i];
    const Vec2& q = region[(i + 1) % m];
    const double dp = n.dot(p - a) - inset;
    const double dq = n.dot(q - a) - inset;
    if (dp >= 0.0) out.push_back(p);
    if ((dp > 0.0 && dq < 0.0) || (dp < 0.0 && dq > 0.0)) {
      const double s = dp / (dp - dq);
      out.push_back(p + s * (q - p));
    }
  }
  return out;
}

std::vector<Vec2> bounding_box(const std::vector<Vec2>& poly) {
  double x0 = std::numeric_limits<double>::max(), y0 = x0;
  double x1 = std::numeric_limits<double>::lowest(), y1 = x1;
  for (const Vec2& p : poly) {
    x0 = std::min(x0, p.x());
    y0 = std::min(y0, p.y());
    x1 = std::max(x1, p.x());
    y1 = std::max(y1, p.y());
  }
  return {Vec2(x0, y0), Vec2(x1, y0), Vec2(x1, y1), Vec2(x0, y1)};
}

}  // namespace

std::vector<Vec2> polygon_kernel(const std::vector<Vec2>& poly, double inset) {
  std::vector<Vec2> region = bounding_box(poly);
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m && !region.empty(); ++i)
    region = clip_halfplane(region, poly[i], poly[(i + 1) % m], inset);
  return region;
}

bool point_in_kernel(const std::vector<Vec2>& poly, const Vec2& p, double tol) {
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % m];
    Vec2 t = b - a;
    const double len = t.norm();
    if (len == 0.0) continue;
    const Vec2 n(-t.y() / len, t.x() / len);
    if (n.dot(p - a) < -tol) return false;
  }
  return true;
}

double polygon_kernel_radius(const std::vector<Vec2>& poly) {
  if (polygon_kernel(poly, 0.0).empty()) return 0.0;
  double lo = 0.0;
  double hi = 0.5 * polygon_diameter(poly);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (polygon_kernel(poly, mid).empty())
      hi = mid;
    else
      lo = mid;
  }
  return lo;
}

std::optional<StarPoint> polygon_star_point(const std::vector<Vec2>& poly) {
  const std::vector<Vec2> kernel = polygon_kernel(poly, 0.0);
  if (kernel.empty()) return std::nullopt;
  const double radius = polygon_kernel_radius(poly);
  if (radius <= 0.0) return std::nullopt;

  const Vec2 centroid = polygon_centroid(poly);
  const double margin = 1e-6 * polygon_diameter(poly);
  if (point_in_kernel(poly, centroid, 0.0) &&
      !polygon_kernel(poly, margin).empty() &&
      point_in_kernel(poly, centroid, -margin))
    return StarPoint{centroid, radius};

  // Deepest point: average of the kernel shrunk to near its inradius.
  std::vector<Vec2> deep = polygon_kernel(poly, 0.98 * radius);
  if (deep.empty()) deep = kernel;
  Vec2 p = Vec2::Zero();
  for (const Vec2& v : deep) p += v;
  p /= static_cast<double>(deep.size());
  return StarPoint{p, radius};
}

}  // namespace sfvem
