// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sfvem/element.hpp"

#include <vector>

namespace sfvem {

/// Highest exactness degree build_cell_rule / build_edge_rule accept.
constexpr int kMaxQuadratureDegree = 64;

struct Triangle {
  Vec2 a, b, c;
  double area = 0.0;
};

/// Fan triangulation of a star-shaped cell from its stored star point.
/// All triangles have positive area; throws if the star point fails.
std::vector<Triangle> triangulate_cell(const Element& cell);

struct CellRule {
  std::vector<Vec2> points;
  Eigen::VectorXd weights;  // positive, summing to |E|
  int exactness = 0;
};

struct EdgeRule {
  std::vector<Vec2> points;
  Eigen::VectorXd weights;  // positive, summing to h_e
  int exactness = 0;
};

/// Composite rule over the fan triangles, exact for polynomials of total
/// degree <= exactness. Built from a conical product (Gauss-Jacobi x
/// Gauss-Legendre) rule per triangle, so all weights are positive.
CellRule build_cell_rule(const Element& cell, int exactness);

/// Gauss-Legendre rule with ceil((exactness+1)/2) points mapped onto the
/// segment a->b; weights sum to the edge length.
EdgeRule build_edge_rule(const Vec2& a, const Vec2& b, int exactness);

/// Gauss-Legendre nodes/weights on [0,1] (weights sum to 1).
void gauss_legendre_01(int npoints, Eigen::VectorXd& x, Eigen::VectorXd& w);

/// Gauss-Jacobi nodes/weights for the weight (1-x) on [0,1]
/// (weights sum to 1/2).
void gauss_jacobi_10_01(int npoints, Eigen::VectorXd& x, Eigen::VectorXd& w);

/// Default exactness used by the projection/assembly pipeline.
inline int default_cell_exactness(int k, int ell) { return 2 * (k + ell) + 2; }
inline int default_edge_exactness(int k, int ell) { return 2 * k + ell + 2; }

}  // namespace sfvem
