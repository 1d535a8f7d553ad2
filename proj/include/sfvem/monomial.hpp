// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sfvem/geometry.hpp"

#include <vector>

namespace sfvem {

/// 2D monomial exponent pair, enumerated in graded lexicographic order:
/// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
struct MultiIndex {
  int ax = 0, ay = 0;
  int total() const { return ax + ay; }
};

std::vector<MultiIndex> graded_multi_indices(int degree);

/// dim P_k in 2D = (k+1)(k+2)/2; zero for negative k.
inline int poly_space_dim(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }

/// Position of (ax, ay) in the graded ordering.
int multi_index_position(int ax, int ay);

/// Scaled monomials m_a(x) = ((x - x_E)/h_E)^a on an element with centroid
/// x_E and diameter h_E. The graded ordering is shared program-wide.
class MonomialBasis {
 public:
  MonomialBasis(const Vec2& center, double hscale, int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(alphas_.size()); }
  const Vec2& center() const { return center_; }
  double hscale() const { return hscale_; }
  const MultiIndex& index(int i) const { return alphas_[i]; }

  double value(int i, const Vec2& p) const;
  Vec2 gradient(int i, const Vec2& p) const;
  double laplacian(int i, const Vec2& p) const;

  /// Value table: (#points x size).
  Eigen::MatrixXd values(const std::vector<Vec2>& points) const;
  /// Gradient component tables d/dx and d/dy, each (#points x size).
  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gradients(const std::vector<Vec2>& points) const;

  /// Exact coefficients of d m_a / d x_axis in the degree-(k-1) basis:
  /// matrix of shape (dim P_{k-1} x size).
  Eigen::MatrixXd derivative_map(int axis) const;
  /// Exact coefficients of Laplacian(m_a) in the degree-(k-2) basis.
  Eigen::MatrixXd laplacian_map() const;

 private:
  Vec2 center_;
  double hscale_;
  int degree_;
  std::vector<MultiIndex> alphas_;
};

/// 1D scaled monomials on an oriented edge a->b: m_j(x(t)) = t^j with
/// x(t) = midpoint + t (b - a), t in [-1/2, 1/2].
class EdgeMonomialBasis {
 public:
  EdgeMonomialBasis(const Vec2& a, const Vec2& b, int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  double length() const { return length_; }
  const Vec2& midpoint() const { return midpoint_; }

  /// Edge parameter of a point assumed to lie on the edge.
  double param(const Vec2& p) const;
  Vec2 point(double t) const { return midpoint_ + t * span_; }
  double value(int j, double t) const;

 private:
  Vec2 midpoint_;
  Vec2 span_;  // b - a
  double length_;
  int degree_;
};

}  // namespace sfvem
