// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sfvem/monomial.hpp"

#include <vector>

namespace sfvem {

/// Vector polynomial space (x - x_E) P_{k-2} + curl P_{k+ell} on one element,
/// spanned by the generators
///   g = (x - x_E) m_a            for |a| <= k-2   ("x part"), then
///   g = curl m_a = (dm_a/dy, -dm_a/dx)  for 1 <= |a| <= k+ell,
/// both in graded order. The same space equals [P_{k-1}]^2 + curl of the
/// degrees above k, so it contains every gradient of P_k. Components are
/// stored as exact coefficient columns over the element monomial basis of
/// degree max(k-1, k+ell-1); divergences are exact coefficient columns over
/// the degree-(k-2) basis and vanish on every curl generator.
struct PklBasis {
  int k = 2;
  int ell = 0;
  int n_x = 0;     // dim P_{k-2}
  int n_curl = 0;  // dim P_{k+ell} - 1
  MonomialBasis component_basis;           // shared by both components
  Eigen::MatrixXd coeff_x, coeff_y;        // (component_basis.size() x size())
  Eigen::MatrixXd divergence_coefficients; // (dim P_{k-2} x size())

  int size() const { return n_x + n_curl; }
  bool is_curl_generator(int g) const { return g >= n_x; }

  /// Component value tables at the given points, each (#points x size()).
  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> values(const std::vector<Vec2>& points) const;
};

/// Assemble the generator list for degree k >= 2 and enrichment ell >= 0 on
/// an element with centroid `center` and diameter `hscale`.
PklBasis build_pkl_basis(const Vec2& center, double hscale, int k, int ell);

/// Exact divergence of generator g expressed in the degree-(k-2) monomial
/// basis (zero vector for curl generators).
Eigen::VectorXd pkl_divergence(const PklBasis& basis, int g);

/// Coordinates of the gradient of each degree-k monomial in the generator
/// list: matrix G with columns indexed like P_k such that for every a,
/// grad m_a = sum_g G(g, a) * generator_g. Exact up to roundoff since
/// grad P_k is contained in the span.
Eigen::MatrixXd pkl_gradient_coordinates(const PklBasis& basis);

}  // namespace sfvem
