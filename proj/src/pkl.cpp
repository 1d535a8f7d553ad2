// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "sfvem/pkl.hpp"

#include <stdexcept>

namespace sfvem {

std::pair<Eigen::MatrixXd, Eigen::MatrixXd>
PklBasis::values(const std::vector<Vec2>& points) const {
  const Eigen::MatrixXd table = component_basis.values(points);
  return {table * coeff_x, table * coeff_y};
}

PklBasis build_pkl_basis(const Vec2& center, double hscale, int k, int ell) {
  if (k < 2) throw std::invalid_argument("build_pkl_basis: k must be >= 2");
  if (ell < 0) throw std::invalid_argument("build_pkl_basis: ell must be >= 0");

  const int comp_degree = std::max(k - 1, k + ell - 1);
  PklBasis basis{k, ell, poly_space_dim(k - 2), poly_space_dim(k + ell) - 1,
                 MonomialBasis(center, hscale, comp_degree),
                 Eigen::MatrixXd(), Eigen::MatrixXd(), Eigen::MatrixXd()};

  const int n_comp = basis.component_basis.size();
  const int n_gen = basis.size();
  basis.coeff_x = Eigen::MatrixXd::Zero(n_comp, n_gen);
  basis.coeff_y = Eigen::MatrixXd::Zero(n_comp, n_gen);
  basis.divergence_coefficients = Eigen::MatrixXd::Zero(poly_space_dim(k - 2), n_gen);

  // x part: (x - x_E) m_a = hscale * (m_{a+e1}, m_{a+e2});
  // div((x - x_E) m_a) = (2 + |a|) m_a exactly.
  const std::vector<MultiIndex> low = graded_multi_indices(k - 2);
  for (int g = 0; g < basis.n_x; ++g) {
    const MultiIndex& a = low[g];
    basis.coeff_x(multi_index_position(a.ax + 1, a.ay), g) = hscale;
    basis.coeff_y(multi_index_position(a.ax, a.ay + 1), g) = hscale;
    basis.divergence_coefficients(g, g) = 2.0 + a.total();
  }

  // curl part: curl m_a = (dm_a/dy, -dm_a/dx), divergence identically zero.
  const std::vector<MultiIndex> high = graded_multi_indices(k + ell);
  for (int g = 0; g < basis.n_curl; ++g) {
    const MultiIndex& a = high[g + 1];  // skip the constant
    if (a.ay > 0)
      basis.coeff_x(multi_index_position(a.ax, a.ay - 1), basis.n_x + g) = a.ay / hscale;
    if (a.ax > 0)
      basis.coeff_y(multi_index_position(a.ax - 1, a.ay), basis.n_x + g) = -a.ax / hscale;
  }
  return basis;
}

Eigen::VectorXd pkl_divergence(const PklBasis& basis, int g) {
  if (g < 0 || g >= basis.size())
    throw std::out_of_range("pkl_divergence: generator index out of range");
  return basis.divergence_coefficients.col(g);
}

Eigen::MatrixXd pkl_gradient_coordinates(const PklBasis& basis) {
  const MonomialBasis poly(basis.component_basis.center(), basis.component_basis.hscale(),
                           basis.k);
  // Targets: component coefficients of grad m_a in the P_{k-1} sub-block of
  // the component basis (graded ordering nests lower degrees in front).
  const int n_k = poly.size();
  const int n_comp = basis.component_basis.size();
  Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(2 * n_comp, n_k);
  const Eigen::MatrixXd dx = poly.derivative_map(0);
  const Eigen::MatrixXd dy = poly.derivative_map(1);
  targets.block(0, 0, dx.rows(), n_k) = dx;
  targets.block(n_comp, 0, dy.rows(), n_k) = dy;

  Eigen::MatrixXd stacked(2 * n_comp, basis.size());
  stacked.topRows(n_comp) = basis.coeff_x;
  stacked.bottomRows(n_comp) = basis.coeff_y;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stacked);
  const Eigen::MatrixXd coords = qr.solve(targets);
  const double residual = (stacked * coords - targets).norm();
  if (residual > 1e-9 * std::max(1.0, targets.norm()))
    throw std::runtime_error("pkl_gradient_coordinates: gradient not contained in the span");
  return coords;
}

}  // namespace sfvem
