// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

// Test-only realization of a virtual basis function on a fine triangular
// submesh: the local problem "laplacian v is a degree-k polynomial, the
// trace is the DOF-determined edge polynomial, moments and the enhancement
// constraint match the DOF vector" is solved with conforming quadratic
// elements, and the resulting function provides reference projections that
// are independent of the library's projector implementation.

#pragma once

#include "sfvem/pkl.hpp"
#include "sfvem/projection.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <array>
#include <vector>

namespace sfvem::testing {

class FineOracle {
 public:
  /// refinement = number of subdivisions per fan triangle edge; the fan over
  /// N_E sides yields N_E * refinement^2 triangles.
  FineOracle(const DofLayout& layout, int refinement);

  int triangle_count() const { return static_cast<int>(triangles_.size()); }

  /// Solve for the virtual function with the given DOF vector.
  void realize(const Eigen::VectorXd& dofs);

  /// Fine-mesh H1 projection onto P_k (coefficients in the element monomial
  /// basis) of the realized function.
  Eigen::VectorXd h1_projection() const { return h1_proj_; }
  /// Fine-mesh L2 projection onto P_k.
  Eigen::VectorXd l2_projection() const;
  /// Fine-mesh componentwise L2 projection of the gradient onto [P_{k-1}]^2.
  Eigen::VectorXd gradient_projection() const;

  /// Orthogonality defect (grad v - q, g_a) for q given by coordinates in
  /// the generator list, normalized by ||grad v|| ||g_a||.
  Eigen::VectorXd orthogonality_residual(const PklBasis& pkl,
                                         const Eigen::VectorXd& coords) const;

  double l2_norm() const;
  double h1_seminorm() const;

 private:
  void build_mesh(int refinement);
  void build_tables();
  Eigen::VectorXd boundary_values(const Eigen::VectorXd& dofs) const;

  DofLayout layout_;
  int k_;
  int n_k_;
  MonomialBasis basis_;

  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 6>> triangles_;  // P2 connectivity
  std::vector<int> node_side_;                 // polygon side or -1
  std::vector<double> node_side_param_;        // fraction from side start
  std::vector<int> interior_index_;            // node -> interior position or -1
  std::vector<int> interior_nodes_;

  Eigen::SparseMatrix<double> stiffness_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> interior_factor_;

  Eigen::MatrixXd moment_table_;   // (n_k x nodes): int m_a phi_i
  Eigen::MatrixXd grad_table_;     // (n_k x nodes): int grad m_a . grad phi_i
  Eigen::MatrixXd grad_x_table_;   // (dim P_{k-1} x nodes): int m_b dphi/dx
  Eigen::MatrixXd grad_y_table_;
  Eigen::VectorXd volume_table_;   // int phi_i
  Eigen::MatrixXd poly_mass_;      // (n_k x n_k)
  Eigen::MatrixXd h1_map_;         // nodal values -> H1 projection coefficients

  Eigen::VectorXd nodal_;
  Eigen::VectorXd h1_proj_;
};

}  // namespace sfvem::testing
