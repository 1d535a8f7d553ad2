// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sfvem/element.hpp"
#include "sfvem/monomial.hpp"
#include "sfvem/pkl.hpp"
#include "sfvem/quadrature.hpp"

#include <vector>

namespace sfvem {

/// Local degree-of-freedom layout of the order-k virtual space on one cell:
/// N_E vertex values, then per edge the k-1 scaled moments against the edge
/// monomials (taken in the global edge orientation so neighbouring cells
/// agree), then the k(k-1)/2 scaled interior moments against P_{k-2}.
struct DofLayout {
  Element element;
  int k = 2;
  std::vector<bool> edge_reversed;  // local traversal opposite to DOF orientation

  int num_vertices() const { return element.num_vertices(); }
  int edge_moment_count() const { return k - 1; }
  int interior_count() const { return k * (k - 1) / 2; }
  int count() const { return num_vertices() * k + interior_count(); }

  int vertex_dof(int j) const { return j; }
  int edge_dof(int local_edge, int m) const {
    return num_vertices() + local_edge * (k - 1) + m;
  }
  int interior_dof(int m) const { return num_vertices() * k + m; }

  /// Layout for a cell outside any mesh; DOF orientation = local traversal.
  static DofLayout standalone(Element element, int k);
  /// Layout for a mesh cell; edge moments follow the mesh's global edge
  /// orientation.
  static DofLayout from_mesh(const PolygonMesh& mesh, int cell, int k);
};

/// Per-element projection matrices acting on DOF vectors. Rows are
/// coefficients in the graded monomial basis (or the P_{k,ell} generator
/// list for pi_p_grad).
struct ElementProjections {
  Eigen::MatrixXd D;             // (#dofs x dim P_k): DOFs of the monomials
  Eigen::MatrixXd pi_nabla;      // (dim P_k x #dofs)
  Eigen::MatrixXd pi_zero;       // (dim P_k x #dofs)
  Eigen::MatrixXd pi_zero_grad;  // (2 dim P_{k-1} x #dofs), x block then y block
  Eigen::MatrixXd pi_p_grad;     // (dim P_{k,ell} x #dofs)
  double pkl_gram_condition = 0.0;
  bool condition_warning = false;  // est. cond of the P_{k,ell} Gram above 1e12
};

struct ProjectionOptions {
  int cell_exactness = -1;  // default 2(k+ell)+2
  int edge_exactness = -1;  // default 2k+ell+2
  double condition_warning_threshold = 1e12;
};

/// All four projectors at once (shares quadrature and edge traces).
ElementProjections build_projections(const DofLayout& layout, int ell,
                                     const ProjectionOptions& options = {});

Eigen::MatrixXd dof_matrix(const DofLayout& layout);
Eigen::MatrixXd elliptic_projector(const DofLayout& layout);
Eigen::MatrixXd l2_projector(const DofLayout& layout, const Eigen::MatrixXd& pi_nabla);
Eigen::MatrixXd grad_l2_projector(const DofLayout& layout);
Eigen::MatrixXd pkl_grad_projector(const DofLayout& layout, const PklBasis& pkl);

}  // namespace sfvem
