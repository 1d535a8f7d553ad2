// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sfvem/projection.hpp"

#include <Eigen/SparseCore>

#include <complex>
#include <functional>
#include <iosfwd>

namespace sfvem {

using Complex = std::complex<double>;
using SparseMatrixC = Eigen::SparseMatrix<Complex>;
using VectorC = Eigen::VectorXcd;

enum class Scheme { SFVEM, SVEM };

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
using MatrixField = std::function<Eigen::Matrix2d(const Vec2&)>;

/// Coefficients, degree, enrichment rule and scheme of one discretization.
/// K must be symmetric positive definite and gamma nonnegative wherever the
/// quadrature samples them; beta is assumed divergence-free.
struct ProblemSpec {
  MatrixField K;
  VectorField beta;
  ScalarField gamma;
  int k = 2;
  std::function<int(int)> ell_rule;  // N_E -> ell; defaults to default_ell
  Scheme scheme = Scheme::SFVEM;

  /// Enrichment degrees used throughout: 4-gons -> 1, pentagons -> 2,
  /// octagons -> 3, otherwise max(1, ceil((N_E - 2) / 2)) guarded by a rank
  /// check during assembly.
  static int default_ell(int num_vertices);

  static ProblemSpec constant_coefficients(const Eigen::Matrix2d& K, const Vec2& beta,
                                           double gamma, int k,
                                           Scheme scheme = Scheme::SFVEM);

  int ell_for(int num_vertices) const {
    return ell_rule ? ell_rule(num_vertices) : default_ell(num_vertices);
  }
};

/// Global numbering: vertex DOFs, then (k-1) moments per edge, then
/// k(k-1)/2 moments per cell. Homogeneous Dirichlet data lives on boundary
/// vertices and boundary edges.
struct GlobalDofMap {
  int k = 2;
  int n_vertices = 0, n_edges = 0, n_cells = 0;
  std::vector<bool> dirichlet;   // size total()
  std::vector<int> free_index;   // total -> free position or -1
  std::vector<int> free_to_total;

  int total() const { return n_vertices + n_edges * (k - 1) + n_cells * k * (k - 1) / 2; }
  int free_count() const { return static_cast<int>(free_to_total.size()); }
  int vertex_dof(int v) const { return v; }
  int edge_dof(int e, int m) const { return n_vertices + e * (k - 1) + m; }
  int cell_dof(int c, int m) const {
    return n_vertices + n_edges * (k - 1) + c * (k * (k - 1) / 2) + m;
  }

  static GlobalDofMap build(const PolygonMesh& mesh, int k);
  std::vector<int> cell_to_global(const PolygonMesh& mesh, int cell) const;

  /// Scatter a free-DOF vector into a total-DOF vector with zeros on the
  /// Dirichlet entries.
  VectorC expand(const VectorC& free_values) const;
};

/// Assembled pair: A = stiffness + convection + reaction, M = projected
/// mass, both on free DOFs unless assembled with keep_boundary.
struct SparsePair {
  SparseMatrixC A;
  SparseMatrixC M;
};

struct LocalForms {
  Eigen::MatrixXd A;  // a_h + b_h + c_h
  Eigen::MatrixXd M;  // (Pi0 u, Pi0 v)
};

/// Local SFVEM matrices from the projections (Pi_P grad for the diffusion
/// part, Pi0 grad for convection, Pi0 for reaction and mass).
LocalForms local_forms(const DofLayout& layout, const ProblemSpec& spec,
                       const ElementProjections& proj);

/// Local stabilized-VEM stiffness: consistency through Pi0 grad plus the
/// dofi-dofi stabilization of the Pi_nabla remainder scaled by sup|K|.
Eigen::MatrixXd svem_local_stiffness(const DofLayout& layout, const ProblemSpec& spec,
                                     const ElementProjections& proj);

struct AssemblyResult {
  SparsePair pair;
  GlobalDofMap dofs;
  int condition_warnings = 0;  // cells whose P_{k,l} Gram is ill-conditioned
};

/// Assemble the global pair over all cells. With eliminate_dirichlet the
/// boundary rows/columns are removed (homogeneous data); otherwise the
/// matrices cover every DOF.
AssemblyResult assemble(const PolygonMesh& mesh, const ProblemSpec& spec,
                        bool eliminate_dirichlet = true);

/// Right-hand side sum_E (f, Pi0 v)_E on free DOFs (or all DOFs when
/// eliminate_dirichlet is false).
VectorC assemble_source_rhs(const PolygonMesh& mesh, const ProblemSpec& spec,
                            const ScalarField& f, bool eliminate_dirichlet = true);

/// DOF interpolant of a smooth function (vertex values plus scaled edge and
/// interior moments), over all DOFs.
Eigen::VectorXd dof_interpolate(const PolygonMesh& mesh, int k, const ScalarField& f);

/// Coordinate text export, one "i j re im" line per stored entry, 0-based.
void export_matrix(std::ostream& os, const SparseMatrixC& matrix);

}  // namespace sfvem
