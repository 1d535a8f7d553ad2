// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "sfvem/assembly.hpp"

#include <Eigen/SVD>

#include <ostream>
#include <stdexcept>

namespace sfvem {

int ProblemSpec::default_ell(int num_vertices) {
  switch (num_vertices) {
    case 4: return 1;
    case 5: return 2;
    case 8: return 3;
    default: return std::max(1, (num_vertices - 1) / 2);  // ceil((N_E - 2) / 2)
  }
}

ProblemSpec ProblemSpec::constant_coefficients(const Eigen::Matrix2d& K, const Vec2& beta,
                                               double gamma, int k, Scheme scheme) {
  ProblemSpec spec;
  spec.K = [K](const Vec2&) { return K; };
  spec.beta = [beta](const Vec2&) { return beta; };
  spec.gamma = [gamma](const Vec2&) { return gamma; };
  spec.k = k;
  spec.scheme = scheme;
  return spec;
}

GlobalDofMap GlobalDofMap::build(const PolygonMesh& mesh, int k) {
  if (k < 2) throw std::invalid_argument("GlobalDofMap: k must be >= 2");
  GlobalDofMap map;
  map.k = k;
  map.n_vertices = mesh.num_vertices();
  map.n_edges = mesh.num_edges();
  map.n_cells = mesh.num_cells();
  map.dirichlet.assign(map.total(), false);
  for (int v = 0; v < map.n_vertices; ++v)
    if (mesh.vertex_on_boundary(v)) map.dirichlet[map.vertex_dof(v)] = true;
  for (int e = 0; e < map.n_edges; ++e)
    if (mesh.edge_on_boundary(e))
      for (int m = 0; m < k - 1; ++m) map.dirichlet[map.edge_dof(e, m)] = true;
  map.free_index.assign(map.total(), -1);
  for (int i = 0; i < map.total(); ++i)
    if (!map.dirichlet[i]) {
      map.free_index[i] = static_cast<int>(map.free_to_total.size());
      map.free_to_total.push_back(i);
    }
  return map;
}

std::vector<int> GlobalDofMap::cell_to_global(const PolygonMesh& mesh, int cell) const {
  const std::vector<int>& verts = mesh.cell(cell);
  const int ne = static_cast<int>(verts.size());
  std::vector<int> global;
  global.reserve(ne * k + k * (k - 1) / 2);
  for (int v : verts) global.push_back(vertex_dof(v));
  for (int j = 0; j < ne; ++j) {
    const int e = mesh.cell_edge(cell, j);
    for (int m = 0; m < k - 1; ++m) global.push_back(edge_dof(e, m));
  }
  for (int m = 0; m < k * (k - 1) / 2; ++m) global.push_back(cell_dof(cell, m));
  return global;
}

VectorC GlobalDofMap::expand(const VectorC& free_values) const {
  VectorC full = VectorC::Zero(total());
  for (int i = 0; i < free_count(); ++i) full[free_to_total[i]] = free_values[i];
  return full;
}

namespace {

// Shared quadrature tables for the zero-order and convection terms.
struct FormTables {
  CellRule rule;
  Eigen::MatrixXd mono_values;  // (#q x dim P_k)
  Eigen::MatrixXd mass_k;       // monomial mass matrix
};

FormTables make_tables(const DofLayout& layout, int ell) {
  FormTables t;
  t.rule = build_cell_rule(layout.element, default_cell_exactness(layout.k, ell));
  const MonomialBasis basis(layout.element.centroid, layout.element.diameter, layout.k);
  t.mono_values = basis.values(t.rule.points);
  t.mass_k = t.mono_values.transpose() * t.rule.weights.asDiagonal() * t.mono_values;
  return t;
}

void check_coefficients(const ProblemSpec& spec, const CellRule& rule) {
  for (const Vec2& p : rule.points) {
    const Eigen::Matrix2d K = spec.K(p);
    if (K(0, 1) != K(1, 0) || K(0, 0) <= 0.0 || K.determinant() <= 0.0)
      throw std::runtime_error("coefficient K is not symmetric positive definite");
    if (spec.gamma && spec.gamma(p) < 0.0)
      throw std::runtime_error("coefficient gamma is negative");
  }
}

// K-weighted Gram of a vector basis given by component value tables.
Eigen::MatrixXd weighted_vector_gram(const Eigen::MatrixXd& vx, const Eigen::MatrixXd& vy,
                                     const CellRule& rule, const MatrixField& K) {
  const int nq = static_cast<int>(rule.points.size());
  Eigen::VectorXd k11(nq), k12(nq), k22(nq);
  for (int q = 0; q < nq; ++q) {
    const Eigen::Matrix2d Kq = K(rule.points[q]);
    k11[q] = rule.weights[q] * Kq(0, 0);
    k12[q] = rule.weights[q] * Kq(0, 1);
    k22[q] = rule.weights[q] * Kq(1, 1);
  }
  return vx.transpose() * k11.asDiagonal() * vx + vx.transpose() * k12.asDiagonal() * vy +
         vy.transpose() * k12.asDiagonal() * vx + vy.transpose() * k22.asDiagonal() * vy;
}

Eigen::MatrixXd convection_matrix(const DofLayout& layout, const ProblemSpec& spec,
                                  const ElementProjections& proj, const FormTables& t) {
  const int n_km1 = poly_space_dim(layout.k - 1);
  const int nq = static_cast<int>(t.rule.points.size());
  const Eigen::MatrixXd vals_km1 = t.mono_values.leftCols(n_km1);
  const Eigen::MatrixXd grad_x = vals_km1 * proj.pi_zero_grad.topRows(n_km1);
  const Eigen::MatrixXd grad_y = vals_km1 * proj.pi_zero_grad.bottomRows(n_km1);
  Eigen::VectorXd bx(nq), by(nq);
  for (int q = 0; q < nq; ++q) {
    const Vec2 b = spec.beta(t.rule.points[q]);
    bx[q] = t.rule.weights[q] * b.x();
    by[q] = t.rule.weights[q] * b.y();
  }
  const Eigen::MatrixXd test_vals = t.mono_values * proj.pi_zero;
  return test_vals.transpose() * (bx.asDiagonal() * grad_x + by.asDiagonal() * grad_y);
}

Eigen::MatrixXd reaction_matrix(const ProblemSpec& spec, const ElementProjections& proj,
                                const FormTables& t) {
  const int nq = static_cast<int>(t.rule.points.size());
  Eigen::VectorXd g(nq);
  for (int q = 0; q < nq; ++q) g[q] = t.rule.weights[q] * spec.gamma(t.rule.points[q]);
  const Eigen::MatrixXd vals = t.mono_values * proj.pi_zero;
  return vals.transpose() * g.asDiagonal() * vals;
}

double sup_norm_K(const ProblemSpec& spec, const CellRule& rule) {
  double sup = 0.0;
  for (const Vec2& p : rule.points) {
    const Eigen::Matrix2d K = spec.K(p);
    sup = std::max(sup, K.selfadjointView<Eigen::Lower>().eigenvalues().cwiseAbs().maxCoeff());
  }
  return sup;
}

}  // namespace

LocalForms local_forms(const DofLayout& layout, const ProblemSpec& spec,
                       const ElementProjections& proj) {
  const int ell = spec.ell_for(layout.num_vertices());
  const FormTables t = make_tables(layout, ell);
  check_coefficients(spec, t.rule);

  const PklBasis pkl =
      build_pkl_basis(layout.element.centroid, layout.element.diameter, layout.k, ell);
  auto [gvx, gvy] = pkl.values(t.rule.points);
  const Eigen::MatrixXd gram_K = weighted_vector_gram(gvx, gvy, t.rule, spec.K);

  LocalForms forms;
  forms.A = proj.pi_p_grad.transpose() * gram_K * proj.pi_p_grad;
  if (spec.beta) forms.A += convection_matrix(layout, spec, proj, t);
  if (spec.gamma) forms.A += reaction_matrix(spec, proj, t);
  forms.M = proj.pi_zero.transpose() * t.mass_k * proj.pi_zero;
  return forms;
}

Eigen::MatrixXd svem_local_stiffness(const DofLayout& layout, const ProblemSpec& spec,
                                     const ElementProjections& proj) {
  const int ell = spec.ell_for(layout.num_vertices());
  const FormTables t = make_tables(layout, ell);
  const int n_km1 = poly_space_dim(layout.k - 1);
  const Eigen::MatrixXd vals_km1 = t.mono_values.leftCols(n_km1);
  const Eigen::MatrixXd grad_x = vals_km1 * proj.pi_zero_grad.topRows(n_km1);
  const Eigen::MatrixXd grad_y = vals_km1 * proj.pi_zero_grad.bottomRows(n_km1);
  const Eigen::MatrixXd consistency = weighted_vector_gram(grad_x, grad_y, t.rule, spec.K);

  const Eigen::MatrixXd remainder =
      Eigen::MatrixXd::Identity(layout.count(), layout.count()) - proj.D * proj.pi_nabla;
  return consistency + sup_norm_K(spec, t.rule) * remainder.transpose() * remainder;
}

namespace {

int numerical_kernel_dimension(const Eigen::MatrixXd& A, double rel_threshold) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const double cutoff = rel_threshold * svd.singularValues()[0];
  int dim = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] <= cutoff) ++dim;
  return dim;
}

}  // namespace

AssemblyResult assemble(const PolygonMesh& mesh, const ProblemSpec& spec,
                        bool eliminate_dirichlet) {
  AssemblyResult result;
  result.dofs = GlobalDofMap::build(mesh, spec.k);
  const GlobalDofMap& map = result.dofs;

  auto target_index = [&](int g) { return eliminate_dirichlet ? map.free_index[g] : g; };
  const int n = eliminate_dirichlet ? map.free_count() : map.total();

  std::vector<Eigen::Triplet<Complex>> trip_A, trip_M;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    DofLayout layout;
    try {
      layout = DofLayout::from_mesh(mesh, c, spec.k);
    } catch (const std::exception& err) {
      throw std::runtime_error("assemble: cell " + std::to_string(c) + ": " + err.what());
    }
    const int ne = layout.num_vertices();
    const int ell = spec.ell_for(ne);
    ElementProjections proj;
    LocalForms forms;
    try {
      proj = build_projections(layout, ell);
      forms = local_forms(layout, spec, proj);
      if (spec.scheme == Scheme::SVEM) {
        // Replace the a_h part: recompute the convection/reaction pieces on
        // top of the stabilized stiffness.
        ProblemSpec diffusion_only = spec;
        diffusion_only.beta = nullptr;
        diffusion_only.gamma = nullptr;
        const LocalForms sf = local_forms(layout, diffusion_only, proj);
        forms.A -= sf.A;
        forms.A += svem_local_stiffness(layout, spec, proj);
      }
    } catch (const std::exception& err) {
      throw std::runtime_error("assemble: cell " + std::to_string(c) + ": " + err.what());
    }
    if (proj.condition_warning) ++result.condition_warnings;

    // Non-tabulated polygon arities rely on the runtime rank check to
    // certify the enrichment is large enough.
    if (spec.scheme == Scheme::SFVEM && ne != 4 && ne != 5 && ne != 8) {
      ProblemSpec diffusion_only = spec;
      diffusion_only.beta = nullptr;
      diffusion_only.gamma = nullptr;
      const LocalForms sf = local_forms(layout, diffusion_only, proj);
      if (numerical_kernel_dimension(sf.A, 1e-10) != 1)
        throw std::runtime_error("assemble: cell " + std::to_string(c) + " with " +
                                 std::to_string(ne) + " vertices: enrichment ell=" +
                                 std::to_string(ell) + " fails the self-stabilization rank check");
    }

    const std::vector<int> global = map.cell_to_global(mesh, c);
    for (std::size_t i = 0; i < global.size(); ++i) {
      const int gi = target_index(global[i]);
      if (gi < 0) continue;
      for (std::size_t j = 0; j < global.size(); ++j) {
        const int gj = target_index(global[j]);
        if (gj < 0) continue;
        trip_A.emplace_back(gi, gj, Complex(forms.A(i, j), 0.0));
        trip_M.emplace_back(gi, gj, Complex(forms.M(i, j), 0.0));
      }
    }
  }

  result.pair.A.resize(n, n);
  result.pair.M.resize(n, n);
  result.pair.A.setFromTriplets(trip_A.begin(), trip_A.end());
  result.pair.M.setFromTriplets(trip_M.begin(), trip_M.end());
  return result;
}

VectorC assemble_source_rhs(const PolygonMesh& mesh, const ProblemSpec& spec,
                            const ScalarField& f, bool eliminate_dirichlet) {
  const GlobalDofMap map = GlobalDofMap::build(mesh, spec.k);
  const int n = eliminate_dirichlet ? map.free_count() : map.total();
  VectorC rhs = VectorC::Zero(n);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const DofLayout layout = DofLayout::from_mesh(mesh, c, spec.k);
    const int ell = spec.ell_for(layout.num_vertices());
    const ElementProjections proj = build_projections(layout, ell);
    const FormTables t = make_tables(layout, ell);
    Eigen::VectorXd fw(t.rule.points.size());
    for (std::size_t q = 0; q < t.rule.points.size(); ++q)
      fw[q] = t.rule.weights[q] * f(t.rule.points[q]);
    const Eigen::VectorXd local = (t.mono_values * proj.pi_zero).transpose() * fw;
    const std::vector<int> global = map.cell_to_global(mesh, c);
    for (std::size_t i = 0; i < global.size(); ++i) {
      const int gi = eliminate_dirichlet ? map.free_index[global[i]] : global[i];
      if (gi >= 0) rhs[gi] += local[i];
    }
  }
  return rhs;
}

Eigen::VectorXd dof_interpolate(const PolygonMesh& mesh, int k, const ScalarField& f) {
  const GlobalDofMap map = GlobalDofMap::build(mesh, k);
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(map.total());
  for (int v = 0; v < mesh.num_vertices(); ++v) dofs[map.vertex_dof(v)] = f(mesh.vertex(v));
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const EdgeRecord& rec = mesh.edge(e);
    const Vec2 a = mesh.vertex(rec.v0), b = mesh.vertex(rec.v1);
    const EdgeRule rule = build_edge_rule(a, b, 2 * k + 4);
    const EdgeMonomialBasis basis(a, b, k - 2);
    const double h_e = rule.weights.sum();
    for (int m = 0; m < k - 1; ++m) {
      double acc = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q)
        acc += rule.weights[q] * f(rule.points[q]) *
               basis.value(m, basis.param(rule.points[q]));
      dofs[map.edge_dof(e, m)] = acc / h_e;
    }
  }
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Element element = Element::from_mesh_cell(mesh, c);
    const CellRule rule = build_cell_rule(element, 2 * k + 4);
    const MonomialBasis basis(element.centroid, element.diameter, k - 2);
    for (int m = 0; m < k * (k - 1) / 2; ++m) {
      double acc = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q)
        acc += rule.weights[q] * f(rule.points[q]) * basis.value(m, rule.points[q]);
      dofs[map.cell_dof(c, m)] = acc / element.area;
    }
  }
  return dofs;
}

void export_matrix(std::ostream& os, const SparseMatrixC& matrix) {
  os.precision(17);
  for (int col = 0; col < matrix.outerSize(); ++col)
    for (SparseMatrixC::InnerIterator it(matrix, col); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' '
         << it.value().imag() << '\n';
}

}  // namespace sfvem
