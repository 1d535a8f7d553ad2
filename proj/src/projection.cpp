// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "sfvem/projection.hpp"

#include <cmath>
#include <stdexcept>

namespace sfvem {

DofLayout DofLayout::standalone(Element element, int k) {
  if (k < 2) throw std::invalid_argument("DofLayout: k must be >= 2");
  DofLayout layout;
  layout.edge_reversed.assign(element.vertices.size(), false);
  layout.element = std::move(element);
  layout.k = k;
  return layout;
}

DofLayout DofLayout::from_mesh(const PolygonMesh& mesh, int cell, int k) {
  if (k < 2) throw std::invalid_argument("DofLayout: k must be >= 2");
  DofLayout layout;
  layout.element = Element::from_mesh_cell(mesh, cell);
  layout.k = k;
  const int ne = layout.element.num_vertices();
  layout.edge_reversed.resize(ne);
  for (int j = 0; j < ne; ++j) layout.edge_reversed[j] = mesh.cell_edge_reversed(cell, j);
  return layout;
}

namespace {

// Interpolation matrix of the degree-k edge trace from its controlling
// slots [value at t=-1/2, value at t=+1/2, moments 0..k-2]; identical for
// every edge because the monomials use the scaled parameter t.
Eigen::MatrixXd edge_trace_interpolation(int k) {
  Eigen::MatrixXd T(k + 1, k + 1);
  for (int c = 0; c <= k; ++c) {
    T(0, c) = std::pow(-0.5, c);
    T(1, c) = std::pow(0.5, c);
  }
  for (int i = 0; i <= k - 2; ++i)
    for (int c = 0; c <= k; ++c) {
      const int m = i + c;
      T(2 + i, c) = (m % 2 == 0) ? std::pow(0.5, m) / (m + 1) : 0.0;
    }
  return T;
}

struct EdgeData {
  EdgeRule rule;
  Eigen::VectorXd params;      // global edge parameter at the rule points
  Vec2 normal;                 // outward unit normal of the cell side
  Eigen::MatrixXd trace_eval;  // (#points x k+1), columns = controlling slots
  std::vector<int> slot_dofs;  // local DOF index of each controlling slot
};

// Shared per-element state for the four projector builds.
class Workspace {
 public:
  Workspace(const DofLayout& layout, int ell, const ProjectionOptions& options)
      : layout_(layout),
        k_(layout.k),
        n_k_(poly_space_dim(layout.k)),
        basis_(layout.element.centroid, layout.element.diameter, layout.k) {
    const Element& e = layout.element;
    const int cell_ex = options.cell_exactness > 0 ? options.cell_exactness
                                                   : default_cell_exactness(k_, ell);
    const int edge_ex = options.edge_exactness > 0 ? options.edge_exactness
                                                   : default_edge_exactness(k_, ell);
    cell_rule_ = build_cell_rule(e, cell_ex);
    cell_values_ = basis_.values(cell_rule_.points);
    auto [gx, gy] = basis_.gradients(cell_rule_.points);
    cell_grad_x_ = std::move(gx);
    cell_grad_y_ = std::move(gy);
    mass_ = cell_values_.transpose() * cell_rule_.weights.asDiagonal() * cell_values_;
    integrals_ = cell_values_.transpose() * cell_rule_.weights;

    const Eigen::MatrixXd trace_inv =
        edge_trace_interpolation(k_).colPivHouseholderQr().inverse();
    const int ne = e.num_vertices();
    edges_.reserve(ne);
    for (int j = 0; j < ne; ++j) {
      EdgeData data;
      const Vec2 p0 = e.edge_start(j), p1 = e.edge_end(j);
      const bool rev = layout.edge_reversed[j];
      const Vec2 a = rev ? p1 : p0;
      const Vec2 b = rev ? p0 : p1;
      data.rule = build_edge_rule(a, b, edge_ex);
      const EdgeMonomialBasis edge_basis(a, b, k_);
      const int nq = static_cast<int>(data.rule.points.size());
      data.params.resize(nq);
      Eigen::MatrixXd powers(nq, k_ + 1);
      for (int q = 0; q < nq; ++q) {
        data.params[q] = edge_basis.param(data.rule.points[q]);
        for (int c = 0; c <= k_; ++c) powers(q, c) = edge_basis.value(c, data.params[q]);
      }
      data.trace_eval = powers * trace_inv;
      const Vec2 t = (p1 - p0).normalized();
      data.normal = Vec2(t.y(), -t.x());
      data.slot_dofs.resize(k_ + 1);
      data.slot_dofs[0] = layout.vertex_dof(rev ? (j + 1) % ne : j);
      data.slot_dofs[1] = layout.vertex_dof(rev ? j : (j + 1) % ne);
      for (int m = 0; m <= k_ - 2; ++m) data.slot_dofs[2 + m] = layout.edge_dof(j, m);
      edges_.push_back(std::move(data));
    }
  }

  const MonomialBasis& basis() const { return basis_; }
  const CellRule& cell_rule() const { return cell_rule_; }
  const Eigen::MatrixXd& cell_values() const { return cell_values_; }
  const Eigen::MatrixXd& mass() const { return mass_; }
  const std::vector<EdgeData>& edges() const { return edges_; }

  // Accumulate sum_q w_q f(x_q) phi_i(x_q) over one edge into row `row`.
  void add_boundary_row(Eigen::MatrixXd& target, int row, const EdgeData& edge,
                        const Eigen::VectorXd& f_at_points) const {
    const Eigen::RowVectorXd slot_weights =
        (edge.rule.weights.array() * f_at_points.array()).matrix().transpose() *
        edge.trace_eval;
    for (int r = 0; r <= k_; ++r) target(row, edge.slot_dofs[r]) += slot_weights[r];
  }

  Eigen::MatrixXd build_dof_matrix() const {
    const Element& e = layout_.element;
    Eigen::MatrixXd D(layout_.count(), n_k_);
    for (int j = 0; j < e.num_vertices(); ++j)
      for (int a = 0; a < n_k_; ++a) D(layout_.vertex_dof(j), a) = basis_.value(a, e.vertices[j]);
    for (std::size_t j = 0; j < edges_.size(); ++j) {
      const EdgeData& edge = edges_[j];
      const double h_e = edge.rule.weights.sum();
      Eigen::MatrixXd mono_vals(edge.rule.points.size(), n_k_);
      for (std::size_t q = 0; q < edge.rule.points.size(); ++q)
        for (int a = 0; a < n_k_; ++a) mono_vals(q, a) = basis_.value(a, edge.rule.points[q]);
      for (int m = 0; m <= k_ - 2; ++m) {
        Eigen::VectorXd tm(edge.rule.points.size());
        for (std::size_t q = 0; q < edge.rule.points.size(); ++q)
          tm[q] = std::pow(edge.params[q], m);
        const Eigen::RowVectorXd row =
            (edge.rule.weights.array() * tm.array()).matrix().transpose() * mono_vals / h_e;
        D.row(layout_.edge_dof(static_cast<int>(j), m)) = row;
      }
    }
    const int n_low = poly_space_dim(k_ - 2);
    for (int b = 0; b < n_low; ++b)
      D.row(layout_.interior_dof(b)) = mass_.row(b) / e.area;
    return D;
  }

  Eigen::MatrixXd build_pi_nabla() const {
    const Element& e = layout_.element;
    const int N = layout_.count();
    Eigen::MatrixXd G = cell_grad_x_.transpose() * cell_rule_.weights.asDiagonal() * cell_grad_x_ +
                        cell_grad_y_.transpose() * cell_rule_.weights.asDiagonal() * cell_grad_y_;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n_k_, N);
    // Mean-value constraint pins the constant mode.
    G.row(0) = integrals_.transpose() / e.area;
    B(0, layout_.interior_dof(0)) = 1.0;

    const Eigen::MatrixXd lap = basis_.laplacian_map();  // (dim P_{k-2} x n_k)
    for (int a = 1; a < n_k_; ++a)
      for (int g = 0; g < lap.rows(); ++g)
        if (lap(g, a) != 0.0) B(a, layout_.interior_dof(g)) -= e.area * lap(g, a);
    for (const EdgeData& edge : edges_) {
      const int nq = static_cast<int>(edge.rule.points.size());
      for (int a = 1; a < n_k_; ++a) {
        Eigen::VectorXd f(nq);
        for (int q = 0; q < nq; ++q)
          f[q] = basis_.gradient(a, edge.rule.points[q]).dot(edge.normal);
        add_boundary_row(B, a, edge, f);
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(G);
    if (qr.rank() < n_k_)
      throw std::runtime_error("elliptic projector: singular constrained system");
    return qr.solve(B);
  }

  Eigen::MatrixXd build_pi_zero(const Eigen::MatrixXd& pi_nabla) const {
    const Element& e = layout_.element;
    const int N = layout_.count();
    const int n_low = poly_space_dim(k_ - 2);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n_k_, N);
    for (int b = 0; b < n_low; ++b) C(b, layout_.interior_dof(b)) = e.area;
    // Moments against P_k \ P_{k-2} are those of the elliptic projection.
    C.bottomRows(n_k_ - n_low) = mass_.bottomRows(n_k_ - n_low) * pi_nabla;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(mass_);
    if (qr.rank() < n_k_)
      throw std::runtime_error("l2 projector: singular monomial mass matrix");
    return qr.solve(C);
  }

  Eigen::MatrixXd build_pi_zero_grad() const {
    const Element& e = layout_.element;
    const int N = layout_.count();
    const int n_km1 = poly_space_dim(k_ - 1);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(2 * n_km1, N);
    const double h = e.diameter;
    for (int c = 0; c < 2; ++c) {
      for (int b = 0; b < n_km1; ++b) {
        const int row = c * n_km1 + b;
        const MultiIndex& mi = basis_.index(b);
        // -(phi, d m_b / d x_c) pairs with interior moments of P_{k-2}.
        const int ex = (c == 0) ? mi.ax : mi.ay;
        if (ex > 0) {
          const int pos = (c == 0) ? multi_index_position(mi.ax - 1, mi.ay)
                                   : multi_index_position(mi.ax, mi.ay - 1);
          R(row, layout_.interior_dof(pos)) -= e.area * ex / h;
        }
        for (const EdgeData& edge : edges_) {
          const int nq = static_cast<int>(edge.rule.points.size());
          Eigen::VectorXd f(nq);
          const double nc = (c == 0) ? edge.normal.x() : edge.normal.y();
          for (int q = 0; q < nq; ++q) f[q] = basis_.value(b, edge.rule.points[q]) * nc;
          add_boundary_row(R, row, edge, f);
        }
      }
    }
    const Eigen::MatrixXd mass_km1 = mass_.topLeftCorner(n_km1, n_km1);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(mass_km1);
    Eigen::MatrixXd result(2 * n_km1, N);
    result.topRows(n_km1) = ldlt.solve(R.topRows(n_km1));
    result.bottomRows(n_km1) = ldlt.solve(R.bottomRows(n_km1));
    return result;
  }

  Eigen::MatrixXd build_pi_p_grad(const PklBasis& pkl, double warn_threshold,
                                  double* condition, bool* warning) const {
    const Element& e = layout_.element;
    const int N = layout_.count();
    const int n_gen = pkl.size();
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n_gen, N);
    for (int g = 0; g < pkl.n_x; ++g) {
      // div((x - x_E) m_a) = (2 + |a|) m_a, paired with the interior moments.
      const double coef = pkl.divergence_coefficients(g, g);
      R(g, layout_.interior_dof(g)) -= e.area * coef;
    }
    for (const EdgeData& edge : edges_) {
      auto [vx, vy] = pkl.values(edge.rule.points);
      for (int g = 0; g < n_gen; ++g) {
        const Eigen::VectorXd f = vx.col(g) * edge.normal.x() + vy.col(g) * edge.normal.y();
        add_boundary_row(R, g, edge, f);
      }
    }

    auto [gvx, gvy] = pkl.values(cell_rule_.points);
    const Eigen::VectorXd sqw = cell_rule_.weights.array().sqrt();
    Eigen::MatrixXd V(2 * static_cast<int>(cell_rule_.points.size()), n_gen);
    V.topRows(gvx.rows()) = sqw.asDiagonal() * gvx;
    V.bottomRows(gvy.rows()) = sqw.asDiagonal() * gvy;
    // Column scaling keeps the mixed x-part/curl-part magnitudes comparable;
    // the QR of the weighted value matrix then plays the role of an L2
    // orthonormalization of the generators.
    Eigen::VectorXd scale(n_gen);
    for (int g = 0; g < n_gen; ++g) {
      const double norm = V.col(g).norm();
      if (!(norm > 0.0))
        throw std::runtime_error("P_{k,l} projector: zero generator norm");
      scale[g] = 1.0 / norm;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V * scale.asDiagonal());
    if (qr.rank() < n_gen)
      throw std::runtime_error(
          "P_{k,l} projector: generator Gram is numerically rank-deficient; "
          "increase ell or repair the cell");
    const Eigen::MatrixXd Rfac =
        qr.matrixR().topLeftCorner(n_gen, n_gen).triangularView<Eigen::Upper>();
    const double cond_sqrt = std::abs(Rfac(0, 0) / Rfac(n_gen - 1, n_gen - 1));
    if (condition) *condition = cond_sqrt * cond_sqrt;
    if (warning) *warning = cond_sqrt * cond_sqrt > warn_threshold;

    // Solve (V^T V) X = R in the scaled coordinates via the triangular factor.
    Eigen::MatrixXd rhs = scale.asDiagonal() * R;
    rhs = qr.colsPermutation().transpose() * rhs;
    rhs = Rfac.transpose().triangularView<Eigen::Lower>().solve(rhs);
    rhs = Rfac.triangularView<Eigen::Upper>().solve(rhs);
    rhs = qr.colsPermutation() * rhs;
    return scale.asDiagonal() * rhs;
  }

 private:
  const DofLayout& layout_;
  int k_;
  int n_k_;
  MonomialBasis basis_;
  CellRule cell_rule_;
  Eigen::MatrixXd cell_values_, cell_grad_x_, cell_grad_y_;
  Eigen::MatrixXd mass_;
  Eigen::VectorXd integrals_;
  std::vector<EdgeData> edges_;
};

}  // namespace

ElementProjections build_projections(const DofLayout& layout, int ell,
                                     const ProjectionOptions& options) {
  const Workspace ws(layout, ell, options);
  const PklBasis pkl =
      build_pkl_basis(layout.element.centroid, layout.element.diameter, layout.k, ell);
  ElementProjections p;
  p.D = ws.build_dof_matrix();
  p.pi_nabla = ws.build_pi_nabla();
  p.pi_zero = ws.build_pi_zero(p.pi_nabla);
  p.pi_zero_grad = ws.build_pi_zero_grad();
  p.pi_p_grad = ws.build_pi_p_grad(pkl, options.condition_warning_threshold,
                                   &p.pkl_gram_condition, &p.condition_warning);
  return p;
}

Eigen::MatrixXd dof_matrix(const DofLayout& layout) {
  return Workspace(layout, 0, {}).build_dof_matrix();
}

Eigen::MatrixXd elliptic_projector(const DofLayout& layout) {
  return Workspace(layout, 0, {}).build_pi_nabla();
}

Eigen::MatrixXd l2_projector(const DofLayout& layout, const Eigen::MatrixXd& pi_nabla) {
  return Workspace(layout, 0, {}).build_pi_zero(pi_nabla);
}

Eigen::MatrixXd grad_l2_projector(const DofLayout& layout) {
  return Workspace(layout, 0, {}).build_pi_zero_grad();
}

Eigen::MatrixXd pkl_grad_projector(const DofLayout& layout, const PklBasis& pkl) {
  const Workspace ws(layout, pkl.ell, {});
  return ws.build_pi_p_grad(pkl, 1e12, nullptr, nullptr);
}

}  // namespace sfvem
