// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sfvem/projection.hpp"

#include <random>

using namespace sfvem;

namespace {

int family_ell(MeshFamilyTag tag) {
  switch (tag) {
    case MeshFamilyTag::Quad: return 1;
    case MeshFamilyTag::Pentagon: return 2;
    case MeshFamilyTag::ConcaveOctagon: return 3;
  }
  return 1;
}

}  // namespace

TEST_CASE("DOF layout counts") {
  const DofLayout layout = DofLayout::standalone(Element::unit_square(), 3);
  CHECK(layout.count() == 4 * 3 + 3);
  CHECK(layout.vertex_dof(2) == 2);
  CHECK(layout.edge_dof(0, 0) == 4);
  CHECK(layout.interior_dof(0) == 12);
}

TEST_CASE("DOF matrix rows behave like the defining functionals") {
  const DofLayout layout = DofLayout::standalone(Element::unit_square(), 2);
  const Eigen::MatrixXd D = dof_matrix(layout);
  REQUIRE(D.rows() == layout.count());
  REQUIRE(D.cols() == 6);
  // Vertex DOF of the constant monomial is 1; the scaled interior moment of
  // the constant against itself is also 1.
  for (int j = 0; j < 4; ++j) CHECK(D(layout.vertex_dof(j), 0) == doctest::Approx(1.0));
  CHECK(D(layout.interior_dof(0), 0) == doctest::Approx(1.0).epsilon(1e-13));
  // Edge moments of the constant against the degree-0 edge monomial are 1.
  for (int e = 0; e < 4; ++e) CHECK(D(layout.edge_dof(e, 0), 0) == doctest::Approx(1.0));
}

TEST_CASE("DOF matrix entries match a doubled-exactness recomputation") {
  const PolygonMesh mesh = generate_mesh(MeshFamily::pentagon(0.1), 2);
  const DofLayout layout = DofLayout::from_mesh(mesh, 3, 3);
  const Eigen::MatrixXd D = dof_matrix(layout);
  ProjectionOptions precise;
  precise.cell_exactness = default_cell_exactness(3, 0) + 6;
  precise.edge_exactness = default_edge_exactness(3, 0) + 6;
  const ElementProjections refined = build_projections(layout, 0, precise);
  CHECK((D - refined.D).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("projectors reproduce polynomials on every family") {
  std::mt19937 rng(2024);
  std::normal_distribution<double> gauss;
  for (auto family : {MeshFamily::quad(), MeshFamily::pentagon(), MeshFamily::concave_octagon()}) {
    const PolygonMesh mesh = generate_mesh(family, 2);
    const int ell = family_ell(family.tag);
    for (int k : {2, 3}) {
      for (int c = 0; c < std::min(4, mesh.num_cells()); ++c) {
        const DofLayout layout = DofLayout::from_mesh(mesh, c, k);
        const ElementProjections proj = build_projections(layout, ell);
        const int n_k = poly_space_dim(k);

        const Eigen::MatrixXd reproduce_nabla = proj.pi_nabla * proj.D;
        const Eigen::MatrixXd reproduce_zero = proj.pi_zero * proj.D;
        CHECK((reproduce_nabla - Eigen::MatrixXd::Identity(n_k, n_k)).cwiseAbs().maxCoeff() <=
              1e-10);
        CHECK((reproduce_zero - Eigen::MatrixXd::Identity(n_k, n_k)).cwiseAbs().maxCoeff() <=
              1e-10);

        const PklBasis pkl =
            build_pkl_basis(layout.element.centroid, layout.element.diameter, k, ell);
        const Eigen::MatrixXd grad_coords = pkl_gradient_coordinates(pkl);
        CHECK((proj.pi_p_grad * proj.D - grad_coords).cwiseAbs().maxCoeff() <= 1e-10);

        // Random p in P_k: projections return p itself.
        Eigen::VectorXd coeff(n_k);
        for (int i = 0; i < n_k; ++i) coeff[i] = gauss(rng);
        const Eigen::VectorXd dofs = proj.D * coeff;
        CHECK((proj.pi_nabla * dofs - coeff).norm() <= 1e-10 * coeff.norm());
        CHECK((proj.pi_zero * dofs - coeff).norm() <= 1e-10 * coeff.norm());
      }
    }
  }
}

TEST_CASE("elliptic projector maps the constant DOF vector to the constant") {
  const DofLayout layout = DofLayout::standalone(Element::unit_square(), 2);
  const ElementProjections proj = build_projections(layout, 1);
  Eigen::VectorXd ones_coeff = Eigen::VectorXd::Zero(6);
  ones_coeff[0] = 1.0;
  const Eigen::VectorXd dofs = proj.D * ones_coeff;
  const Eigen::VectorXd result = proj.pi_nabla * dofs;
  CHECK(result[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.tail(5).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("moments of the L2 projection equal the interior DOFs") {
  const PolygonMesh mesh = generate_mesh(MeshFamily::concave_octagon(0.15), 2);
  const DofLayout layout = DofLayout::from_mesh(mesh, 0, 3);
  const ElementProjections proj = build_projections(layout, 3);
  std::mt19937 rng(5);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd dofs(layout.count());
  for (int i = 0; i < dofs.size(); ++i) dofs[i] = gauss(rng);

  // (Pi0 v, m_b) / |E| must equal the interior moment DOF for |b| <= k-2.
  const MonomialBasis basis(layout.element.centroid, layout.element.diameter, 3);
  const CellRule rule = build_cell_rule(layout.element, 8);
  const Eigen::MatrixXd values = basis.values(rule.points);
  const Eigen::MatrixXd mass = values.transpose() * rule.weights.asDiagonal() * values;
  const Eigen::VectorXd coeff = proj.pi_zero * dofs;
  for (int b = 0; b < poly_space_dim(1); ++b) {
    const double moment = mass.row(b).dot(coeff) / layout.element.area;
    CHECK(moment == doctest::Approx(dofs[layout.interior_dof(b)]).epsilon(1e-11));
  }
}

TEST_CASE("gradient projector is exact on linear and polynomial data") {
  const PolygonMesh mesh = generate_mesh(MeshFamily::pentagon(0.1), 2);
  const DofLayout layout = DofLayout::from_mesh(mesh, 1, 2);
  const ElementProjections proj = build_projections(layout, 2);
  const int n_km1 = poly_space_dim(1);
  const MonomialBasis basis(layout.element.centroid, layout.element.diameter, 2);

  // v with grad v = (1, 0): the scaled monomial m_(1,0) has gradient e1/h.
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(6);
  coeff[multi_index_position(1, 0)] = layout.element.diameter;
  const Eigen::VectorXd dofs = proj.D * coeff;
  const Eigen::VectorXd grad = proj.pi_zero_grad * dofs;
  CHECK(grad[0] == doctest::Approx(1.0).epsilon(1e-12));  // x-component constant term
  CHECK(grad.segment(1, n_km1 - 1).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(grad.tail(n_km1).cwiseAbs().maxCoeff() <= 1e-12);

  // Every p in P_k: the projector returns the exact gradient coefficients.
  std::mt19937 rng(12);
  std::normal_distribution<double> gauss;
  const Eigen::MatrixXd dx = basis.derivative_map(0);
  const Eigen::MatrixXd dy = basis.derivative_map(1);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd p(6);
    for (int i = 0; i < 6; ++i) p[i] = gauss(rng);
    const Eigen::VectorXd g = proj.pi_zero_grad * (proj.D * p);
    CHECK((g.head(n_km1) - dx * p).norm() <= 1e-11);
    CHECK((g.tail(n_km1) - dy * p).norm() <= 1e-11);
  }
}

TEST_CASE("enriched gradient projector kills constants and reproduces gradients") {
  const PolygonMesh mesh = generate_mesh(MeshFamily::concave_octagon(0.15), 2);
  const DofLayout layout = DofLayout::from_mesh(mesh, 2, 2);
  const PklBasis pkl = build_pkl_basis(layout.element.centroid, layout.element.diameter, 2, 3);
  const Eigen::MatrixXd pi_p = pkl_grad_projector(layout, pkl);
  const Eigen::MatrixXd D = dof_matrix(layout);

  Eigen::VectorXd constant = Eigen::VectorXd::Zero(6);
  constant[0] = 1.0;
  CHECK((pi_p * (D * constant)).cwiseAbs().maxCoeff() <= 1e-12);

  const Eigen::MatrixXd grad_coords = pkl_gradient_coordinates(pkl);
  CHECK((pi_p * D - grad_coords).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("projector matrices are translation invariant") {
  const PolygonMesh mesh = generate_mesh(MeshFamily::concave_octagon(0.15), 2);
  for (int c : {0, 3}) {
    Element cell = Element::from_mesh_cell(mesh, c);
    std::vector<Vec2> shifted = cell.vertices;
    for (Vec2& v : shifted) v += Vec2(0.37, 0.11);
    const DofLayout base = DofLayout::standalone(cell, 3);
    const DofLayout moved = DofLayout::standalone(Element::from_vertices(shifted), 3);
    const ElementProjections pa = build_projections(base, 3);
    const ElementProjections pb = build_projections(moved, 3);
    auto relative_gap = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
      return (a - b).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff();
    };
    CHECK(relative_gap(pa.D, pb.D) <= 1e-12);
    CHECK(relative_gap(pa.pi_nabla, pb.pi_nabla) <= 1e-12);
    CHECK(relative_gap(pa.pi_zero, pb.pi_zero) <= 1e-12);
    CHECK(relative_gap(pa.pi_zero_grad, pb.pi_zero_grad) <= 1e-12);
    CHECK(relative_gap(pa.pi_p_grad, pb.pi_p_grad) <= 1e-12);
  }
}

TEST_CASE("neighbouring cells see the same edge moment DOFs") {
  // Interpolate a polynomial through the D matrices of two cells sharing an
  // edge; the shared edge-moment DOFs must coincide.
  const PolygonMesh mesh = generate_mesh(MeshFamily::quad(), 2);
  const int k = 3;
  int shared_edge = -1;
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (!mesh.edge_on_boundary(e)) {
      shared_edge = e;
      break;
    }
  REQUIRE(shared_edge >= 0);
  const EdgeRecord& rec = mesh.edge(shared_edge);

  auto edge_moment_from_cell = [&](int cell, int m) {
    const DofLayout layout = DofLayout::from_mesh(mesh, cell, k);
    const Eigen::MatrixXd D = dof_matrix(layout);
    int local = -1;
    for (int j = 0; j < layout.num_vertices(); ++j)
      if (mesh.cell_edge(cell, j) == shared_edge) local = j;
    REQUIRE(local >= 0);
    // Evaluate the DOF of a global polynomial v(x, y) = x^2 y via its local
    // monomial coefficients. Use the exact expansion through point samples.
    const MonomialBasis basis(layout.element.centroid, layout.element.diameter, k);
    // Solve for local coefficients from values at quadrature points.
    const CellRule rule = build_cell_rule(layout.element, 2 * k);
    Eigen::MatrixXd V = basis.values(rule.points);
    Eigen::VectorXd f(rule.points.size());
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      f[q] = rule.points[q].x() * rule.points[q].x() * rule.points[q].y();
    const Eigen::VectorXd coeff = V.colPivHouseholderQr().solve(f);
    return D.row(layout.edge_dof(local, m)).dot(coeff);
  };
  for (int m = 0; m < k - 1; ++m) {
    const double left = edge_moment_from_cell(rec.left_cell, m);
    const double right = edge_moment_from_cell(rec.right_cell, m);
    CHECK(left == doctest::Approx(right).epsilon(1e-11));
  }
}
