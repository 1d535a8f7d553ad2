// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/fine_fem.hpp"

#include <random>

using namespace sfvem;
using sfvem::testing::FineOracle;

// The submesh realizes the virtual functions with quadratic elements; the
// trace polynomials are quadratic (k = 2), so the only discrepancy against
// the implementation's projectors is the interior discretization error.

TEST_CASE("elliptic projection of a vertex basis function matches the submesh solve") {
  const DofLayout layout = DofLayout::standalone(Element::unit_square(), 2);
  const ElementProjections proj = build_projections(layout, 1);
  FineOracle oracle(layout, 56);
  CHECK(oracle.triangle_count() >= 10000);

  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(layout.count());
  dofs[layout.vertex_dof(0)] = 1.0;
  oracle.realize(dofs);

  const Eigen::VectorXd reference = oracle.h1_projection();
  const Eigen::VectorXd computed = proj.pi_nabla * dofs;
  CHECK((computed - reference).norm() <= 1e-6);
}

TEST_CASE("L2 projection of an edge basis function matches the submesh solve") {
  const DofLayout layout = DofLayout::standalone(Element::unit_square(), 2);
  const ElementProjections proj = build_projections(layout, 1);
  FineOracle oracle(layout, 56);

  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(layout.count());
  dofs[layout.edge_dof(1, 0)] = 1.0;
  oracle.realize(dofs);

  CHECK((proj.pi_zero * dofs - oracle.l2_projection()).norm() <= 1e-6);
  CHECK((proj.pi_nabla * dofs - oracle.h1_projection()).norm() <= 1e-6);
}

TEST_CASE("gradient projection of a random virtual function matches the submesh solve") {
  const DofLayout layout = DofLayout::standalone(Element::unit_square(), 2);
  const ElementProjections proj = build_projections(layout, 1);
  FineOracle oracle(layout, 56);

  std::mt19937 rng(99);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd dofs(layout.count());
  for (int i = 0; i < dofs.size(); ++i) dofs[i] = gauss(rng);
  oracle.realize(dofs);

  const Eigen::VectorXd reference = oracle.gradient_projection();
  const Eigen::VectorXd computed = proj.pi_zero_grad * dofs;
  CHECK((computed - reference).norm() <= 1e-6 * std::max(1.0, reference.norm()));
}

TEST_CASE("enriched gradient projection is orthogonal on the submesh") {
  const DofLayout layout = DofLayout::standalone(Element::unit_square(), 2);
  const PklBasis pkl = build_pkl_basis(layout.element.centroid, layout.element.diameter, 2, 1);
  const ElementProjections proj = build_projections(layout, 1);
  FineOracle oracle(layout, 56);

  std::mt19937 rng(7);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd dofs(layout.count());
  for (int i = 0; i < dofs.size(); ++i) dofs[i] = gauss(rng);
  oracle.realize(dofs);

  const Eigen::VectorXd coords = proj.pi_p_grad * dofs;
  const Eigen::VectorXd residual = oracle.orthogonality_residual(pkl, coords);
  CHECK(residual.maxCoeff() <= 1e-6);
}

TEST_CASE("projections on a concave octagon cell match the submesh solve") {
  const PolygonMesh mesh = generate_mesh(MeshFamily::concave_octagon(0.15), 2);
  const DofLayout layout = DofLayout::from_mesh(mesh, 1, 2);
  const ElementProjections proj = build_projections(layout, 3);
  FineOracle oracle(layout, 36);
  CHECK(oracle.triangle_count() >= 10000);

  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(layout.count());
  dofs[layout.vertex_dof(3)] = 1.0;
  dofs[layout.edge_dof(0, 0)] = 0.5;
  oracle.realize(dofs);

  CHECK((proj.pi_nabla * dofs - oracle.h1_projection()).norm() <= 1e-6);
  CHECK((proj.pi_zero * dofs - oracle.l2_projection()).norm() <= 1e-6);
  const PklBasis pkl = build_pkl_basis(layout.element.centroid, layout.element.diameter, 2, 3);
  const Eigen::VectorXd residual =
      oracle.orthogonality_residual(pkl, proj.pi_p_grad * dofs);
  CHECK(residual.maxCoeff() <= 1e-6);
}
