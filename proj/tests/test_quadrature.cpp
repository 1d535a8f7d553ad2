// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sfvem/quadrature.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace sfvem;
using sfvem::testing::green_monomial_integral;

TEST_CASE("fan triangulation of the unit square") {
  const Element square = Element::unit_square();
  const auto fan = triangulate_cell(square);
  REQUIRE(fan.size() == 4);
  for (const Triangle& t : fan) CHECK(t.area == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("fan triangulation of a triangle splits it in three") {
  const Element tri = Element::from_vertices({Vec2(0, 0), Vec2(1, 0), Vec2(0.3, 0.8)});
  const auto fan = triangulate_cell(tri);
  REQUIRE(fan.size() == 3);
  double total = 0.0;
  for (const Triangle& t : fan) {
    CHECK(t.area > 0.0);
    total += t.area;
  }
  CHECK(total == doctest::Approx(tri.area).epsilon(1e-14));
}

TEST_CASE("fan triangulation of a concave octagon cell") {
  const PolygonMesh mesh = generate_mesh(MeshFamily::concave_octagon(0.15), 4);
  const Element cell = Element::from_mesh_cell(mesh, 5);
  const auto fan = triangulate_cell(cell);
  REQUIRE(fan.size() == 8);
  double total = 0.0;
  for (const Triangle& t : fan) {
    CHECK(t.area > 0.0);
    total += t.area;
  }
  CHECK(total == doctest::Approx(cell.area).epsilon(1e-13));
}

TEST_CASE("cell rule basics on the unit square") {
  const Element square = Element::unit_square();
  const CellRule rule = build_cell_rule(square, 6);
  CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rule.weights.minCoeff() > 0.0);

  double x2y = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    x2y += rule.weights[q] * rule.points[q].x() * rule.points[q].x() * rule.points[q].y();
  CHECK(x2y == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("cell rule matches the exact integral on every cell and monomial") {
  for (auto family : {MeshFamily::quad(), MeshFamily::pentagon(), MeshFamily::concave_octagon()}) {
    const PolygonMesh mesh = generate_mesh(family, 4);
    const int exactness = 10;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const Element cell = Element::from_mesh_cell(mesh, c);
      const CellRule rule = build_cell_rule(cell, exactness);
      CHECK(rule.weights.sum() == doctest::Approx(cell.area).epsilon(1e-13));
      for (int px = 0; px <= exactness; ++px)
        for (int py = 0; py + px <= exactness; py += 2) {
          double num = 0.0;
          for (std::size_t q = 0; q < rule.points.size(); ++q)
            num += rule.weights[q] * std::pow(rule.points[q].x(), px) *
                   std::pow(rule.points[q].y(), py);
          const double exact = green_monomial_integral(cell.vertices, px, py);
          CHECK(num == doctest::Approx(exact).epsilon(1e-12));
        }
    }
  }
}

TEST_CASE("degree above the table limit is rejected with the maximum named") {
  const Element square = Element::unit_square();
  CHECK_THROWS_WITH_AS(build_cell_rule(square, kMaxQuadratureDegree + 1),
                       doctest::Contains(std::to_string(kMaxQuadratureDegree).c_str()),
                       std::invalid_argument);
}

TEST_CASE("edge rule basics") {
  const EdgeRule unit = build_edge_rule(Vec2(0, 0), Vec2(1, 0), 3);
  CHECK(unit.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  double x3 = 0.0;
  for (std::size_t q = 0; q < unit.points.size(); ++q)
    x3 += unit.weights[q] * std::pow(unit.points[q].x(), 3);
  CHECK(x3 == doctest::Approx(0.25).epsilon(1e-14));

  const Vec2 a(0.25, 0.5), b(0.5, 1.0);
  const EdgeRule slanted = build_edge_rule(a, b, 2);
  CHECK(slanted.weights.sum() == doctest::Approx((b - a).norm()).epsilon(1e-14));
}

TEST_CASE("slanted pentagon edge integrates a degree-7 polynomial exactly") {
  const PolygonMesh mesh = generate_mesh(MeshFamily::pentagon(0.1), 4);
  // Slanted side of a concave pentagon: from the bottom midpoint to the
  // interior point.
  const Element cell = Element::from_mesh_cell(mesh, 0);
  const Vec2 a = cell.vertices[1], b = cell.vertices[2];
  REQUIRE(std::abs(a.x() - b.x()) > 1e-9);
  REQUIRE(std::abs(a.y() - b.y()) > 1e-9);

  const EdgeRule rule = build_edge_rule(a, b, 7);
  // f(x,y) = x^3 y^4 restricted to the edge is a degree-7 polynomial in the
  // parameter; integrate the closed-form antiderivative coefficientwise.
  double numeric = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    numeric += rule.weights[q] * std::pow(rule.points[q].x(), 3) * std::pow(rule.points[q].y(), 4);

  const double len = (b - a).norm();
  // Expand (ax + t dx)^3 (ay + t dy)^4 over t in [0,1].
  std::vector<double> xt(4, 0.0), yt(5, 0.0);
  for (int j = 0; j <= 3; ++j) {
    double binom = 1.0;
    for (int i = 0; i < j; ++i) binom = binom * (3 - i) / (i + 1);
    xt[j] = binom * std::pow(a.x(), 3 - j) * std::pow(b.x() - a.x(), j);
  }
  for (int j = 0; j <= 4; ++j) {
    double binom = 1.0;
    for (int i = 0; i < j; ++i) binom = binom * (4 - i) / (i + 1);
    yt[j] = binom * std::pow(a.y(), 4 - j) * std::pow(b.y() - a.y(), j);
  }
  double exact = 0.0;
  for (std::size_t i = 0; i < xt.size(); ++i)
    for (std::size_t j = 0; j < yt.size(); ++j) exact += xt[i] * yt[j] / (i + j + 1);
  exact *= len;
  CHECK(numeric == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("octagon cell integrates a scaled monomial to the exact value") {
  const PolygonMesh mesh = generate_mesh(MeshFamily::concave_octagon(0.15), 4);
  const Element cell = Element::from_mesh_cell(mesh, 9);
  const MonomialBasis basis(cell.centroid, cell.diameter, 5);
  const int idx = multi_index_position(3, 2);
  const CellRule rule = build_cell_rule(cell, 8);
  double numeric = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    numeric += rule.weights[q] * basis.value(idx, rule.points[q]);
  const auto poly = sfvem::testing::scaled_monomial_poly(cell.centroid, cell.diameter, 3, 2);
  const double exact = sfvem::testing::green_poly_integral(cell.vertices, poly);
  CHECK(numeric == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("gauss rules integrate prescribed degrees") {
  for (int n : {1, 2, 5, 9, 17}) {
    Eigen::VectorXd x, w;
    gauss_legendre_01(n, x, w);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += w[i] * std::pow(x[i], d);
      CHECK(acc == doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
    }
    gauss_jacobi_10_01(n, x, w);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += w[i] * std::pow(x[i], d);
      // int_0^1 t^d (1-t) dt
      CHECK(acc == doctest::Approx(1.0 / (d + 1) - 1.0 / (d + 2)).epsilon(1e-13));
    }
  }
}
