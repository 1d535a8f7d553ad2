// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "sfvem/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace sfvem {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric Jacobi matrix built
// from the three-term recurrence, weights mu0 * (first eigenvector row)^2.
void golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0,
                  Eigen::VectorXd& x, Eigen::VectorXd& w) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = diag[i];
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = offdiag[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x = es.eigenvalues();
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    w[i] = mu0 * v0 * v0;
  }
}

}  // namespace

void gauss_legendre_01(int npoints, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  if (npoints < 1) throw std::invalid_argument("gauss_legendre_01: need >= 1 point");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(npoints);
  Eigen::VectorXd off(std::max(0, npoints - 1));
  for (int i = 1; i < npoints; ++i) {
    const double n = static_cast<double>(i);
    off[i - 1] = n / std::sqrt(4.0 * n * n - 1.0);
  }
  golub_welsch(diag, off, 2.0, x, w);
  // Map [-1,1] -> [0,1].
  x = (x.array() + 1.0) * 0.5;
  w *= 0.5;
}

void gauss_jacobi_10_01(int npoints, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  if (npoints < 1) throw std::invalid_argument("gauss_jacobi_10_01: need >= 1 point");
  // Jacobi weight (1-x)^1 (1+x)^0 on [-1,1].
  Eigen::VectorXd diag(npoints), off(std::max(0, npoints - 1));
  for (int i = 0; i < npoints; ++i) {
    const double n = static_cast<double>(i);
    diag[i] = -1.0 / ((2.0 * n + 1.0) * (2.0 * n + 3.0));
  }
  for (int i = 1; i < npoints; ++i) {
    const double n = static_cast<double>(i);
    off[i - 1] = std::sqrt(n * (n + 1.0)) / (2.0 * n + 1.0);
  }
  golub_welsch(diag, off, 2.0, x, w);
  // t = (1+x)/2 : weight (1-t) on [0,1] with total mass 1/2.
  x = (x.array() + 1.0) * 0.5;
  w *= 0.25;
}

std::vector<Triangle> triangulate_cell(const Element& cell) {
  if (!point_in_kernel(cell.vertices, cell.star_point, 1e-12 * cell.diameter))
    throw std::runtime_error("triangulate_cell: star point is outside the polygon kernel");
  std::vector<Triangle> fan;
  fan.reserve(cell.vertices.size());
  for (int j = 0; j < cell.num_vertices(); ++j) {
    Triangle t{cell.star_point, cell.edge_start(j), cell.edge_end(j), 0.0};
    t.area = 0.5 * cross2(t.a, t.b, t.c);
    if (t.area <= 0.0)
      throw std::runtime_error("triangulate_cell: non-positive fan triangle at side " +
                               std::to_string(j));
    fan.push_back(t);
  }
  return fan;
}

CellRule build_cell_rule(const Element& cell, int exactness) {
  if (exactness < 0) throw std::invalid_argument("build_cell_rule: negative exactness");
  if (exactness > kMaxQuadratureDegree)
    throw std::invalid_argument("build_cell_rule: exactness " + std::to_string(exactness) +
                                " above the implemented maximum " +
                                std::to_string(kMaxQuadratureDegree));
  const int m = (exactness + 2) / 2;  // ceil((d+1)/2)
  Eigen::VectorXd xi, wi, eta, weta;
  gauss_jacobi_10_01(m, xi, wi);
  gauss_legendre_01(m, eta, weta);

  const std::vector<Triangle> fan = triangulate_cell(cell);
  CellRule rule;
  rule.exactness = exactness;
  rule.points.reserve(fan.size() * m * m);
  std::vector<double> weights;
  weights.reserve(fan.size() * m * m);
  for (const Triangle& t : fan) {
    // Reference map (u,v) in simplex: p = a + u (b-a) + v (c-a),
    // collapsed coordinates u = xi, v = eta (1 - xi).
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double u = xi[i];
        const double v = eta[j] * (1.0 - xi[i]);
        rule.points.push_back(t.a + u * (t.b - t.a) + v * (t.c - t.a));
        weights.push_back(2.0 * t.area * wi[i] * weta[j]);
      }
  }
  rule.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), weights.size());
  return rule;
}

EdgeRule build_edge_rule(const Vec2& a, const Vec2& b, int exactness) {
  if (exactness < 0) throw std::invalid_argument("build_edge_rule: negative exactness");
  if (exactness > 2 * kMaxQuadratureDegree)
    throw std::invalid_argument("build_edge_rule: exactness above the implemented maximum " +
                                std::to_string(2 * kMaxQuadratureDegree));
  const int m = (exactness + 2) / 2;
  Eigen::VectorXd x, w;
  gauss_legendre_01(m, x, w);
  EdgeRule rule;
  rule.exactness = exactness;
  rule.points.reserve(m);
  const double len = (b - a).norm();
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    rule.points.push_back(a + x[i] * (b - a));
    rule.weights[i] = w[i] * len;
  }
  return rule;
}

}  // namespace sfvem
