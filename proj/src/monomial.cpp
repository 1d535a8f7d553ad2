// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "sfvem/monomial.hpp"

#include <cmath>
#include <stdexcept>

namespace sfvem {

std::vector<MultiIndex> graded_multi_indices(int degree) {
  std::vector<MultiIndex> out;
  out.reserve(poly_space_dim(degree));
  for (int d = 0; d <= degree; ++d)
    for (int ay = 0; ay <= d; ++ay)
      out.push_back(MultiIndex{d - ay, ay});
  return out;
}

int multi_index_position(int ax, int ay) {
  const int d = ax + ay;
  return d * (d + 1) / 2 + ay;
}

MonomialBasis::MonomialBasis(const Vec2& center, double hscale, int degree)
    : center_(center), hscale_(hscale), degree_(degree),
      alphas_(graded_multi_indices(degree)) {
  if (hscale <= 0.0) throw std::invalid_argument("MonomialBasis: hscale must be positive");
  if (degree < 0) throw std::invalid_argument("MonomialBasis: negative degree");
}

namespace {
inline double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}
}  // namespace

double MonomialBasis::value(int i, const Vec2& p) const {
  const double xi = (p.x() - center_.x()) / hscale_;
  const double eta = (p.y() - center_.y()) / hscale_;
  return ipow(xi, alphas_[i].ax) * ipow(eta, alphas_[i].ay);
}

Vec2 MonomialBasis::gradient(int i, const Vec2& p) const {
  const double xi = (p.x() - center_.x()) / hscale_;
  const double eta = (p.y() - center_.y()) / hscale_;
  const MultiIndex& a = alphas_[i];
  Vec2 g = Vec2::Zero();
  if (a.ax > 0) g.x() = a.ax * ipow(xi, a.ax - 1) * ipow(eta, a.ay) / hscale_;
  if (a.ay > 0) g.y() = a.ay * ipow(xi, a.ax) * ipow(eta, a.ay - 1) / hscale_;
  return g;
}

double MonomialBasis::laplacian(int i, const Vec2& p) const {
  const double xi = (p.x() - center_.x()) / hscale_;
  const double eta = (p.y() - center_.y()) / hscale_;
  const MultiIndex& a = alphas_[i];
  double lap = 0.0;
  if (a.ax >= 2) lap += a.ax * (a.ax - 1) * ipow(xi, a.ax - 2) * ipow(eta, a.ay);
  if (a.ay >= 2) lap += a.ay * (a.ay - 1) * ipow(xi, a.ax) * ipow(eta, a.ay - 2);
  return lap / (hscale_ * hscale_);
}

Eigen::MatrixXd MonomialBasis::values(const std::vector<Vec2>& points) const {
  Eigen::MatrixXd table(points.size(), size());
  for (std::size_t q = 0; q < points.size(); ++q)
    for (int i = 0; i < size(); ++i) table(q, i) = value(i, points[q]);
  return table;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd>
MonomialBasis::gradients(const std::vector<Vec2>& points) const {
  Eigen::MatrixXd gx(points.size(), size()), gy(points.size(), size());
  for (std::size_t q = 0; q < points.size(); ++q)
    for (int i = 0; i < size(); ++i) {
      const Vec2 g = gradient(i, points[q]);
      gx(q, i) = g.x();
      gy(q, i) = g.y();
    }
  return {gx, gy};
}

Eigen::MatrixXd MonomialBasis::derivative_map(int axis) const {
  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(poly_space_dim(degree_ - 1), size());
  for (int i = 0; i < size(); ++i) {
    const MultiIndex& a = alphas_[i];
    const int e = (axis == 0) ? a.ax : a.ay;
    if (e == 0) continue;
    const int row = (axis == 0) ? multi_index_position(a.ax - 1, a.ay)
                                : multi_index_position(a.ax, a.ay - 1);
    map(row, i) = e / hscale_;
  }
  return map;
}

Eigen::MatrixXd MonomialBasis::laplacian_map() const {
  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(poly_space_dim(degree_ - 2), size());
  const double h2 = hscale_ * hscale_;
  for (int i = 0; i < size(); ++i) {
    const MultiIndex& a = alphas_[i];
    if (a.ax >= 2) map(multi_index_position(a.ax - 2, a.ay), i) += a.ax * (a.ax - 1) / h2;
    if (a.ay >= 2) map(multi_index_position(a.ax, a.ay - 2), i) += a.ay * (a.ay - 1) / h2;
  }
  return map;
}

EdgeMonomialBasis::EdgeMonomialBasis(const Vec2& a, const Vec2& b, int degree)
    : midpoint_(0.5 * (a + b)), span_(b - a), length_(span_.norm()), degree_(degree) {
  if (length_ <= 0.0) throw std::invalid_argument("EdgeMonomialBasis: zero-length edge");
  if (degree < 0) throw std::invalid_argument("EdgeMonomialBasis: negative degree");
}

double EdgeMonomialBasis::param(const Vec2& p) const {
  return span_.dot(p - midpoint_) / (length_ * length_);
}

double EdgeMonomialBasis::value(int j, double t) const {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= t;
  return r;
}

}  // namespace sfvem
