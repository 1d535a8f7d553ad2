// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

// Test-only reference computations, kept independent of the library's
// quadrature/projection internals: Green's-theorem monomial integrals,
// symbolic 2D polynomial algebra, and closed-form 1D edge integrals.

#pragma once

#include "sfvem/element.hpp"
#include "sfvem/monomial.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace sfvem::testing {

/// Sparse bivariate polynomial in the raw coordinates (x, y).
struct Poly2 {
  std::map<std::pair<int, int>, double> terms;  // (px, py) -> coefficient

  void add(int px, int py, double c) {
    if (c == 0.0) return;
    terms[{px, py}] += c;
  }
  double eval(const Vec2& p) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms)
      acc += c * std::pow(p.x(), e.first) * std::pow(p.y(), e.second);
    return acc;
  }
  Poly2 dx() const {
    Poly2 out;
    for (const auto& [e, c] : terms)
      if (e.first > 0) out.add(e.first - 1, e.second, c * e.first);
    return out;
  }
  Poly2 dy() const {
    Poly2 out;
    for (const auto& [e, c] : terms)
      if (e.second > 0) out.add(e.first, e.second - 1, c * e.second);
    return out;
  }
  Poly2 operator*(const Poly2& other) const {
    Poly2 out;
    for (const auto& [ea, ca] : terms)
      for (const auto& [eb, cb] : other.terms)
        out.add(ea.first + eb.first, ea.second + eb.second, ca * cb);
    return out;
  }
  Poly2 operator+(const Poly2& other) const {
    Poly2 out = *this;
    for (const auto& [e, c] : other.terms) out.add(e.first, e.second, c);
    return out;
  }
  Poly2 scaled(double s) const {
    Poly2 out;
    for (const auto& [e, c] : terms) out.add(e.first, e.second, c * s);
    return out;
  }
};

/// Scaled monomial ((x-cx)/h)^ax ((y-cy)/h)^ay expanded into raw powers.
inline Poly2 scaled_monomial_poly(const Vec2& center, double h, int ax, int ay) {
  auto binomial_expand = [](double c0, double scale, int power) {
    // ((x - c0) * scale)^power as univariate coefficients.
    std::vector<double> coeff(power + 1, 0.0);
    for (int j = 0; j <= power; ++j) {
      double binom = 1.0;
      for (int i = 0; i < j; ++i) binom = binom * (power - i) / (i + 1);
      coeff[j] = binom * std::pow(-c0, power - j) * std::pow(scale, power);
    }
    return coeff;
  };
  const std::vector<double> cx = binomial_expand(center.x(), 1.0 / h, ax);
  const std::vector<double> cy = binomial_expand(center.y(), 1.0 / h, ay);
  Poly2 out;
  for (int i = 0; i <= ax; ++i)
    for (int j = 0; j <= ay; ++j) out.add(i, j, cx[i] * cy[j]);
  return out;
}

/// Exact integral of x^px y^py over the polygon via Green's theorem,
/// integrating the x-antiderivative along each edge with the closed-form
/// 1D antiderivative of the resulting polynomial in the edge parameter.
inline double green_monomial_integral(const std::vector<Vec2>& poly, int px, int py) {
  // int_E x^px y^py = oint P dy with P = x^(px+1) y^py / (px+1).
  double total = 0.0;
  const std::size_t m = poly.size();
  for (std::size_t s = 0; s < m; ++s) {
    const Vec2 a = poly[s];
    const Vec2 b = poly[(s + 1) % m];
    const double dx = b.x() - a.x();
    const double dy = b.y() - a.y();
    if (dy == 0.0) continue;
    // x(t) = ax + t dx, y(t) = ay + t dy on t in [0,1]; expand the integrand
    // (x^(px+1) y^py)/(px+1) * dy into powers of t and integrate exactly.
    std::vector<double> xt(px + 2, 0.0), yt(py + 1, 0.0);
    for (int j = 0; j <= px + 1; ++j) {
      double binom = 1.0;
      for (int i = 0; i < j; ++i) binom = binom * (px + 1 - i) / (i + 1);
      xt[j] = binom * std::pow(a.x(), px + 1 - j) * std::pow(dx, j);
    }
    for (int j = 0; j <= py; ++j) {
      double binom = 1.0;
      for (int i = 0; i < j; ++i) binom = binom * (py - i) / (i + 1);
      yt[j] = binom * std::pow(a.y(), py - j) * std::pow(dy, j);
    }
    std::vector<double> prod(px + py + 2, 0.0);
    for (std::size_t i = 0; i < xt.size(); ++i)
      for (std::size_t j = 0; j < yt.size(); ++j) prod[i + j] += xt[i] * yt[j];
    double integral = 0.0;
    for (std::size_t d = 0; d < prod.size(); ++d) integral += prod[d] / (d + 1);
    total += integral * dy / (px + 1);
  }
  return total;
}

/// Exact integral of a Poly2 over a polygon.
inline double green_poly_integral(const std::vector<Vec2>& poly, const Poly2& f) {
  double acc = 0.0;
  for (const auto& [e, c] : f.terms)
    acc += c * green_monomial_integral(poly, e.first, e.second);
  return acc;
}

}  // namespace sfvem::testing
