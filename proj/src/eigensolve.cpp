// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "sfvem/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sfvem {

namespace {

constexpr double kInfiniteEigenvalue = 1e12;

bool modulus_less(const Complex& a, const Complex& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (std::abs(ma - mb) > 1e-12 * std::max({1.0, ma, mb})) return ma < mb;
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

double frob_norm(const SparseMatrixC& A) {
  double acc = 0.0;
  for (int col = 0; col < A.outerSize(); ++col)
    for (SparseMatrixC::InnerIterator it(A, col); it; ++it) acc += std::norm(it.value());
  return std::sqrt(acc);
}

bool effectively_real(const SparseMatrixC& A) {
  double max_abs = 0.0, max_imag = 0.0;
  for (int col = 0; col < A.outerSize(); ++col)
    for (SparseMatrixC::InnerIterator it(A, col); it; ++it) {
      max_abs = std::max(max_abs, std::abs(it.value()));
      max_imag = std::max(max_imag, std::abs(it.value().imag()));
    }
  return max_imag <= 1e-14 * std::max(1.0, max_abs);
}

struct RawPairs {
  std::vector<Complex> values;
  Eigen::MatrixXcd vectors;
};

void finalize(const SparsePair& pair, RawPairs raw, int nev, EigenResult& out) {
  std::vector<int> order(raw.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return modulus_less(raw.values[a], raw.values[b]); });

  const double norm_A = frob_norm(pair.A);
  const int keep = std::min<int>(nev, static_cast<int>(order.size()));
  out.eigenvalues.resize(keep);
  out.residuals.resize(keep);
  out.eigenvectors.resize(pair.A.rows(), keep);
  for (int i = 0; i < keep; ++i) {
    const int idx = order[i];
    out.eigenvalues[i] = raw.values[idx];
    VectorC x = raw.vectors.col(idx);
    x /= x.norm();
    out.eigenvectors.col(i) = x;
    out.residuals[i] = (pair.A * x - raw.values[idx] * (pair.M * x)).norm() / norm_A;
  }
}

RawPairs dense_real_qz(const SparsePair& pair) {
  const Eigen::MatrixXd A = Eigen::MatrixXcd(pair.A).real();
  const Eigen::MatrixXd M = Eigen::MatrixXcd(pair.M).real();
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges;
  ges.compute(A, M, true);
  if (ges.info() != Eigen::Success)
    throw std::runtime_error("dense generalized eigensolver failed to converge");
  RawPairs raw;
  const auto alphas = ges.alphas();
  const auto betas = ges.betas();
  std::vector<int> keep;
  for (int i = 0; i < alphas.size(); ++i) {
    if (betas[i] == 0.0) continue;
    const Complex lambda = alphas[i] / betas[i];
    if (std::abs(lambda) > kInfiniteEigenvalue || !std::isfinite(std::abs(lambda))) continue;
    keep.push_back(i);
  }
  raw.values.reserve(keep.size());
  raw.vectors.resize(A.rows(), keep.size());
  const auto vectors = ges.eigenvectors();
  for (std::size_t j = 0; j < keep.size(); ++j) {
    raw.values.push_back(alphas[keep[j]] / betas[keep[j]]);
    raw.vectors.col(j) = vectors.col(keep[j]);
  }
  return raw;
}

// Dense complex fallback: full eigendecomposition of (A - sigma M)^{-1} M.
RawPairs dense_complex_shift(const SparsePair& pair, Complex sigma) {
  const Eigen::MatrixXcd A = Eigen::MatrixXcd(pair.A);
  const Eigen::MatrixXcd M = Eigen::MatrixXcd(pair.M);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A - sigma * M);
  const Eigen::MatrixXcd op = lu.solve(M);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(op, true);
  if (ces.info() != Eigen::Success)
    throw std::runtime_error("dense complex eigensolver failed to converge");
  RawPairs raw;
  std::vector<int> keep;
  for (int i = 0; i < ces.eigenvalues().size(); ++i) {
    const Complex mu = ces.eigenvalues()[i];
    if (std::abs(mu) < 1.0 / kInfiniteEigenvalue) continue;
    keep.push_back(i);
  }
  raw.vectors.resize(A.rows(), keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j) {
    raw.values.push_back(sigma + 1.0 / ces.eigenvalues()[keep[j]]);
    raw.vectors.col(j) = ces.eigenvectors().col(keep[j]);
  }
  return raw;
}

// Reorder the complex Schur form T (and accumulate into Q) so the diagonal
// is sorted by descending modulus, using unitary swaps of adjacent entries.
void sort_schur_descending(Eigen::MatrixXcd& T, Eigen::MatrixXcd& Q) {
  const int n = static_cast<int>(T.rows());
  for (int pass = 0; pass < n; ++pass) {
    bool swapped = false;
    for (int i = 0; i + 1 < n; ++i) {
      if (std::abs(T(i, i)) + 1e-15 >= std::abs(T(i + 1, i + 1))) continue;
      // Rotate the eigenvector of the 2x2 block for T(i+1,i+1) onto e1.
      const Complex t11 = T(i, i), t12 = T(i, i + 1), t22 = T(i + 1, i + 1);
      Complex v0 = t12, v1 = t22 - t11;
      const double r = std::sqrt(std::norm(v0) + std::norm(v1));
      if (r == 0.0) continue;
      v0 /= r;
      v1 /= r;
      Eigen::Matrix2cd G;
      G << v0, -std::conj(v1), v1, std::conj(v0);
      T.block(i, 0, 2, n) = G.adjoint() * T.block(i, 0, 2, n);
      T.block(0, i, n, 2) = T.block(0, i, n, 2) * G;
      Q.block(0, i, Q.rows(), 2) = Q.block(0, i, Q.rows(), 2) * G;
      T(i + 1, i) = 0.0;
      swapped = true;
    }
    if (!swapped) break;
  }
}

// Unit-norm eigenvector of the upper-triangular T for its i-th diagonal entry.
Eigen::VectorXcd triangular_eigenvector(const Eigen::MatrixXcd& T, int i) {
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(T.rows());
  y[i] = 1.0;
  for (int j = i - 1; j >= 0; --j) {
    Complex acc = 0.0;
    for (int l = j + 1; l <= i; ++l) acc += T(j, l) * y[l];
    Complex denom = T(j, j) - T(i, i);
    const double floor = 1e-14 * std::max(1.0, std::abs(T(i, i)));
    if (std::abs(denom) < floor) denom = floor;
    y[j] = -acc / denom;
  }
  return y / y.norm();
}

// Krylov-Schur iteration for the dominant eigenpairs of a linear operator.
struct KrylovSchurResult {
  std::vector<Complex> thetas;
  Eigen::MatrixXcd vectors;
};

template <typename Op>
KrylovSchurResult krylov_schur_dominant(const Op& apply, int n, int nev, int subspace,
                                        double tol, int max_restarts) {
  const int m = std::min(subspace, n);
  if (nev > n) nev = n;

  std::mt19937_64 rng(0x5FEE1DULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vector = [&]() {
    VectorC v(n);
    for (int i = 0; i < n; ++i) v[i] = Complex(gauss(rng), gauss(rng));
    return v;
  };

  Eigen::MatrixXcd V(n, m + 1);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
  V.col(0) = random_vector().normalized();
  int p = 0;  // size of the locked/retained Schur block

  for (int restart = 0; restart < max_restarts; ++restart) {
    // Expand the Krylov-Schur decomposition from p to m columns.
    int width = m;
    for (int j = p; j < m; ++j) {
      VectorC w = apply(V.col(j));
      // Two passes of modified Gram-Schmidt.
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          const Complex hij = V.col(i).dot(w);
          w -= hij * V.col(i);
          if (pass == 0)
            H(i, j) = hij;
          else
            H(i, j) += hij;
        }
      const double beta = w.norm();
      if (beta <= 1e-13) {
        if (j + 1 >= std::min(n, nev)) {
          width = j + 1;
          H(j + 1, j) = 0.0;
          break;
        }
        w = random_vector();
        for (int pass = 0; pass < 2; ++pass)
          for (int i = 0; i <= j; ++i) w -= V.col(i).dot(w) * V.col(i);
        H(j + 1, j) = 0.0;
        V.col(j + 1) = w.normalized();
        continue;
      }
      H(j + 1, j) = beta;
      V.col(j + 1) = w / beta;
    }

    const Eigen::MatrixXcd Hs = H.topLeftCorner(width, width);
    const Complex beta_last = H(width, width - 1);

    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(Hs, true);
    if (schur.info() != Eigen::Success)
      throw std::runtime_error("Krylov-Schur: Schur decomposition failed");
    Eigen::MatrixXcd T = schur.matrixT();
    Eigen::MatrixXcd Q = schur.matrixU();
    sort_schur_descending(T, Q);

    const Eigen::RowVectorXcd b = beta_last * Q.row(width - 1);
    const int want = std::min(nev, width);
    bool converged = true;
    for (int i = 0; i < want && converged; ++i) {
      const Eigen::VectorXcd y = triangular_eigenvector(T, i);
      const double resid = std::abs(b.head(i + 1).dot(y.head(i + 1).conjugate()));
      if (resid > tol * std::max(std::abs(T(i, i)), 1e-30)) converged = false;
    }

    if (converged || restart == max_restarts - 1 || width < m) {
      if (!converged && !(width < m))
        throw std::runtime_error("Krylov-Schur: no convergence within the restart cap");
      KrylovSchurResult result;
      result.thetas.resize(want);
      result.vectors.resize(n, want);
      const Eigen::MatrixXcd W = V.leftCols(width) * Q;
      for (int i = 0; i < want; ++i) {
        result.thetas[i] = T(i, i);
        result.vectors.col(i) = (W * triangular_eigenvector(T, i)).normalized();
      }
      return result;
    }

    // Truncate: keep the leading block plus a buffer, restart from there.
    p = std::min(width - 1, nev + std::max(2, (m - nev) / 2));
    const Eigen::MatrixXcd W = V.leftCols(width) * Q.leftCols(p);
    V.leftCols(p) = W;
    V.col(p) = V.col(width);
    H.setZero();
    H.topLeftCorner(p, p) = T.topLeftCorner(p, p);
    H.row(p).head(p) = b.head(p);
  }
  throw std::runtime_error("Krylov-Schur: restart cap exhausted");
}

RawPairs shift_invert(const SparsePair& pair, int nev, Complex sigma) {
  const int n = static_cast<int>(pair.A.rows());
  SparseMatrixC shifted = pair.A - sigma * pair.M;
  shifted.makeCompressed();
  Eigen::SparseLU<SparseMatrixC> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) {
    // One retry with a perturbed shift before giving up.
    const Complex sigma2 =
        sigma + Complex(1e-3 * frob_norm(pair.A) / std::max(frob_norm(pair.M), 1e-300), 0.0);
    shifted = pair.A - sigma2 * pair.M;
    shifted.makeCompressed();
    lu.compute(shifted);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("shift-invert: factorization of (A - sigma M) is singular");
    sigma = sigma2;
  }

  const auto apply = [&](const VectorC& x) -> VectorC { return lu.solve(pair.M * x); };
  const int subspace = std::max(2 * nev + 10, 30);
  const KrylovSchurResult ks =
      krylov_schur_dominant(apply, n, nev, subspace, 1e-10, 300);

  RawPairs raw;
  for (std::size_t i = 0; i < ks.thetas.size(); ++i) {
    const Complex mu = ks.thetas[i];
    if (std::abs(mu) < 1.0 / kInfiniteEigenvalue) continue;
    raw.values.push_back(sigma + 1.0 / mu);
  }
  raw.vectors.resize(n, raw.values.size());
  int col = 0;
  for (std::size_t i = 0; i < ks.thetas.size(); ++i) {
    if (std::abs(ks.thetas[i]) < 1.0 / kInfiniteEigenvalue) continue;
    raw.vectors.col(col++) = ks.vectors.col(i);
  }
  return raw;
}

}  // namespace

EigenResult solve_gevp(const SparsePair& pair, int nev, EigsStrategy strategy, Complex shift) {
  if (pair.A.rows() != pair.M.rows() || pair.A.cols() != pair.M.cols())
    throw std::invalid_argument("solve_gevp: A and M sizes differ");
  if (nev < 1) throw std::invalid_argument("solve_gevp: nev must be >= 1");
  const int n = static_cast<int>(pair.A.rows());
  if (strategy == EigsStrategy::Auto)
    strategy = (n <= 3000) ? EigsStrategy::Dense : EigsStrategy::ShiftInvert;

  RawPairs raw;
  if (strategy == EigsStrategy::Dense) {
    raw = effectively_real(pair.A) && effectively_real(pair.M)
              ? dense_real_qz(pair)
              : dense_complex_shift(pair, shift);
  } else {
    raw = shift_invert(pair, nev, shift);
  }
  EigenResult result;
  finalize(pair, std::move(raw), nev, result);
  return result;
}

std::vector<EigenCluster> cluster_eigenvalues(const std::vector<Complex>& values,
                                              double rel_tol) {
  std::vector<EigenCluster> clusters;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool join =
        !clusters.empty() &&
        std::abs(values[i] - values[clusters.back().members.back()]) <=
            rel_tol * std::abs(values[i]);
    if (!join) clusters.push_back(EigenCluster{});
    clusters.back().members.push_back(static_cast<int>(i));
  }
  for (EigenCluster& c : clusters) {
    Complex acc = 0.0;
    for (int idx : c.members) acc += values[idx];
    c.multiplicity = static_cast<int>(c.members.size());
    c.mean = acc / static_cast<double>(c.multiplicity);
  }
  return clusters;
}

VectorC solve_linear(const SparseMatrixC& A, const VectorC& rhs) {
  if (A.rows() != A.cols() || A.rows() != rhs.size())
    throw std::invalid_argument("solve_linear: dimension mismatch");
  SparseMatrixC compressed = A;
  compressed.makeCompressed();
  Eigen::SparseLU<SparseMatrixC> lu;
  lu.compute(compressed);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_linear: matrix is singular");
  VectorC x = lu.solve(rhs);
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return VectorC::Zero(rhs.size());
  for (int refine = 0; refine < 2; ++refine) {
    const VectorC residual = rhs - A * x;
    if (residual.norm() <= 1e-10 * rhs_norm) return x;
    x += lu.solve(residual);
  }
  if ((rhs - A * x).norm() > 1e-10 * rhs_norm)
    throw std::runtime_error("solve_linear: residual above 1e-10 after refinement");
  return x;
}

}  // namespace sfvem
