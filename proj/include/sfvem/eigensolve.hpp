// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sfvem/assembly.hpp"

#include <vector>

namespace sfvem {

/// Eigenpairs of A x = lambda M x, sorted by ascending modulus with ties
/// broken by real part then imaginary part.
struct EigenResult {
  std::vector<Complex> eigenvalues;
  Eigen::MatrixXcd eigenvectors;   // columns match eigenvalues
  std::vector<double> residuals;   // ||A x - lambda M x|| / (||A|| ||x||)
};

struct EigenCluster {
  std::vector<int> members;  // indices into the input list
  Complex mean = 0.0;
  int multiplicity = 0;
};

enum class EigsStrategy { Auto, Dense, ShiftInvert };

/// Smallest-modulus eigenpairs of the assembled pair. The dense path runs a
/// generalized Schur (QZ) reduction; the shift-invert path runs Krylov-Schur
/// restarted Arnoldi on (A - sigma M)^{-1} M with a sparse LU factorization.
/// Auto picks dense for up to 3000 free DOFs. Spurious modes from a singular
/// M (|lambda| > 1e12) are discarded.
EigenResult solve_gevp(const SparsePair& pair, int nev,
                       EigsStrategy strategy = EigsStrategy::Auto,
                       Complex shift = Complex(1.0, 0.0));

/// Greedy clustering of modulus-sorted values: a value joins the current
/// cluster when it lies within rel_tol of the previous member.
std::vector<EigenCluster> cluster_eigenvalues(const std::vector<Complex>& values,
                                              double rel_tol);

/// Sparse direct solve with a residual check (relative residual <= 1e-10,
/// one step of iterative refinement if needed).
VectorC solve_linear(const SparseMatrixC& A, const VectorC& rhs);

}  // namespace sfvem
