// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sfvem/assembly.hpp"
#include "sfvem/eigensolve.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sfvem {

enum class CaseId { Case1, Case2, Case3, Laplace, Manufactured };

CaseId case_from_name(const std::string& name);
std::string case_name(CaseId id);

struct CaseCoefficients {
  Eigen::Matrix2d K = Eigen::Matrix2d::Identity();
  Vec2 beta = Vec2::Zero();
  double gamma = 0.0;
};

/// Constant coefficient sets: case1 K=I, beta=(1,0); case2 K=I, beta=(10,0);
/// case3 K=diag(8e-3, 1), beta=0; laplace/manufactured K=I, beta=0. gamma=0
/// throughout.
CaseCoefficients case_coefficients(CaseId id);

struct ExactEigenvalue {
  double value = 0.0;
  int multiplicity = 1;
};

/// Closed-form reference eigenvalues, enough to cover `count` discrete
/// values including multiplicity. Throws for the manufactured case.
std::vector<ExactEigenvalue> exact_reference(CaseId id, int count);

struct StudyConfig {
  CaseId case_id = CaseId::Case1;
  MeshFamily family = MeshFamily::quad();
  std::vector<int> levels;  // strictly increasing refinement parameters n
  int k = 2;
  std::optional<int> ell;   // override of the per-family enrichment
  std::vector<Scheme> schemes = {Scheme::SFVEM};
  int nev = 5;
  std::string out_dir = ".";
  bool eigenfunction_errors = false;
  EigsStrategy strategy = EigsStrategy::Auto;
};

/// One row per exact eigenvalue cluster and refinement level; for source
/// studies eig_index 0 carries the L2 error and 1 the energy error.
struct ReportRow {
  int level = 0;     // refinement parameter n
  double h = 0.0;
  int ndof = 0;      // free DOFs
  int eig_index = 0; // 1-based position of the first cluster member
  Complex lambda = 0.0;
  double abs_error = 0.0;
  std::optional<double> rate;
  int exact_multiplicity = 1;
  int detected_multiplicity = 1;  // greedy clustering at the level tolerance
  std::optional<double> eigenfunction_error;
};

struct ConvergenceReport {
  CaseId case_id = CaseId::Case1;
  MeshFamilyTag family = MeshFamilyTag::Quad;
  int k = 2;
  Scheme scheme = Scheme::SFVEM;
  bool source_study = false;
  std::vector<ReportRow> rows;
};

/// Eigenvalue convergence study: per level generate/validate the mesh,
/// assemble, solve, match the discrete spectrum against the exact
/// multiplicity pattern, and record cluster-mean errors and observed rates.
std::vector<ConvergenceReport> run_convergence(const StudyConfig& config);

/// Source-problem study with the manufactured solution sin(pi x) sin(pi y)
/// and the case coefficients; reports L2 and energy errors and rates.
ConvergenceReport run_source_study(const StudyConfig& config);

struct ErrorNorms {
  double l2 = 0.0;
  double energy = 0.0;
};

/// || u - Pi0 u_h ||_0 and || sqrtK (grad u - PiP grad u_h) ||_0 by cellwise
/// quadrature; dofs is the full DOF vector (boundary entries included).
ErrorNorms compute_error_norms(const PolygonMesh& mesh, const ProblemSpec& spec,
                               const VectorC& dofs, const ScalarField& exact,
                               const VectorField& exact_grad);

struct OutputPaths {
  std::string csv;
  std::string svg;
};

/// CSV (header: level,h,ndof,eig_index,lambda_re,lambda_im,abs_error,rate)
/// plus a log-log SVG error plot with a reference slope 2k.
OutputPaths emit_outputs(const ConvergenceReport& report, const std::string& out_dir);

/// Observed rate log(e0/e1) / log(h0/h1).
double observed_rate(double e0, double e1, double h0, double h1);

/// Clustering tolerance at a level: 1e-6 relative at the finest level,
/// relaxed by (h / h_finest)^(2k-2) at coarser ones.
double clustering_tolerance(double h, double h_finest, int k);

}  // namespace sfvem
