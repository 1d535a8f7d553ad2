// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "sfvem/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <stdexcept>

namespace sfvem {

namespace {
constexpr double kPi = std::numbers::pi;
}

CaseId case_from_name(const std::string& name) {
  if (name == "case1") return CaseId::Case1;
  if (name == "case2") return CaseId::Case2;
  if (name == "case3") return CaseId::Case3;
  if (name == "laplace") return CaseId::Laplace;
  if (name == "manufactured") return CaseId::Manufactured;
  throw std::invalid_argument("unknown case '" + name + "'");
}

std::string case_name(CaseId id) {
  switch (id) {
    case CaseId::Case1: return "case1";
    case CaseId::Case2: return "case2";
    case CaseId::Case3: return "case3";
    case CaseId::Laplace: return "laplace";
    case CaseId::Manufactured: return "manufactured";
  }
  return "unknown";
}

CaseCoefficients case_coefficients(CaseId id) {
  CaseCoefficients c;
  switch (id) {
    case CaseId::Case1:
      c.beta = Vec2(1.0, 0.0);
      break;
    case CaseId::Case2:
      c.beta = Vec2(10.0, 0.0);
      break;
    case CaseId::Case3:
      c.K << 8e-3, 0.0, 0.0, 1.0;
      break;
    case CaseId::Laplace:
    case CaseId::Manufactured:
      break;
  }
  return c;
}

std::vector<ExactEigenvalue> exact_reference(CaseId id, int count) {
  if (count < 1) throw std::invalid_argument("exact_reference: count must be >= 1");
  double shift = 0.0;
  double kx = 1.0;
  switch (id) {
    case CaseId::Case1: shift = 0.25; break;   // beta=(1,0): shift |beta|^2/4
    case CaseId::Case2: shift = 25.0; break;   // beta=(10,0)
    case CaseId::Case3: kx = 8e-3; break;      // K = diag(8e-3, 1)
    case CaseId::Laplace: break;
    case CaseId::Manufactured:
      throw std::invalid_argument("exact_reference: the manufactured case has no spectrum");
  }
  // lambda_{mn} = shift + (kx m^2 + n^2) pi^2 on the unit square.
  const int kRange = 64;
  std::vector<double> raw;
  raw.reserve(kRange * kRange);
  for (int m = 1; m <= kRange; ++m)
    for (int n = 1; n <= kRange; ++n)
      raw.push_back(shift + (kx * m * m + n * n) * kPi * kPi);
  std::sort(raw.begin(), raw.end());

  std::vector<ExactEigenvalue> out;
  int covered = 0;
  for (double v : raw) {
    if (!out.empty() && std::abs(v - out.back().value) <= 1e-9 * std::abs(v)) {
      ++out.back().multiplicity;
    } else {
      if (covered >= count) break;
      out.push_back(ExactEigenvalue{v, 1});
    }
    ++covered;
  }
  return out;
}

double observed_rate(double e0, double e1, double h0, double h1) {
  return std::log(e0 / e1) / std::log(h0 / h1);
}

double clustering_tolerance(double h, double h_finest, int k) {
  return 1e-6 * std::pow(h / h_finest, 2.0 * k - 2.0);
}

namespace {

ProblemSpec make_spec(const StudyConfig& config, Scheme scheme) {
  const CaseCoefficients c = case_coefficients(
      config.case_id == CaseId::Manufactured ? CaseId::Laplace : config.case_id);
  ProblemSpec spec = ProblemSpec::constant_coefficients(c.K, c.beta, c.gamma, config.k, scheme);
  if (config.ell) {
    const int ell = *config.ell;
    spec.ell_rule = [ell](int) { return ell; };
  }
  return spec;
}

struct LevelData {
  int n = 0;
  double h = 0.0;
  int ndof = 0;
  std::vector<Complex> values;  // modulus-sorted discrete eigenvalues
  EigenResult result;
  PolygonMesh mesh;
};

// Exact eigenfunctions for the studied cases (unit L2 norm not enforced).
ScalarField exact_eigenfunction(CaseId id, int m, int n) {
  switch (id) {
    case CaseId::Case1:
      return [m, n](const Vec2& p) {
        return std::exp(0.5 * p.x()) * std::sin(m * kPi * p.x()) * std::sin(n * kPi * p.y());
      };
    case CaseId::Case2:
      return [m, n](const Vec2& p) {
        return std::exp(5.0 * p.x()) * std::sin(m * kPi * p.x()) * std::sin(n * kPi * p.y());
      };
    default:
      return [m, n](const Vec2& p) {
        return std::sin(m * kPi * p.x()) * std::sin(n * kPi * p.y());
      };
  }
}

// (m, n) index pair of the j-th smallest exact eigenvalue (1-based j).
std::pair<int, int> exact_mode_indices(CaseId id, int j) {
  const double kx = (id == CaseId::Case3) ? 8e-3 : 1.0;
  std::vector<std::tuple<double, int, int>> modes;
  for (int m = 1; m <= 16; ++m)
    for (int n = 1; n <= 16; ++n) modes.emplace_back(kx * m * m + n * n, m, n);
  std::sort(modes.begin(), modes.end());
  return {std::get<1>(modes[j - 1]), std::get<2>(modes[j - 1])};
}

double eigenfunction_l2_error(const PolygonMesh& mesh, const ProblemSpec& spec,
                              const GlobalDofMap& map, const VectorC& free_vec,
                              const ScalarField& exact) {
  // Normalize both the exact function and Pi0 of the discrete one to unit
  // L2 norm; fix the phase by maximizing Re (Pi0 u_h, u).
  const VectorC full = map.expand(free_vec);
  double exact_norm2 = 0.0, disc_norm2 = 0.0;
  Complex inner = 0.0;
  struct CellEval {
    CellRule rule;
    Eigen::MatrixXcd values;  // Pi0 u_h at the rule points
  };
  std::vector<CellEval> evals(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const DofLayout layout = DofLayout::from_mesh(mesh, c, spec.k);
    const int ell = spec.ell_for(layout.num_vertices());
    const ElementProjections proj = build_projections(layout, ell);
    const std::vector<int> global = map.cell_to_global(mesh, c);
    VectorC local(global.size());
    for (std::size_t i = 0; i < global.size(); ++i) local[i] = full[global[i]];
    const MonomialBasis basis(layout.element.centroid, layout.element.diameter, spec.k);
    CellEval ev;
    ev.rule = build_cell_rule(layout.element, default_cell_exactness(spec.k, ell));
    const VectorC coeff = proj.pi_zero.cast<Complex>() * local;
    ev.values = basis.values(ev.rule.points).cast<Complex>() * coeff;
    for (std::size_t q = 0; q < ev.rule.points.size(); ++q) {
      const double w = ev.rule.weights[q];
      const double ue = exact(ev.rule.points[q]);
      exact_norm2 += w * ue * ue;
      disc_norm2 += w * std::norm(ev.values(q));
      inner += w * ev.values(q) * ue;
    }
    evals[c] = std::move(ev);
  }
  const Complex phase = (std::abs(inner) > 0.0) ? std::conj(inner) / std::abs(inner)
                                                : Complex(1.0, 0.0);
  const double scale = std::sqrt(exact_norm2 / disc_norm2);
  double err2 = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellEval& ev = evals[c];
    for (std::size_t q = 0; q < ev.rule.points.size(); ++q) {
      const Complex diff = phase * scale * ev.values(q) - exact(ev.rule.points[q]);
      err2 += ev.rule.weights[q] * std::norm(diff);
    }
  }
  return std::sqrt(err2) / std::sqrt(exact_norm2);
}

}  // namespace

std::vector<ConvergenceReport> run_convergence(const StudyConfig& config) {
  if (config.levels.empty()) throw std::invalid_argument("run_convergence: no levels");
  for (std::size_t i = 1; i < config.levels.size(); ++i)
    if (config.levels[i] <= config.levels[i - 1])
      throw std::invalid_argument("run_convergence: levels must be strictly increasing");
  if (config.k < 2 || config.k > 4)
    throw std::invalid_argument("run_convergence: k must be in {2,3,4}");
  if (config.case_id == CaseId::Manufactured)
    throw std::invalid_argument("run_convergence: use run_source_study for the manufactured case");

  // Extend the request so the last matched cluster is complete.
  const std::vector<ExactEigenvalue> exact = exact_reference(config.case_id, config.nev);
  int needed = 0;
  for (const ExactEigenvalue& e : exact) needed += e.multiplicity;

  std::vector<ConvergenceReport> reports;
  for (Scheme scheme : config.schemes) {
    const ProblemSpec spec = make_spec(config, scheme);
    ConvergenceReport report;
    report.case_id = config.case_id;
    report.family = config.family.tag;
    report.k = config.k;
    report.scheme = scheme;

    std::vector<LevelData> data;
    for (int n : config.levels) {
      LevelData level;
      level.n = n;
      level.mesh = generate_mesh(config.family, n);
      const ValidationReport validation = validate_mesh(level.mesh, 0.05);
      if (!validation.passed)
        throw std::runtime_error("run_convergence: level " + std::to_string(n) +
                                 ": mesh fails shape validation");
      level.h = mesh_size(level.mesh);
      const AssemblyResult assembled = assemble(level.mesh, spec);
      level.ndof = assembled.dofs.free_count();
      level.result = solve_gevp(assembled.pair, needed, config.strategy);
      level.values = level.result.eigenvalues;
      data.push_back(std::move(level));
    }

    const double h_finest = data.back().h;
    std::map<int, std::pair<double, double>> previous;  // eig_index -> (h, error)
    for (const LevelData& level : data) {
      const double tol = clustering_tolerance(level.h, h_finest, config.k);
      const std::vector<EigenCluster> detected = cluster_eigenvalues(level.values, tol);
      auto detected_multiplicity_at = [&](int position) {
        for (const EigenCluster& cluster : detected)
          for (int member : cluster.members)
            if (member == position) return cluster.multiplicity;
        return 1;
      };

      int position = 0;
      for (const ExactEigenvalue& e : exact) {
        if (position >= static_cast<int>(level.values.size())) break;
        const int take =
            std::min<int>(e.multiplicity, static_cast<int>(level.values.size()) - position);
        Complex mean = 0.0;
        for (int i = 0; i < take; ++i) mean += level.values[position + i];
        mean /= static_cast<double>(take);

        ReportRow row;
        row.level = level.n;
        row.h = level.h;
        row.ndof = level.ndof;
        row.eig_index = position + 1;
        row.lambda = mean;
        row.abs_error = std::abs(mean - Complex(e.value, 0.0));
        row.exact_multiplicity = e.multiplicity;
        row.detected_multiplicity = detected_multiplicity_at(position);
        if (auto it = previous.find(row.eig_index); it != previous.end())
          row.rate = observed_rate(it->second.second, row.abs_error, it->second.first, row.h);
        previous[row.eig_index] = {row.h, row.abs_error};

        if (config.eigenfunction_errors && e.multiplicity == 1) {
          const auto [m, nn] = exact_mode_indices(config.case_id, row.eig_index);
          const GlobalDofMap map = GlobalDofMap::build(level.mesh, spec.k);
          row.eigenfunction_error = eigenfunction_l2_error(
              level.mesh, spec, map, level.result.eigenvectors.col(position),
              exact_eigenfunction(config.case_id, m, nn));
        }
        report.rows.push_back(row);
        position += take;
      }
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

ConvergenceReport run_source_study(const StudyConfig& config) {
  if (config.levels.empty()) throw std::invalid_argument("run_source_study: no levels");
  const CaseCoefficients c = case_coefficients(
      config.case_id == CaseId::Manufactured ? CaseId::Laplace : config.case_id);
  const ProblemSpec spec =
      ProblemSpec::constant_coefficients(c.K, c.beta, c.gamma, config.k, Scheme::SFVEM);

  const ScalarField exact = [](const Vec2& p) {
    return std::sin(kPi * p.x()) * std::sin(kPi * p.y());
  };
  const VectorField exact_grad = [](const Vec2& p) {
    return Vec2(kPi * std::cos(kPi * p.x()) * std::sin(kPi * p.y()),
                kPi * std::sin(kPi * p.x()) * std::cos(kPi * p.y()));
  };
  // f = -div(K grad u) + beta . grad u + gamma u for the constant-coefficient
  // cases; the mixed derivative enters through the off-diagonal of K.
  const Eigen::Matrix2d K = c.K;
  const Vec2 beta = c.beta;
  const double gamma = c.gamma;
  const ScalarField f = [K, beta, gamma, exact, exact_grad](const Vec2& p) {
    const double sx = std::sin(kPi * p.x()), sy = std::sin(kPi * p.y());
    const double cx = std::cos(kPi * p.x()), cy = std::cos(kPi * p.y());
    const double uxx = -kPi * kPi * sx * sy;
    const double uyy = -kPi * kPi * sx * sy;
    const double uxy = kPi * kPi * cx * cy;
    return -(K(0, 0) * uxx + 2.0 * K(0, 1) * uxy + K(1, 1) * uyy) +
           beta.dot(exact_grad(p)) + gamma * exact(p);
  };

  ConvergenceReport report;
  report.case_id = config.case_id;
  report.family = config.family.tag;
  report.k = config.k;
  report.scheme = Scheme::SFVEM;
  report.source_study = true;

  std::optional<std::pair<double, ErrorNorms>> previous;
  for (int n : config.levels) {
    const PolygonMesh mesh = generate_mesh(config.family, n);
    const AssemblyResult assembled = assemble(mesh, spec);
    const VectorC rhs = assemble_source_rhs(mesh, spec, f);
    const VectorC solution = solve_linear(assembled.pair.A, rhs);
    const VectorC full = assembled.dofs.expand(solution);
    const ErrorNorms norms = compute_error_norms(mesh, spec, full, exact, exact_grad);
    const double h = mesh_size(mesh);

    ReportRow l2_row, energy_row;
    l2_row.level = energy_row.level = n;
    l2_row.h = energy_row.h = h;
    l2_row.ndof = energy_row.ndof = assembled.dofs.free_count();
    l2_row.eig_index = 0;
    energy_row.eig_index = 1;
    l2_row.abs_error = norms.l2;
    energy_row.abs_error = norms.energy;
    if (previous) {
      l2_row.rate = observed_rate(previous->second.l2, norms.l2, previous->first, h);
      energy_row.rate = observed_rate(previous->second.energy, norms.energy, previous->first, h);
    }
    previous = {h, norms};
    report.rows.push_back(l2_row);
    report.rows.push_back(energy_row);
  }
  return report;
}

ErrorNorms compute_error_norms(const PolygonMesh& mesh, const ProblemSpec& spec,
                               const VectorC& dofs, const ScalarField& exact,
                               const VectorField& exact_grad) {
  const GlobalDofMap map = GlobalDofMap::build(mesh, spec.k);
  if (dofs.size() != map.total())
    throw std::invalid_argument("compute_error_norms: expected the full DOF vector");
  double l2 = 0.0, energy = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const DofLayout layout = DofLayout::from_mesh(mesh, c, spec.k);
    const int ell = spec.ell_for(layout.num_vertices());
    const ElementProjections proj = build_projections(layout, ell);
    const std::vector<int> global = map.cell_to_global(mesh, c);
    VectorC local(global.size());
    for (std::size_t i = 0; i < global.size(); ++i) local[i] = dofs[global[i]];

    const CellRule rule = build_cell_rule(layout.element, default_cell_exactness(spec.k, ell));
    const MonomialBasis basis(layout.element.centroid, layout.element.diameter, spec.k);
    const PklBasis pkl =
        build_pkl_basis(layout.element.centroid, layout.element.diameter, spec.k, ell);

    const VectorC value_coeff = proj.pi_zero.cast<Complex>() * local;
    const VectorC grad_coeff = proj.pi_p_grad.cast<Complex>() * local;
    const Eigen::MatrixXcd values = basis.values(rule.points).cast<Complex>() * value_coeff;
    auto [gvx, gvy] = pkl.values(rule.points);
    const Eigen::MatrixXcd grad_x = gvx.cast<Complex>() * grad_coeff;
    const Eigen::MatrixXcd grad_y = gvy.cast<Complex>() * grad_coeff;

    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q];
      const Vec2& p = rule.points[q];
      l2 += w * std::norm(exact(p) - values(q));
      const Complex dx = exact_grad(p).x() - grad_x(q);
      const Complex dy = exact_grad(p).y() - grad_y(q);
      const Eigen::Matrix2d K = spec.K(p);
      energy += w * (K(0, 0) * std::norm(dx) + K(1, 1) * std::norm(dy) +
                     2.0 * K(0, 1) * (dx * std::conj(dy)).real());
    }
  }
  return ErrorNorms{std::sqrt(l2), std::sqrt(energy)};
}

namespace {

std::string scheme_name(Scheme scheme) {
  return scheme == Scheme::SFVEM ? "sfvem" : "svem";
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

void write_svg(const std::string& path, const ConvergenceReport& report) {
  // Collect per-index series of (log10 h, log10 error).
  std::map<int, std::vector<std::pair<double, double>>> series;
  double min_x = 1e30, max_x = -1e30, min_y = 1e30, max_y = -1e30;
  for (const ReportRow& row : report.rows) {
    if (!(row.abs_error > 0.0)) continue;
    const double x = std::log10(row.h);
    const double y = std::log10(row.abs_error);
    series[row.eig_index].push_back({x, y});
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  if (series.empty()) {
    min_x = -1;
    max_x = 0;
    min_y = -1;
    max_y = 0;
  }
  const double pad_x = 0.05 * std::max(1e-9, max_x - min_x);
  const double pad_y = 0.05 * std::max(1e-9, max_y - min_y);
  min_x -= pad_x;
  max_x += pad_x;
  min_y -= pad_y;
  max_y += pad_y;

  const double width = 640, height = 480, margin = 60;
  auto sx = [&](double x) {
    return margin + (x - min_x) / (max_x - min_x) * (width - 2 * margin);
  };
  auto sy = [&](double y) {
    return height - margin - (y - min_y) / (max_y - min_y) * (height - 2 * margin);
  };

  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
     << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
     << height - margin << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 15
     << "\" text-anchor=\"middle\" font-size=\"13\">log10 h</text>\n";
  os << "<text x=\"18\" y=\"" << height / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " << height / 2
     << ")\">log10 error</text>\n";

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  int color_index = 0;
  for (const auto& [index, points] : series) {
    const char* color = colors[color_index % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : points) os << sx(x) << ',' << sy(y) << ' ';
    os << "\"/>\n";
    for (const auto& [x, y] : points)
      os << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\"" << color
         << "\"/>\n";
    const std::string label = report.source_study
                                  ? (index == 0 ? std::string("L2") : std::string("energy"))
                                  : "eig " + std::to_string(index);
    os << "<text x=\"" << width - margin + 5 << "\" y=\"" << margin + 16 * color_index
       << "\" font-size=\"12\" fill=\"" << color << "\">" << label << "</text>\n";
    ++color_index;
  }

  // Reference slope 2k through the lower-left data corner.
  const double slope = 2.0 * report.k;
  const double x0 = min_x + pad_x, x1 = max_x - pad_x;
  const double y0 = min_y + pad_y;
  os << "<line x1=\"" << sx(x0) << "\" y1=\"" << sy(y0) << "\" x2=\"" << sx(x1) << "\" y2=\""
     << sy(y0 + slope * (x1 - x0)) << "\" stroke=\"gray\" stroke-dasharray=\"6 3\"/>\n";
  os << "<text x=\"" << sx(x1) - 40 << "\" y=\"" << sy(y0 + slope * (x1 - x0)) - 6
     << "\" font-size=\"11\" fill=\"gray\">slope " << format_double(slope) << "</text>\n";
  os << "</svg>\n";
}

}  // namespace

OutputPaths emit_outputs(const ConvergenceReport& report, const std::string& out_dir) {
  if (report.rows.empty()) throw std::invalid_argument("emit_outputs: empty report");
  std::filesystem::create_directories(out_dir);
  const std::string stem = case_name(report.case_id) + "_" + mesh_family_name(report.family) +
                           "_k" + std::to_string(report.k) + "_" + scheme_name(report.scheme) +
                           (report.source_study ? "_source" : "");
  OutputPaths paths;
  paths.csv = out_dir + "/" + stem + ".csv";
  paths.svg = out_dir + "/" + stem + ".svg";

  std::ofstream csv(paths.csv);
  if (!csv) throw std::runtime_error("cannot open '" + paths.csv + "' for writing");
  csv << "level,h,ndof,eig_index,lambda_re,lambda_im,abs_error,rate\n";
  for (const ReportRow& row : report.rows) {
    csv << row.level << ',' << format_double(row.h) << ',' << row.ndof << ',' << row.eig_index
        << ',' << format_double(row.lambda.real()) << ',' << format_double(row.lambda.imag())
        << ',' << format_double(row.abs_error) << ',';
    if (row.rate) csv << format_double(*row.rate);
    csv << '\n';
  }
  csv.close();
  write_svg(paths.svg, report);
  return paths;
}

}  // namespace sfvem
