// Copyright (c) the sfvem developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "sfvem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sfvem {

MeshFamily mesh_family_from_name(const std::string& name) {
  if (name == "quad" || name == "t1") return MeshFamily::quad();
  if (name == "pentagon" || name == "t2") return MeshFamily::pentagon();
  if (name == "octagon" || name == "concave-octagon" || name == "t3")
    return MeshFamily::concave_octagon();
  throw std::invalid_argument("unknown mesh family '" + name +
                              "' (expected quad, pentagon, or octagon)");
}

std::string mesh_family_name(MeshFamilyTag tag) {
  switch (tag) {
    case MeshFamilyTag::Quad: return "quad";
    case MeshFamilyTag::Pentagon: return "pentagon";
    case MeshFamilyTag::ConcaveOctagon: return "octagon";
  }
  return "unknown";
}

std::vector<Vec2> PolygonMesh::cell_vertices(int c) const {
  std::vector<Vec2> out;
  out.reserve(cells_[c].size());
  for (int v : cells_[c]) out.push_back(vertices_[v]);
  return out;
}

PolygonMesh PolygonMesh::from_cells(std::vector<Vec2> vertices,
                                    std::vector<std::vector<int>> cells) {
  PolygonMesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.cells_ = std::move(cells);

  const int nv = mesh.num_vertices();
  std::map<std::pair<int, int>, int> edge_ids;
  mesh.cell_edges_.resize(mesh.cells_.size());
  mesh.cell_edge_reversed_.resize(mesh.cells_.size());

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const std::vector<int>& cell = mesh.cells_[c];
    if (cell.size() < 3) throw std::runtime_error("cell " + std::to_string(c) + " has fewer than 3 vertices");
    for (std::size_t j = 0; j < cell.size(); ++j) {
      const int a = cell[j];
      const int b = cell[(j + 1) % cell.size()];
      if (a < 0 || a >= nv || b < 0 || b >= nv)
        throw std::runtime_error("cell " + std::to_string(c) + " references a vertex out of range");
      if (a == b)
        throw std::runtime_error("cell " + std::to_string(c) + " repeats vertex " + std::to_string(a));
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto [it, inserted] = edge_ids.try_emplace(key, static_cast<int>(mesh.edges_.size()));
      if (inserted) {
        EdgeRecord rec;
        rec.v0 = key.first;
        rec.v1 = key.second;
        mesh.edges_.push_back(rec);
      }
      EdgeRecord& rec = mesh.edges_[it->second];
      const bool forward = (a == rec.v0);  // cell interior left of v0->v1
      int& slot = forward ? rec.left_cell : rec.right_cell;
      if (slot != -1)
        throw std::runtime_error("edge (" + std::to_string(rec.v0) + "," + std::to_string(rec.v1) +
                                 ") traversed twice in the same direction; mesh is not conforming");
      slot = c;
      mesh.cell_edges_[c].push_back(it->second);
      mesh.cell_edge_reversed_[c].push_back(!forward);
    }
  }

  mesh.boundary_vertex_.assign(nv, false);
  for (EdgeRecord& rec : mesh.edges_) {
    rec.boundary = (rec.left_cell == -1) != (rec.right_cell == -1);
    if (rec.left_cell == -1 && rec.right_cell == -1)
      throw std::runtime_error("edge with no incident cell");
    if (rec.boundary) {
      mesh.boundary_vertex_[rec.v0] = true;
      mesh.boundary_vertex_[rec.v1] = true;
    }
  }

  mesh.geometry_.resize(mesh.cells_.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const std::vector<Vec2> poly = mesh.cell_vertices(c);
    CellGeometry& g = mesh.geometry_[c];
    g.area = polygon_signed_area(poly);
    g.diameter = polygon_diameter(poly);
    if (g.area <= 0.0 || !polygon_is_simple(poly)) {
      g.degenerate = true;
      g.centroid = g.star_point = poly[0];
      continue;
    }
    g.centroid = polygon_centroid(poly);
    if (auto star = polygon_star_point(poly)) {
      g.star_point = star->point;
    } else {
      g.degenerate = true;
      g.star_point = g.centroid;
    }
  }
  return mesh;
}

namespace {

void check_generated(const PolygonMesh& mesh, const char* family) {
  for (int c = 0; c < mesh.num_cells(); ++c)
    if (mesh.cell_geometry(c).degenerate)
      throw std::runtime_error(std::string("mesh generation (") + family + "): cell " +
                               std::to_string(c) + " is non-simple or not star-shaped");
}

PolygonMesh generate_quad(int n) {
  std::vector<Vec2> verts((n + 1) * (n + 1));
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts[vid(i, j)] = Vec2(static_cast<double>(i) / n, static_cast<double>(j) / n);
  std::vector<std::vector<int>> cells;
  cells.reserve(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  return PolygonMesh::from_cells(std::move(verts), std::move(cells));
}

// Each grid square holds a convex/concave pentagon pair sharing the interior
// point P = center + (delta * width, 0) and the top/bottom edge midpoints.
PolygonMesh generate_pentagon(int n, double delta) {
  const int ncorner = (n + 1) * (n + 1);
  const int nhmid = n * (n + 1);
  auto cid = [n](int i, int j) { return j * (n + 1) + i; };
  auto hmid = [&](int i, int j) { return ncorner + j * n + i; };  // midpoint of y=j/n, x in [i,i+1]/n
  auto pid = [&](int i, int j) { return ncorner + nhmid + j * n + i; };

  std::vector<Vec2> verts(ncorner + nhmid + n * n);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts[cid(i, j)] = Vec2(static_cast<double>(i) / n, static_cast<double>(j) / n);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i < n; ++i)
      verts[hmid(i, j)] = Vec2((i + 0.5) / n, static_cast<double>(j) / n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      verts[pid(i, j)] = Vec2((i + 0.5 + delta) / n, (j + 0.5) / n);

  std::vector<std::vector<int>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int A = cid(i, j), B = cid(i + 1, j), C = cid(i + 1, j + 1), D = cid(i, j + 1);
      const int Mb = hmid(i, j), Mt = hmid(i, j + 1), P = pid(i, j);
      cells.push_back({A, Mb, P, Mt, D});
      cells.push_back({Mb, B, C, Mt, P});
    }
  return PolygonMesh::from_cells(std::move(verts), std::move(cells));
}

// Grid squares with all four edge midpoints inserted; interior midpoints are
// displaced perpendicular to their edge by delta * width. The parity rule
// pushes horizontal midpoints into the (i+j)-odd cell and vertical midpoints
// into the (i+j)-even cell, so every cell of an n >= 2 mesh gets at least one
// reflex vertex while both incident cells stay star-shaped.
PolygonMesh generate_octagon(int n, double delta) {
  const int ncorner = (n + 1) * (n + 1);
  const int nhmid = n * (n + 1);
  auto cid = [n](int i, int j) { return j * (n + 1) + i; };
  auto hmid = [&](int i, int j) { return ncorner + j * n + i; };            // y = j/n
  auto vmid = [&](int i, int j) { return ncorner + nhmid + i * n + j; };    // x = i/n

  std::vector<Vec2> verts(ncorner + nhmid + (n + 1) * n);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts[cid(i, j)] = Vec2(static_cast<double>(i) / n, static_cast<double>(j) / n);
  const double d = delta / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i < n; ++i) {
      double dy = 0.0;
      if (j > 0 && j < n) dy = ((i + j) % 2 == 0) ? -d : d;  // down into (i,j-1) when i+j even
      verts[hmid(i, j)] = Vec2((i + 0.5) / n, static_cast<double>(j) / n + dy);
    }
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j < n; ++j) {
      double dx = 0.0;
      if (i > 0 && i < n) dx = ((i + j) % 2 == 1) ? -d : d;  // left into (i-1,j) when i+j odd
      verts[vmid(i, j)] = Vec2(static_cast<double>(i) / n + dx, (j + 0.5) / n);
    }

  std::vector<std::vector<int>> cells;
  cells.reserve(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      cells.push_back({cid(i, j), hmid(i, j), cid(i + 1, j), vmid(i + 1, j),
                       cid(i + 1, j + 1), hmid(i, j + 1), cid(i, j + 1), vmid(i, j)});
  return PolygonMesh::from_cells(std::move(verts), std::move(cells));
}

}  // namespace

PolygonMesh generate_mesh(MeshFamily family, int n) {
  if (n < 1) throw std::invalid_argument("mesh refinement n must be >= 1");
  if (family.delta < 0.0 || family.delta > 0.25)
    throw std::invalid_argument("mesh displacement delta must lie in [0, 0.25]");
  PolygonMesh mesh;
  switch (family.tag) {
    case MeshFamilyTag::Quad:
      mesh = generate_quad(n);
      check_generated(mesh, "quad");
      break;
    case MeshFamilyTag::Pentagon:
      mesh = generate_pentagon(n, family.delta);
      check_generated(mesh, "pentagon");
      break;
    case MeshFamilyTag::ConcaveOctagon:
      mesh = generate_octagon(n, family.delta);
      check_generated(mesh, "octagon");
      break;
  }
  return mesh;
}

ValidationReport validate_mesh(const PolygonMesh& mesh, double c_T) {
  ValidationReport report;
  report.passed = true;
  report.min_star_ratio = std::numeric_limits<double>::max();
  report.min_edge_ratio = std::numeric_limits<double>::max();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const std::vector<Vec2> poly = mesh.cell_vertices(c);
    const CellGeometry& g = mesh.cell_geometry(c);
    report.max_vertex_count = std::max(report.max_vertex_count, static_cast<int>(poly.size()));
    if (g.degenerate || !polygon_is_simple(poly)) {
      report.passed = false;
      report.offending_cells.push_back(c);
      continue;
    }
    const double star_ratio = polygon_kernel_radius(poly) / g.diameter;
    double min_edge = std::numeric_limits<double>::max();
    for (std::size_t j = 0; j < poly.size(); ++j)
      min_edge = std::min(min_edge, (poly[(j + 1) % poly.size()] - poly[j]).norm());
    const double edge_ratio = min_edge / g.diameter;
    report.min_star_ratio = std::min(report.min_star_ratio, star_ratio);
    report.min_edge_ratio = std::min(report.min_edge_ratio, edge_ratio);
    if (star_ratio < c_T || edge_ratio < c_T) {
      report.passed = false;
      report.offending_cells.push_back(c);
    }
  }
  if (mesh.num_cells() == 0) report.passed = false;
  return report;
}

double mesh_size(const PolygonMesh& mesh) {
  if (mesh.num_cells() == 0) throw std::invalid_argument("mesh_size of an empty mesh");
  double h = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
    h = std::max(h, mesh.cell_geometry(c).diameter);
  return h;
}

void write_mesh(std::ostream& os, const PolygonMesh& mesh) {
  os.precision(17);
  os << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
  for (int v = 0; v < mesh.num_vertices(); ++v)
    os << mesh.vertex(v).x() << ' ' << mesh.vertex(v).y() << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const std::vector<int>& cell = mesh.cell(c);
    os << cell.size();
    for (int v : cell) os << ' ' << v;
    os << '\n';
  }
}

PolygonMesh read_mesh(std::istream& is) {
  int nv = 0, nc = 0;
  if (!(is >> nv >> nc) || nv < 3 || nc < 1)
    throw std::runtime_error("mesh file: bad header (expected 'NV NC')");
  std::vector<Vec2> verts(nv);
  for (int v = 0; v < nv; ++v)
    if (!(is >> verts[v].x() >> verts[v].y()))
      throw std::runtime_error("mesh file: truncated vertex list");
  std::vector<std::vector<int>> cells(nc);
  for (int c = 0; c < nc; ++c) {
    int m = 0;
    if (!(is >> m) || m < 3) throw std::runtime_error("mesh file: bad cell size");
    cells[c].resize(m);
    for (int j = 0; j < m; ++j)
      if (!(is >> cells[c][j]))
        throw std::runtime_error("mesh file: truncated cell list");
  }
  PolygonMesh mesh = PolygonMesh::from_cells(std::move(verts), std::move(cells));
  // Boundary flags are implied by adjacency; confirm they agree with the
  // domain boundary recomputed from coordinates.
  const double tol = 1e-12;
  auto on_unit_square_boundary = [tol](const Vec2& p) {
    return std::abs(p.x()) <= tol || std::abs(p.x() - 1.0) <= tol ||
           std::abs(p.y()) <= tol || std::abs(p.y() - 1.0) <= tol;
  };
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edge_on_boundary(e)) continue;
    const EdgeRecord& rec = mesh.edge(e);
    if (!on_unit_square_boundary(mesh.vertex(rec.v0)) ||
        !on_unit_square_boundary(mesh.vertex(rec.v1)))
      throw std::runtime_error("mesh file: boundary edge (" + std::to_string(rec.v0) + "," +
                               std::to_string(rec.v1) + ") does not lie on the unit square boundary");
  }
  return mesh;
}

void write_mesh_file(const std::string& path, const PolygonMesh& mesh) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_mesh(os, mesh);
}

PolygonMesh read_mesh_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_mesh(is);
}

}  // namespace sfvem
