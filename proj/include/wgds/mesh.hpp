#pragma once

// Polygonal meshes of the two-region domain.  Cells carry a region tag
// (Stokes or Darcy); edges are classified as interior to a region, on the
// outer boundary of a region, or on the Stokes-Darcy interface.
//
// Edge normal conventions:
//  * interface edges: unit normal points from the Stokes cell into the Darcy
//    cell,
//  * interior edges: outward from the adjacent cell with the smaller index,
//  * boundary edges: outward from the domain.
// Each cell records, per edge, the sign relating the stored edge normal to
// its own outward normal.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wgds {

enum class Region : std::uint8_t { Stokes, Darcy };

enum class EdgeType : std::uint8_t {
  InteriorStokes,
  InteriorDarcy,
  Interface,
  BoundaryStokes,
  BoundaryDarcy,
};

inline bool is_vector_trace(EdgeType t) {
  // Edges carrying a full 2-component trace: everything except Darcy edges,
  // which carry only the normal component.
  return t == EdgeType::InteriorStokes || t == EdgeType::BoundaryStokes ||
         t == EdgeType::Interface;
}

inline bool is_boundary(EdgeType t) {
  return t == EdgeType::BoundaryStokes || t == EdgeType::BoundaryDarcy;
}

struct MeshEdge {
  int v0 = -1, v1 = -1;        // endpoint vertex ids; basis parameter runs v0 -> v1
  int cell[2] = {-1, -1};      // adjacent cells, cell[1] = -1 on the boundary
  EdgeType type = EdgeType::InteriorStokes;
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();
  Eigen::Vector2d mid = Eigen::Vector2d::Zero();
  double len = 0.0;
};

struct MeshCell {
  std::vector<int> verts;      // counterclockwise
  Region region = Region::Stokes;
  std::vector<int> edges;      // edge ids, in vertex-loop order
  std::vector<double> outward; // outward normal of this cell on edges[k] = outward[k]*edge.normal
  double area = 0.0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  double h = 0.0;              // longest edge, used as the cell size
  double diam = 0.0;           // diameter (max vertex distance), diagnostic
};

struct PolyMesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<MeshCell> cells;
  std::vector<MeshEdge> edges;

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_vertices() const { return static_cast<int>(vertices.size()); }

  int count_cells(Region r) const {
    int k = 0;
    for (const auto& c : cells)
      if (c.region == r) ++k;
    return k;
  }
  int count_edges(EdgeType t) const {
    int k = 0;
    for (const auto& e : edges)
      if (e.type == t) ++k;
    return k;
  }

  std::vector<Eigen::Vector2d> cell_vertices(int c) const {
    std::vector<Eigen::Vector2d> v;
    v.reserve(cells[c].verts.size());
    for (int i : cells[c].verts) v.push_back(vertices[i]);
    return v;
  }

  double scale() const {
    double s = 0.0;
    for (const auto& p : vertices) s = std::max(s, p.norm());
    return std::max(s, 1.0);
  }
};

namespace detail {

inline double polygon_area_signed(const std::vector<Eigen::Vector2d>& v) {
  double a = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto& p = v[k];
    const auto& q = v[(k + 1) % v.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

inline Eigen::Vector2d polygon_centroid(const std::vector<Eigen::Vector2d>& v, double area) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto& p = v[k];
    const auto& q = v[(k + 1) % v.size()];
    double cross = p.x() * q.y() - q.x() * p.y();
    c += (p + q) * cross;
  }
  return c / (6.0 * area);
}

}  // namespace detail

// Builds edges, per-cell geometry and edge classification from vertices +
// cell loops.  Cells are reordered counterclockwise if needed.  If
// interface_y is given, every Stokes-Darcy adjacency must lie on that
// horizontal line; otherwise, the interface line is inferred from the first
// mixed adjacency and the rest must be collinear with it.
inline void finalize_mesh(PolyMesh& mesh, std::optional<double> interface_y = {}) {
  const double tol = 1e-12 * mesh.scale();

  for (auto& cell : mesh.cells) {
    if (cell.verts.size() < 3)
      throw std::runtime_error("finalize_mesh: cell with fewer than 3 vertices");
    std::vector<Eigen::Vector2d> v;
    for (int i : cell.verts) {
      if (i < 0 || i >= mesh.n_vertices())
        throw std::runtime_error("finalize_mesh: vertex index out of range");
      v.push_back(mesh.vertices[i]);
    }
    double a = detail::polygon_area_signed(v);
    if (std::abs(a) < tol * tol)
      throw std::runtime_error("finalize_mesh: degenerate cell");
    if (a < 0.0) {
      std::reverse(cell.verts.begin(), cell.verts.end());
      std::reverse(v.begin(), v.end());
      a = -a;
    }
    cell.area = a;
    cell.centroid = detail::polygon_centroid(v, a);
    cell.h = 0.0;
    cell.diam = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      cell.h = std::max(cell.h, (v[(k + 1) % v.size()] - v[k]).norm());
      for (std::size_t l = k + 1; l < v.size(); ++l)
        cell.diam = std::max(cell.diam, (v[l] - v[k]).norm());
    }
  }

  // build edges from the cell loops
  mesh.edges.clear();
  std::map<std::pair<int, int>, int> lookup;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    auto& cell = mesh.cells[c];
    cell.edges.assign(cell.verts.size(), -1);
    cell.outward.assign(cell.verts.size(), 0.0);
    for (std::size_t k = 0; k < cell.verts.size(); ++k) {
      int a = cell.verts[k];
      int b = cell.verts[(k + 1) % cell.verts.size()];
      auto key = std::minmax(a, b);
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        MeshEdge e;
        e.v0 = a;
        e.v1 = b;  // direction as traversed by the first cell (counterclockwise)
        e.cell[0] = c;
        Eigen::Vector2d t = mesh.vertices[b] - mesh.vertices[a];
        e.len = t.norm();
        if (e.len < tol) throw std::runtime_error("finalize_mesh: zero-length edge");
        t /= e.len;
        e.normal = Eigen::Vector2d(t.y(), -t.x());  // outward for the creating cell
        e.mid = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
        lookup.emplace(key, mesh.n_edges());
        cell.edges[k] = mesh.n_edges();
        cell.outward[k] = 1.0;
        mesh.edges.push_back(e);
      } else {
        MeshEdge& e = mesh.edges[it->second];
        if (e.cell[1] != -1)
          throw std::runtime_error("finalize_mesh: edge shared by more than two cells");
        e.cell[1] = c;
        cell.edges[k] = it->second;
        cell.outward[k] = -1.0;
      }
    }
  }

  // classify and fix normal orientations
  std::optional<Eigen::Vector2d> iface_pt;
  std::optional<Eigen::Vector2d> iface_dir;
  if (interface_y) {
    iface_pt = Eigen::Vector2d(0.0, *interface_y);
    iface_dir = Eigen::Vector2d(1.0, 0.0);
  }
  auto flip = [&mesh](int eid) {
    MeshEdge& e = mesh.edges[eid];
    e.normal = -e.normal;
    std::swap(e.cell[0], e.cell[1]);
    for (int ci = 0; ci < 2; ++ci) {
      if (e.cell[ci] < 0) continue;
      MeshCell& cell = mesh.cells[e.cell[ci]];
      for (std::size_t k = 0; k < cell.edges.size(); ++k)
        if (cell.edges[k] == eid) cell.outward[k] = -cell.outward[k];
    }
  };

  for (int eid = 0; eid < mesh.n_edges(); ++eid) {
    MeshEdge& e = mesh.edges[eid];
    if (e.cell[1] == -1) {
      Region r = mesh.cells[e.cell[0]].region;
      e.type = (r == Region::Stokes) ? EdgeType::BoundaryStokes : EdgeType::BoundaryDarcy;
      continue;  // normal already outward from the only cell = outward from the domain
    }
    Region r0 = mesh.cells[e.cell[0]].region;
    Region r1 = mesh.cells[e.cell[1]].region;
    if (r0 == r1) {
      e.type = (r0 == Region::Stokes) ? EdgeType::InteriorStokes : EdgeType::InteriorDarcy;
      if (e.cell[0] > e.cell[1]) flip(eid);  // outward from the smaller cell index
    } else {
      e.type = EdgeType::Interface;
      if (r0 != Region::Stokes) flip(eid);  // normal points Stokes -> Darcy
      // interface alignment check
      Eigen::Vector2d a = mesh.vertices[e.v0], b = mesh.vertices[e.v1];
      if (!iface_pt) {
        iface_pt = a;
        Eigen::Vector2d d = b - a;
        iface_dir = d / d.norm();
      }
      Eigen::Vector2d n(-iface_dir->y(), iface_dir->x());
      if (std::abs(n.dot(a - *iface_pt)) > tol || std::abs(n.dot(b - *iface_pt)) > tol)
        throw std::runtime_error(
            "finalize_mesh: Stokes-Darcy adjacency off the interface line");
    }
  }
}

// Uniform rectangular mesh of Omega_S = (0,pi)x(0,1) over Omega_D = (0,pi)x(-1,0):
// n columns, 2n rows of size (pi/n)x(1/n); the lower n rows are Darcy.
inline PolyMesh build_rect_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_rect_mesh: n >= 1");
  PolyMesh mesh;
  const double pi = 3.14159265358979323846;
  double dx = pi / n, dy = 1.0 / n;
  int nx = n, ny = 2 * n;
  mesh.vertices.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices.emplace_back(i * dx, -1.0 + j * dy);
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.cells.reserve(nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      MeshCell c;
      c.verts = {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)};
      c.region = (j < n) ? Region::Darcy : Region::Stokes;
      mesh.cells.push_back(c);
    }
  finalize_mesh(mesh, 0.0);
  return mesh;
}

//// colorability ////////////////////////////////////////////////////////////
//
// All Stokes cells start black.  A cell turns white if
//  (1) it has two different edges on the outer Stokes boundary, or, in later
//      sweeps,
//  (2) it has one edge on the outer Stokes boundary and shares another edge
//      with a white cell, or shares two edges with white cells.
// The mesh is colorable when every Stokes cell ends white.

struct ColorabilityReport {
  bool colorable = false;
  int sweeps = 0;
  std::vector<std::uint8_t> white;  // per cell; Darcy cells stay 0
};

inline ColorabilityReport check_colorable(const PolyMesh& mesh) {
  ColorabilityReport rep;
  rep.white.assign(mesh.cells.size(), 0);
  int n_stokes = mesh.count_cells(Region::Stokes);
  int remaining = n_stokes;

  for (int c = 0; c < mesh.n_cells(); ++c) {
    if (mesh.cells[c].region != Region::Stokes) continue;
    int nb = 0;
    for (int e : mesh.cells[c].edges)
      if (mesh.edges[e].type == EdgeType::BoundaryStokes) ++nb;
    if (nb >= 2) {
      rep.white[c] = 1;
      --remaining;
    }
  }
  rep.sweeps = 1;

  bool changed = true;
  while (changed && remaining > 0) {
    changed = false;
    ++rep.sweeps;
    for (int c = 0; c < mesh.n_cells(); ++c) {
      if (mesh.cells[c].region != Region::Stokes || rep.white[c]) continue;
      int nb = 0, nwhite = 0;
      for (int e : mesh.cells[c].edges) {
        const MeshEdge& edge = mesh.edges[e];
        if (edge.type == EdgeType::BoundaryStokes) ++nb;
        if (edge.type == EdgeType::InteriorStokes) {
          int other = (edge.cell[0] == c) ? edge.cell[1] : edge.cell[0];
          if (rep.white[other]) ++nwhite;
        }
      }
      if ((nb >= 1 && nwhite >= 1) || nwhite >= 2) {
        rep.white[c] = 1;
        --remaining;
        changed = true;
      }
    }
  }
  rep.colorable = (remaining == 0);
  return rep;
}

//// quality diagnostics /////////////////////////////////////////////////////

struct MeshQuality {
  double min_edge_over_h = 1.0;  // shortest edge / cell size, worst cell
  double max_h_over_diam = 0.0;
  double min_area = 0.0;
};

inline MeshQuality mesh_quality(const PolyMesh& mesh) {
  MeshQuality q;
  q.min_edge_over_h = 1.0;
  q.min_area = mesh.cells.empty() ? 0.0 : mesh.cells[0].area;
  for (const auto& cell : mesh.cells) {
    double emin = cell.h;
    for (int e : cell.edges) emin = std::min(emin, mesh.edges[e].len);
    q.min_edge_over_h = std::min(q.min_edge_over_h, emin / cell.h);
    q.max_h_over_diam = std::max(q.max_h_over_diam, cell.h / cell.diam);
    q.min_area = std::min(q.min_area, cell.area);
  }
  return q;
}

}  // namespace wgds
