#pragma once

// Degrees of freedom for the WG velocity/pressure pair and the local L2
// projections onto them.
//
// Velocity: per cell, an interior polynomial pair [P_alpha(K)]^2; per edge,
// a trace polynomial.  Edges on the Stokes side and on the interface carry a
// full 2-component trace [P_beta(e)]^2; Darcy edges carry a single scalar,
// the coefficient of the normal direction n_e.  Traces on the outer boundary
// are prescribed (eliminated from the solve).
//
// Pressure: piecewise P_gamma per region, with the zero-mean condition
// handled globally by one Lagrange multiplier.
//
// Local cell layout used everywhere downstream:
//   [comp-0 interior | comp-1 interior | edge blocks in cell loop order],
// vector-trace edge blocks as [comp-0 coeffs | comp-1 coeffs].

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

#include "wgds/basis.hpp"
#include "wgds/mesh.hpp"
#include "wgds/params.hpp"

namespace wgds {

// Fields take a region tag so that two-valued traces (the exact velocity may
// jump tangentially across the interface) can be evaluated one-sidedly.
using ScalarField = std::function<double(double, double, Region)>;
using VectorField = std::function<Eigen::Vector2d(double, double, Region)>;

// Side whose trace an edge polynomial represents: the Stokes side on the
// interface, the owning region elsewhere.
inline Region edge_side(const PolyMesh& mesh, int e) {
  const MeshEdge& edge = mesh.edges[e];
  if (edge.type == EdgeType::Interface) return Region::Stokes;
  return mesh.cells[edge.cell[0]].region;
}

struct WgDofMap {
  const PolyMesh* mesh = nullptr;
  WgParams par;

  std::vector<int> cell_offset;  // interior velocity dof start per cell
  std::vector<int> edge_offset;  // trace dof start per edge
  std::vector<int> pres_offset;  // pressure dof start per cell
  int n_velocity = 0;
  int n_pressure = 0;

  std::vector<int> free_dofs;      // velocity dofs not on the outer boundary
  std::vector<int> boundary_dofs;  // prescribed velocity dofs
  std::vector<char> boundary_mask;  // mask over velocity dofs

  int alpha(Region r) const { return r == Region::Stokes ? par.alpha_s : par.alpha_d; }
  int gamma(Region r) const { return r == Region::Stokes ? par.gamma_s : par.gamma_d; }

  int cell_nb(int c) const { return poly_dim(alpha(mesh->cells[c].region)); }
  int pres_nb(int c) const { return poly_dim(gamma(mesh->cells[c].region)); }
  int edge_ndof(int e) const {
    return is_vector_trace(mesh->edges[e].type) ? 2 * (par.beta + 1) : par.beta + 1;
  }

  CellBasis cell_basis(int c, int deg) const {
    return CellBasis{mesh->cells[c].centroid, mesh->cells[c].h, deg};
  }
  CellBasis cell_basis(int c) const {
    return cell_basis(c, alpha(mesh->cells[c].region));
  }
  CellBasis pressure_basis(int c) const {
    return cell_basis(c, gamma(mesh->cells[c].region));
  }
  EdgeBasis edge_basis(int e) const { return EdgeBasis{par.beta, mesh->edges[e].len}; }

  // global velocity dofs of cell c in the local layout
  std::vector<int> cell_dofs(int c) const {
    const MeshCell& cell = mesh->cells[c];
    std::vector<int> dofs;
    int nb = cell_nb(c);
    dofs.reserve(2 * nb + 4 * (par.beta + 1) * cell.edges.size());
    for (int k = 0; k < 2 * nb; ++k) dofs.push_back(cell_offset[c] + k);
    for (int e : cell.edges)
      for (int k = 0; k < edge_ndof(e); ++k) dofs.push_back(edge_offset[e] + k);
    return dofs;
  }

  static WgDofMap build(const PolyMesh& mesh, const WgParams& par) {
    par.validate();
    WgDofMap dm;
    dm.mesh = &mesh;
    dm.par = par;
    dm.cell_offset.resize(mesh.n_cells());
    dm.edge_offset.resize(mesh.n_edges());
    dm.pres_offset.resize(mesh.n_cells());
    int at = 0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
      dm.cell_offset[c] = at;
      at += 2 * dm.cell_nb(c);
    }
    for (int e = 0; e < mesh.n_edges(); ++e) {
      dm.edge_offset[e] = at;
      at += dm.edge_ndof(e);
    }
    dm.n_velocity = at;
    at = 0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
      dm.pres_offset[c] = at;
      at += dm.pres_nb(c);
    }
    dm.n_pressure = at;

    dm.boundary_mask.assign(dm.n_velocity, 0);
    for (int e = 0; e < mesh.n_edges(); ++e)
      if (is_boundary(mesh.edges[e].type))
        for (int k = 0; k < dm.edge_ndof(e); ++k)
          dm.boundary_mask[dm.edge_offset[e] + k] = 1;
    for (int i = 0; i < dm.n_velocity; ++i)
      (dm.boundary_mask[i] ? dm.boundary_dofs : dm.free_dofs).push_back(i);
    return dm;
  }
};

//// projections /////////////////////////////////////////////////////////////

// L2 projection of a scalar field onto P_deg(K), coefficients in the scaled
// monomial basis of the cell.
inline Eigen::VectorXd project_cell_scalar(const WgDofMap& dm, int c, int deg,
                                           const ScalarField& f) {
  const PolyMesh& mesh = *dm.mesh;
  Region r = mesh.cells[c].region;
  int ex = std::max(dm.par.cell_exactness(), 2 * deg + 2);
  QuadRule rule = polygon_rule(mesh.cell_vertices(c), ex);
  CellBasis basis = dm.cell_basis(c, deg);
  Eigen::MatrixXd val = basis.eval(rule.x, rule.y);
  Eigen::VectorXd fv(rule.size());
  for (int q = 0; q < rule.size(); ++q) fv(q) = f(rule.x(q), rule.y(q), r);
  Eigen::MatrixXd M = val * rule.w.asDiagonal() * val.transpose();
  return M.ldlt().solve(val * (rule.w.asDiagonal() * fv));
}

// L2 projection of each tensor component onto P_beta(K); entries (i,j) in
// row-major order.
inline std::array<Eigen::VectorXd, 4> project_cell_tensor(
    const WgDofMap& dm, int c, const std::function<Eigen::Matrix2d(double, double, Region)>& f) {
  const PolyMesh& mesh = *dm.mesh;
  Region r = mesh.cells[c].region;
  int deg = dm.par.beta;
  int ex = std::max(dm.par.cell_exactness(), 2 * deg + 2);
  QuadRule rule = polygon_rule(mesh.cell_vertices(c), ex);
  CellBasis basis = dm.cell_basis(c, deg);
  Eigen::MatrixXd val = basis.eval(rule.x, rule.y);
  Eigen::MatrixXd M = val * rule.w.asDiagonal() * val.transpose();
  auto ldlt = M.ldlt();
  std::array<Eigen::VectorXd, 4> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Eigen::VectorXd fv(rule.size());
      for (int q = 0; q < rule.size(); ++q) fv(q) = f(rule.x(q), rule.y(q), r)(i, j);
      out[2 * i + j] = ldlt.solve(val * (rule.w.asDiagonal() * fv));
    }
  return out;
}

// L2 projection of an edge trace onto the edge polynomial space.  For
// vector-trace edges returns [comp-0 | comp-1] coefficients; for Darcy edges
// the normal component against n_e.
inline Eigen::VectorXd project_edge_trace(const WgDofMap& dm, int e, const VectorField& f) {
  const PolyMesh& mesh = *dm.mesh;
  const MeshEdge& edge = mesh.edges[e];
  Region side = edge_side(mesh, e);
  EdgeQuadRule rule = edge_rule(mesh.vertices[edge.v0], mesh.vertices[edge.v1],
                                std::max(dm.par.edge_exactness(), 2 * dm.par.beta + 2));
  EdgeBasis basis = dm.edge_basis(e);
  Eigen::MatrixXd val = basis.eval(rule.xi);
  Eigen::MatrixXd mass = basis.mass();
  int nb = basis.size();
  if (is_vector_trace(edge.type)) {
    Eigen::VectorXd out(2 * nb);
    for (int i = 0; i < 2; ++i) {
      Eigen::VectorXd fv(rule.size());
      for (int q = 0; q < rule.size(); ++q) fv(q) = f(rule.x(q), rule.y(q), side)(i);
      out.segment(i * nb, nb) = mass.ldlt().solve(val * (rule.w.asDiagonal() * fv));
    }
    return out;
  }
  Eigen::VectorXd fv(rule.size());
  for (int q = 0; q < rule.size(); ++q)
    fv(q) = edge.normal.dot(f(rule.x(q), rule.y(q), side));
  return mass.ldlt().solve(val * (rule.w.asDiagonal() * fv));
}

// Q_h: interior projections onto [P_alpha]^2 plus edge trace projections.
inline Eigen::VectorXd project_velocity(const WgDofMap& dm, const VectorField& f) {
  const PolyMesh& mesh = *dm.mesh;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dm.n_velocity);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    int nb = dm.cell_nb(c);
    for (int i = 0; i < 2; ++i) {
      auto comp = [&f, i](double x, double y, Region r) { return f(x, y, r)(i); };
      u.segment(dm.cell_offset[c] + i * nb, nb) =
          project_cell_scalar(dm, c, dm.alpha(mesh.cells[c].region), comp);
    }
  }
  for (int e = 0; e < mesh.n_edges(); ++e)
    u.segment(dm.edge_offset[e], dm.edge_ndof(e)) = project_edge_trace(dm, e, f);
  return u;
}

inline Eigen::VectorXd pressure_mean_weights(const WgDofMap& dm) {
  const PolyMesh& mesh = *dm.mesh;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dm.n_pressure);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    QuadRule rule = polygon_rule(mesh.cell_vertices(c), dm.par.cell_exactness());
    Eigen::MatrixXd val = dm.pressure_basis(c).eval(rule.x, rule.y);
    m.segment(dm.pres_offset[c], dm.pres_nb(c)) = val * rule.w;
  }
  return m;
}

// Projection onto the mean-free pressure space: cellwise L2 projection, then
// the weighted mean is removed through the constant mode of each cell.
inline Eigen::VectorXd project_pressure(const WgDofMap& dm, const ScalarField& f) {
  const PolyMesh& mesh = *dm.mesh;
  Eigen::VectorXd p(dm.n_pressure);
  for (int c = 0; c < mesh.n_cells(); ++c)
    p.segment(dm.pres_offset[c], dm.pres_nb(c)) =
        project_cell_scalar(dm, c, dm.gamma(mesh.cells[c].region), f);
  Eigen::VectorXd w = pressure_mean_weights(dm);
  double volume = 0.0;
  for (const auto& cell : mesh.cells) volume += cell.area;
  double mean = w.dot(p) / volume;
  for (int c = 0; c < mesh.n_cells(); ++c) p(dm.pres_offset[c]) -= mean;  // basis fn 0 is 1
  return p;
}

//// evaluation helpers //////////////////////////////////////////////////////

struct WgFunction {
  const WgDofMap* dm = nullptr;
  Eigen::VectorXd coeffs;

  // interior values on cell c at given points: (2 x npts)
  Eigen::MatrixXd eval_interior(int c, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& y) const {
    int nb = dm->cell_nb(c);
    Eigen::MatrixXd val = dm->cell_basis(c).eval(x, y);
    Eigen::MatrixXd out(2, x.size());
    for (int i = 0; i < 2; ++i)
      out.row(i) = coeffs.segment(dm->cell_offset[c] + i * nb, nb).transpose() * val;
    return out;
  }

  // trace values on edge e at normalized parameters xi: (2 x npts)
  Eigen::MatrixXd eval_edge(int e, const Eigen::VectorXd& xi) const {
    const MeshEdge& edge = dm->mesh->edges[e];
    int nb = dm->par.beta + 1;
    Eigen::MatrixXd val = EdgeBasis::eval(xi, dm->par.beta);
    Eigen::MatrixXd out(2, xi.size());
    if (is_vector_trace(edge.type)) {
      for (int i = 0; i < 2; ++i)
        out.row(i) = coeffs.segment(dm->edge_offset[e] + i * nb, nb).transpose() * val;
    } else {
      Eigen::RowVectorXd s = coeffs.segment(dm->edge_offset[e], nb).transpose() * val;
      out.row(0) = edge.normal.x() * s;
      out.row(1) = edge.normal.y() * s;
    }
    return out;
  }
};

struct PressureFunction {
  const WgDofMap* dm = nullptr;
  Eigen::VectorXd coeffs;

  Eigen::VectorXd eval(int c, const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    Eigen::MatrixXd val = dm->pressure_basis(c).eval(x, y);
    return val.transpose() * coeffs.segment(dm->pres_offset[c], dm->pres_nb(c));
  }

  double mean() const {
    Eigen::VectorXd w = pressure_mean_weights(*dm);
    double volume = 0.0;
    for (const auto& cell : dm->mesh->cells) volume += cell.area;
    return w.dot(coeffs) / volume;
  }
};

//// boundary data ///////////////////////////////////////////////////////////

enum class BcMode {
  Nodal,       // endpoint interpolation of the trace (lowest order only)
  Projection,  // edge L2 projection of the trace
};

// Endpoint interpolation of a trace on one edge; linear in the edge
// parameter, so it requires beta = 1.
inline Eigen::VectorXd nodal_edge_trace(const WgDofMap& dm, int e, const VectorField& f) {
  if (dm.par.beta != 1)
    throw std::invalid_argument("nodal_edge_trace: requires beta = 1");
  const PolyMesh& mesh = *dm.mesh;
  const MeshEdge& edge = mesh.edges[e];
  Region side = edge_side(mesh, e);
  const Eigen::Vector2d& p0 = mesh.vertices[edge.v0];
  const Eigen::Vector2d& p1 = mesh.vertices[edge.v1];
  Eigen::Vector2d f0 = f(p0.x(), p0.y(), side);
  Eigen::Vector2d f1 = f(p1.x(), p1.y(), side);
  // a0 + a1*xi with xi = -1 at v0 and +1 at v1
  Eigen::VectorXd out(dm.edge_ndof(e));
  if (is_vector_trace(edge.type)) {
    for (int i = 0; i < 2; ++i) {
      out(2 * i) = 0.5 * (f0(i) + f1(i));
      out(2 * i + 1) = 0.5 * (f1(i) - f0(i));
    }
  } else {
    double a0 = edge.normal.dot(f0), a1 = edge.normal.dot(f1);
    out(0) = 0.5 * (a0 + a1);
    out(1) = 0.5 * (a1 - a0);
  }
  return out;
}

// Prescribed values for the boundary trace dofs; entries off the boundary are
// zero.
inline Eigen::VectorXd boundary_values(const WgDofMap& dm, const VectorField& f,
                                       BcMode mode) {
  const PolyMesh& mesh = *dm.mesh;
  Eigen::VectorXd bv = Eigen::VectorXd::Zero(dm.n_velocity);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const MeshEdge& edge = mesh.edges[e];
    if (!is_boundary(edge.type)) continue;
    bv.segment(dm.edge_offset[e], dm.edge_ndof(e)) =
        (mode == BcMode::Nodal) ? nodal_edge_trace(dm, e, f)
                                : project_edge_trace(dm, e, f);
  }
  return bv;
}

}  // namespace wgds
