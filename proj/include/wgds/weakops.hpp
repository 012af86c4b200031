#pragma once

// Per-cell discrete weak operators.  For a cell K and the local layout of
// space.hpp, each operator is a matrix taking local velocity coefficients to
// coefficients in the P_beta(K) scaled monomial basis:
//
//   weak gradient  (Stokes cells):  (G_ij v, q)_K = -(v0_i, d_j q)_K + <v_b,i n_j, q>_dK
//   weak divergence (all cells):    (D v, q)_K    = -(v0, grad q)_K + <v_b.n, q>_dK
//
// for all q in P_beta(K), where n is the outward normal of K.  Both follow
// from testing against q and solving with the P_beta mass matrix.  The weak
// divergence equals the trace of the weak gradient on Stokes cells.
//
// Also built here: the per-edge jump matrices feeding the stabilization
//   Stokes:  Q_b(v0) - v_b        (componentwise, in the edge basis)
//   Darcy:   Q_b(v0 . n) - v_b.n  (normal component only)
// and the P_alpha / P_beta cell mass matrices.

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "wgds/mesh.hpp"
#include "wgds/params.hpp"
#include "wgds/space.hpp"

namespace wgds {

struct CellOps {
  int cell = -1;
  bool stokes = false;
  std::vector<int> dofs;  // global velocity dofs, local layout
  int nloc = 0;
  int nb_alpha = 0, nb_beta = 0;

  Eigen::MatrixXd mass_alpha;            // interior-basis mass
  Eigen::MatrixXd mass_beta;             // test-basis mass
  std::array<Eigen::MatrixXd, 4> grad;   // (i,j) row-major, Stokes cells only
  Eigen::MatrixXd div;

  struct EdgeTerm {
    int edge = -1;
    bool vector_trace = false;
    Eigen::MatrixXd jump[2];   // Stokes cells: componentwise jump coefficients
    Eigen::MatrixXd njump;     // Darcy cells: normal jump coefficients
    Eigen::MatrixXd emass;     // edge mass (diagonal for the Legendre basis)
  };
  std::vector<EdgeTerm> eterms;
  double stab_weight = 0.0;    // 1/h_K of this cell
};

inline CellOps build_cell_ops(const WgDofMap& dm, int c) {
  const PolyMesh& mesh = *dm.mesh;
  const MeshCell& cell = mesh.cells[c];
  const WgParams& par = dm.par;

  CellOps ops;
  ops.cell = c;
  ops.stokes = (cell.region == Region::Stokes);
  ops.dofs = dm.cell_dofs(c);
  ops.nloc = static_cast<int>(ops.dofs.size());
  ops.nb_alpha = dm.cell_nb(c);
  ops.nb_beta = poly_dim(par.beta);
  ops.stab_weight = 1.0 / cell.h;

  CellBasis basis_a = dm.cell_basis(c);
  CellBasis basis_b = dm.cell_basis(c, par.beta);
  QuadRule rule = polygon_rule(mesh.cell_vertices(c), par.cell_exactness());

  Eigen::MatrixXd va = basis_a.eval(rule.x, rule.y);
  Eigen::MatrixXd vb = basis_b.eval(rule.x, rule.y);
  Eigen::MatrixXd gbx, gby;
  basis_b.eval_grad(rule.x, rule.y, gbx, gby);

  ops.mass_alpha = va * rule.w.asDiagonal() * va.transpose();
  ops.mass_beta = vb * rule.w.asDiagonal() * vb.transpose();
  auto mass_ldlt = ops.mass_beta.ldlt();

  const int na = ops.nb_alpha, nb = ops.nb_beta, ne = par.beta + 1;

  // -(phi_m, d_j q_c): interior part of both operators
  Eigen::MatrixXd int_dx = -(gbx * rule.w.asDiagonal() * va.transpose());  // nb x na
  Eigen::MatrixXd int_dy = -(gby * rule.w.asDiagonal() * va.transpose());

  // edge quadrature pieces per edge
  struct EdgePiece {
    Eigen::MatrixXd trace_a;  // <chi_k, phi_m>_e  (ne x na)
    Eigen::MatrixXd trace_b;  // <chi_k, q_c>_e    (ne x nb)
    Eigen::Vector2d n_out;
  };
  std::vector<EdgePiece> pieces(cell.edges.size());
  for (std::size_t k = 0; k < cell.edges.size(); ++k) {
    int e = cell.edges[k];
    const MeshEdge& edge = mesh.edges[e];
    EdgeQuadRule erule = edge_rule(mesh.vertices[edge.v0], mesh.vertices[edge.v1],
                                   std::max(par.edge_exactness(), par.alpha_s + par.beta));
    Eigen::MatrixXd chi = EdgeBasis::eval(erule.xi, par.beta);
    Eigen::MatrixXd pa = basis_a.eval(erule.x, erule.y);
    Eigen::MatrixXd pb = basis_b.eval(erule.x, erule.y);
    pieces[k].trace_a = chi * erule.w.asDiagonal() * pa.transpose();
    pieces[k].trace_b = chi * erule.w.asDiagonal() * pb.transpose();
    pieces[k].n_out = cell.outward[k] * edge.normal;
  }

  // rhs of the weak-operator definitions, then mass solves
  auto edge_block_start = [&](std::size_t k) {
    int at = 2 * na;
    for (std::size_t l = 0; l < k; ++l) at += dm.edge_ndof(cell.edges[l]);
    return at;
  };

  std::array<Eigen::MatrixXd, 4> grhs;
  for (auto& g : grhs) g = Eigen::MatrixXd::Zero(nb, ops.nloc);
  Eigen::MatrixXd drhs = Eigen::MatrixXd::Zero(nb, ops.nloc);

  for (int i = 0; i < 2; ++i) {
    grhs[2 * i + 0].middleCols(i * na, na) = int_dx;
    grhs[2 * i + 1].middleCols(i * na, na) = int_dy;
    drhs.middleCols(i * na, na) = (i == 0) ? int_dx : int_dy;
  }
  for (std::size_t k = 0; k < cell.edges.size(); ++k) {
    int e = cell.edges[k];
    int at = edge_block_start(k);
    const EdgePiece& pc = pieces[k];
    // <chi_k, q_c>^T has shape nb x ne
    Eigen::MatrixXd tb = pc.trace_b.transpose();
    if (is_vector_trace(mesh.edges[e].type)) {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          grhs[2 * i + j].middleCols(at + i * ne, ne) += pc.n_out(j) * tb;
      for (int i = 0; i < 2; ++i)
        drhs.middleCols(at + i * ne, ne) += pc.n_out(i) * tb;
    } else {
      // v_b = s(x) n_e:  v_b,i = s n_e,i  and  v_b.n_out = s (n_e.n_out)
      const Eigen::Vector2d& n_e = mesh.edges[e].normal;
      double sgn = n_e.dot(pc.n_out);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          grhs[2 * i + j].middleCols(at, ne) += n_e(i) * pc.n_out(j) * tb;
      drhs.middleCols(at, ne) += sgn * tb;
    }
  }

  if (ops.stokes)
    for (int ij = 0; ij < 4; ++ij) ops.grad[ij] = mass_ldlt.solve(grhs[ij]);
  ops.div = mass_ldlt.solve(drhs);

  // stabilization jumps
  ops.eterms.resize(cell.edges.size());
  for (std::size_t k = 0; k < cell.edges.size(); ++k) {
    int e = cell.edges[k];
    const MeshEdge& edge = mesh.edges[e];
    CellOps::EdgeTerm& term = ops.eterms[k];
    term.edge = e;
    term.vector_trace = is_vector_trace(edge.type);
    term.emass = dm.edge_basis(e).mass();
    int at = edge_block_start(k);
    // Q_b of an interior trace: edge-mass solve of <chi, phi_m>
    Eigen::MatrixXd proj = term.emass.ldlt().solve(pieces[k].trace_a);  // ne x na
    if (ops.stokes) {
      for (int i = 0; i < 2; ++i) {
        term.jump[i] = Eigen::MatrixXd::Zero(ne, ops.nloc);
        term.jump[i].middleCols(i * na, na) = proj;
        term.jump[i].middleCols(at + i * ne, ne) -= Eigen::MatrixXd::Identity(ne, ne);
      }
    } else {
      term.njump = Eigen::MatrixXd::Zero(ne, ops.nloc);
      for (int i = 0; i < 2; ++i)
        term.njump.middleCols(i * na, na) += pieces[k].n_out(i) * proj;
      if (term.vector_trace) {
        for (int i = 0; i < 2; ++i)
          term.njump.middleCols(at + i * ne, ne) -=
              pieces[k].n_out(i) * Eigen::MatrixXd::Identity(ne, ne);
      } else {
        double sgn = mesh.edges[e].normal.dot(pieces[k].n_out);
        term.njump.middleCols(at, ne) -= sgn * Eigen::MatrixXd::Identity(ne, ne);
      }
    }
  }
  return ops;
}

// Weak gradient of a velocity on one cell, as P_beta coefficients per tensor
// component.  Only Stokes cells carry a weak gradient.
inline std::array<Eigen::VectorXd, 4> weak_gradient(const WgDofMap& dm, int c,
                                                    const Eigen::VectorXd& velocity) {
  if (dm.mesh->cells[c].region != Region::Stokes)
    throw std::logic_error("weak_gradient: only defined on Stokes cells");
  CellOps ops = build_cell_ops(dm, c);
  Eigen::VectorXd local(ops.nloc);
  for (int k = 0; k < ops.nloc; ++k) local(k) = velocity(ops.dofs[k]);
  std::array<Eigen::VectorXd, 4> out;
  for (int ij = 0; ij < 4; ++ij) out[ij] = ops.grad[ij] * local;
  return out;
}

inline Eigen::VectorXd weak_divergence(const WgDofMap& dm, int c,
                                       const Eigen::VectorXd& velocity) {
  CellOps ops = build_cell_ops(dm, c);
  Eigen::VectorXd local(ops.nloc);
  for (int k = 0; k < ops.nloc; ++k) local(k) = velocity(ops.dofs[k]);
  return ops.div * local;
}

}  // namespace wgds
