#pragma once

// Global assembly of the coupled saddle-point system
//
//   [ A  B^T ] [u]   [F]
//   [ B   0  ] [p] = [G],   A = viscous + Darcy mass + stabilization + interface,
//                           B from  b_h(v,q) = -(div_w v, q),
//
// together with the velocity norm matrix (A plus the weak-divergence Gram
// matrix) and the rho-weighted stabilization alone, both reused by the
// diagnostics.  The zero-mean pressure condition is appended later as a
// single Lagrange-multiplier row/column built from the pressure mean
// weights.
//
// The cell loop runs in parallel over contiguous cell ranges; every thread
// fills its own triplet buffer and buffers are concatenated in range order,
// so the assembled matrices are bit-identical for any thread count.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <thread>
#include <vector>

#include "wgds/mesh.hpp"
#include "wgds/params.hpp"
#include "wgds/space.hpp"
#include "wgds/weakops.hpp"

namespace wgds {

using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct SaddleSystem {
  SparseMat A;               // n_velocity x n_velocity, symmetric
  SparseMat B;               // n_pressure x n_velocity
  Eigen::VectorXd F, G;      // right-hand sides
  Eigen::VectorXd mean_weights;
};

namespace detail {

enum OpMask : unsigned {
  kViscous = 1u,
  kDarcyMass = 2u,
  kStab = 4u,
  kInterface = 8u,
  kDivGram = 16u,
};

inline Eigen::MatrixXd local_velocity_block(const WgDofMap& dm, const CellOps& ops,
                                            unsigned mask) {
  const WgParams& par = dm.par;
  Eigen::MatrixXd loc = Eigen::MatrixXd::Zero(ops.nloc, ops.nloc);
  if (ops.stokes) {
    if (mask & kViscous) {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          Eigen::MatrixXd dw = 0.5 * (ops.grad[2 * i + j] + ops.grad[2 * j + i]);
          loc += 2.0 * par.nu * dw.transpose() * ops.mass_beta * dw;
        }
    }
    if (mask & kStab) {
      double w = par.rho_s * ops.stab_weight;
      for (const auto& term : ops.eterms)
        for (int i = 0; i < 2; ++i)
          loc += w * term.jump[i].transpose() * term.emass * term.jump[i];
    }
  } else {
    if (mask & kDarcyMass) {
      Eigen::Matrix2d kinv = par.kappa_inv();
      int na = ops.nb_alpha;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          loc.block(i * na, j * na, na, na) += kinv(i, j) * ops.mass_alpha;
    }
    if (mask & kStab) {
      double w = par.rho_d * ops.stab_weight;
      for (const auto& term : ops.eterms)
        loc += w * term.njump.transpose() * term.emass * term.njump;
    }
  }
  if (mask & kDivGram) loc += ops.div.transpose() * ops.mass_beta * ops.div;
  return 0.5 * (loc + loc.transpose());
}

inline void interface_triplets(const WgDofMap& dm, std::vector<Triplet>& out) {
  const PolyMesh& mesh = *dm.mesh;
  const WgParams& par = dm.par;
  int ne = par.beta + 1;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const MeshEdge& edge = mesh.edges[e];
    if (edge.type != EdgeType::Interface) continue;
    Eigen::Vector2d t(-edge.normal.y(), edge.normal.x());
    double w = par.mu * t.dot(par.kappa_inv_sqrt() * t);
    Eigen::MatrixXd emass = dm.edge_basis(e).mass();
    // v_b.t = t_0 v_b,0 + t_1 v_b,1 in the shared interface trace
    Eigen::MatrixXd tang(ne, 2 * ne);
    tang << t(0) * Eigen::MatrixXd::Identity(ne, ne), t(1) * Eigen::MatrixXd::Identity(ne, ne);
    Eigen::MatrixXd loc = w * tang.transpose() * emass * tang;
    loc = 0.5 * (loc + loc.transpose());
    int off = dm.edge_offset[e];
    for (int a = 0; a < 2 * ne; ++a)
      for (int b = 0; b < 2 * ne; ++b)
        if (loc(a, b) != 0.0) out.emplace_back(off + a, off + b, loc(a, b));
  }
}

// Parallel cell sweep: `work(c, buffer)` appends that cell's triplets.
template <typename Work>
inline std::vector<Triplet> cell_sweep(int n_cells, int threads, Work work) {
  threads = std::max(1, std::min({threads, n_cells, 256}));
  std::vector<std::vector<Triplet>> buffers(threads);
  auto run = [&](int t) {
    int lo = static_cast<int>(static_cast<long long>(n_cells) * t / threads);
    int hi = static_cast<int>(static_cast<long long>(n_cells) * (t + 1) / threads);
    for (int c = lo; c < hi; ++c) work(c, buffers[t]);
  };
  if (threads == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(run, t);
    for (auto& th : pool) th.join();
  }
  std::vector<Triplet> all;
  std::size_t total = 0;
  for (const auto& b : buffers) total += b.size();
  all.reserve(total);
  for (const auto& b : buffers) all.insert(all.end(), b.begin(), b.end());
  return all;
}

inline SparseMat velocity_operator(const WgDofMap& dm, unsigned mask, int threads) {
  std::vector<Triplet> trips = cell_sweep(
      dm.mesh->n_cells(), threads, [&](int c, std::vector<Triplet>& buf) {
        CellOps ops = build_cell_ops(dm, c);
        Eigen::MatrixXd loc = local_velocity_block(dm, ops, mask);
        for (int a = 0; a < ops.nloc; ++a)
          for (int b = 0; b < ops.nloc; ++b)
            if (loc(a, b) != 0.0) buf.emplace_back(ops.dofs[a], ops.dofs[b], loc(a, b));
      });
  if (mask & kInterface) interface_triplets(dm, trips);
  SparseMat A(dm.n_velocity, dm.n_velocity);
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

}  // namespace detail

inline SparseMat assemble_velocity_matrix(const WgDofMap& dm, int threads = 1) {
  using namespace detail;
  return velocity_operator(dm, kViscous | kDarcyMass | kStab | kInterface, threads);
}

inline SparseMat assemble_norm_matrix(const WgDofMap& dm, int threads = 1) {
  using namespace detail;
  return velocity_operator(dm, kViscous | kDarcyMass | kStab | kInterface | kDivGram,
                           threads);
}

inline SparseMat assemble_stab_matrix(const WgDofMap& dm, int threads = 1) {
  return detail::velocity_operator(dm, detail::kStab, threads);
}

inline SparseMat assemble_divergence_matrix(const WgDofMap& dm, int threads = 1) {
  const PolyMesh& mesh = *dm.mesh;
  std::vector<Triplet> trips = detail::cell_sweep(
      mesh.n_cells(), threads, [&](int c, std::vector<Triplet>& buf) {
        CellOps ops = build_cell_ops(dm, c);
        // (p_a, q_c)_K couples the P_gamma pressure basis to the P_beta test basis
        QuadRule rule = polygon_rule(mesh.cell_vertices(c), dm.par.cell_exactness());
        Eigen::MatrixXd vp = dm.pressure_basis(c).eval(rule.x, rule.y);
        Eigen::MatrixXd vb = dm.cell_basis(c, dm.par.beta).eval(rule.x, rule.y);
        Eigen::MatrixXd cross = vp * rule.w.asDiagonal() * vb.transpose();
        Eigen::MatrixXd loc = -(cross * ops.div);
        int prow = dm.pres_offset[c];
        for (int a = 0; a < loc.rows(); ++a)
          for (int b = 0; b < ops.nloc; ++b)
            if (loc(a, b) != 0.0) buf.emplace_back(prow + a, ops.dofs[b], loc(a, b));
      });
  SparseMat B(dm.n_pressure, dm.n_velocity);
  B.setFromTriplets(trips.begin(), trips.end());
  return B;
}

inline SaddleSystem assemble_system(const WgDofMap& dm, const VectorField& f,
                                    const ScalarField& g, int threads = 1) {
  const PolyMesh& mesh = *dm.mesh;
  SaddleSystem sys;
  sys.A = assemble_velocity_matrix(dm, threads);
  sys.B = assemble_divergence_matrix(dm, threads);
  sys.F = Eigen::VectorXd::Zero(dm.n_velocity);
  sys.G = Eigen::VectorXd::Zero(dm.n_pressure);
  // rhs entries live on disjoint interior/pressure blocks per cell
  detail::cell_sweep(mesh.n_cells(), threads, [&](int c, std::vector<Triplet>&) {
    Region r = mesh.cells[c].region;
    QuadRule rule = polygon_rule(mesh.cell_vertices(c), dm.par.cell_exactness());
    Eigen::MatrixXd va = dm.cell_basis(c).eval(rule.x, rule.y);
    Eigen::MatrixXd vp = dm.pressure_basis(c).eval(rule.x, rule.y);
    int na = dm.cell_nb(c);
    Eigen::VectorXd f0(rule.size()), f1(rule.size()), gv(rule.size());
    for (int q = 0; q < rule.size(); ++q) {
      Eigen::Vector2d fq = f(rule.x(q), rule.y(q), r);
      f0(q) = fq(0);
      f1(q) = fq(1);
      gv(q) = g(rule.x(q), rule.y(q), r);
    }
    sys.F.segment(dm.cell_offset[c], na) = va * (rule.w.asDiagonal() * f0);
    sys.F.segment(dm.cell_offset[c] + na, na) = va * (rule.w.asDiagonal() * f1);
    sys.G.segment(dm.pres_offset[c], dm.pres_nb(c)) = -(vp * (rule.w.asDiagonal() * gv));
  });
  sys.mean_weights = pressure_mean_weights(dm);
  return sys;
}

// Eliminates prescribed boundary traces and appends the mean-constraint
// multiplier.  Unknown ordering: free velocities, pressures, multiplier.
struct ReducedSystem {
  SparseMat K;
  Eigen::VectorXd rhs;
  int n_free = 0, n_pressure = 0;
};

inline ReducedSystem reduce_system(const SaddleSystem& sys, const WgDofMap& dm,
                                   const Eigen::VectorXd& bvals) {
  const int nF = static_cast<int>(dm.free_dofs.size());
  const int nP = dm.n_pressure;
  std::vector<int> to_free(dm.n_velocity, -1);
  for (int k = 0; k < nF; ++k) to_free[dm.free_dofs[k]] = k;

  ReducedSystem red;
  red.n_free = nF;
  red.n_pressure = nP;
  red.rhs = Eigen::VectorXd::Zero(nF + nP + 1);
  for (int k = 0; k < nF; ++k) red.rhs(k) = sys.F(dm.free_dofs[k]);
  red.rhs.segment(nF, nP) = sys.G;

  std::vector<Triplet> trips;
  trips.reserve(sys.A.nonZeros() + 2 * sys.B.nonZeros() + 2 * nP);
  for (int k = 0; k < sys.A.outerSize(); ++k)
    for (SparseMat::InnerIterator it(sys.A, k); it; ++it) {
      int r = to_free[it.row()], c = to_free[it.col()];
      if (r >= 0 && c >= 0)
        trips.emplace_back(r, c, it.value());
      else if (r >= 0)
        red.rhs(r) -= it.value() * bvals(it.col());
    }
  for (int k = 0; k < sys.B.outerSize(); ++k)
    for (SparseMat::InnerIterator it(sys.B, k); it; ++it) {
      int c = to_free[it.col()];
      if (c >= 0) {
        trips.emplace_back(nF + it.row(), c, it.value());
        trips.emplace_back(c, nF + it.row(), it.value());
      } else {
        red.rhs(nF + it.row()) -= it.value() * bvals(it.col());
      }
    }
  for (int p = 0; p < nP; ++p) {
    double w = sys.mean_weights(p);
    if (w != 0.0) {
      trips.emplace_back(nF + p, nF + nP, w);
      trips.emplace_back(nF + nP, nF + p, w);
    }
  }
  red.K.resize(nF + nP + 1, nF + nP + 1);
  red.K.setFromTriplets(trips.begin(), trips.end());
  return red;
}

}  // namespace wgds
