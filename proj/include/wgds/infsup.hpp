#pragma once

// Well-posedness diagnostics: coercivity of the velocity form on the
// boundary-reduced space, nonsingularity of the saddle system, and a dense
// generalized-eigenvalue probe of the discrete inf-sup constant.  These are
// dense computations meant for small meshes.

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <stdexcept>
#include <vector>

#include "wgds/assembly.hpp"
#include "wgds/space.hpp"

namespace wgds {

// Smallest and largest eigenvalues of the boundary-reduced velocity matrix.
struct CoercivityProbe {
  double min_eig = 0.0;
  double max_eig = 0.0;
  int n_free = 0;
};

namespace detail {

inline Eigen::MatrixXd reduce_to_free(const SparseMat& M, const WgDofMap& dm) {
  int nf = static_cast<int>(dm.free_dofs.size());
  Eigen::MatrixXd dense = Eigen::MatrixXd(M);
  Eigen::MatrixXd out(nf, nf);
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j) out(i, j) = dense(dm.free_dofs[i], dm.free_dofs[j]);
  return out;
}

inline Eigen::MatrixXd free_columns(const SparseMat& B, const WgDofMap& dm) {
  int nf = static_cast<int>(dm.free_dofs.size());
  Eigen::MatrixXd dense = Eigen::MatrixXd(B);
  Eigen::MatrixXd out(dense.rows(), nf);
  for (int j = 0; j < nf; ++j) out.col(j) = dense.col(dm.free_dofs[j]);
  return out;
}

}  // namespace detail

inline CoercivityProbe coercivity_probe(const WgDofMap& dm, int threads = 1) {
  SparseMat A = assemble_velocity_matrix(dm, threads);
  Eigen::MatrixXd Aff = detail::reduce_to_free(A, dm);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Aff, Eigen::EigenvaluesOnly);
  CoercivityProbe probe;
  probe.min_eig = eig.eigenvalues().minCoeff();
  probe.max_eig = eig.eigenvalues().maxCoeff();
  probe.n_free = static_cast<int>(dm.free_dofs.size());
  return probe;
}

// Inf-sup constant from the pressure Schur complement S = B_f V^-1 B_f^T,
// where V is the full discrete velocity-norm matrix restricted to the free
// unknowns.  The generalized problem S q = lambda M_p q has the constant
// pressure as an exact zero mode; the inf-sup constant is the square root of
// the second-smallest eigenvalue.
struct InfSupProbe {
  double beta_h = 0.0;
  double zero_mode = 0.0;  // smallest eigenvalue, should vanish
  int n_pressure = 0;
};

inline InfSupProbe infsup_probe(const WgDofMap& dm, int threads = 1) {
  SparseMat V = assemble_norm_matrix(dm, threads);
  SparseMat B = assemble_divergence_matrix(dm, threads);
  Eigen::MatrixXd Vff = detail::reduce_to_free(V, dm);
  Eigen::MatrixXd Bf = detail::free_columns(B, dm);

  Eigen::LLT<Eigen::MatrixXd> vchol(Vff);
  if (vchol.info() != Eigen::Success)
    throw std::runtime_error("infsup_probe: velocity norm matrix is not positive definite");
  Eigen::MatrixXd S = Bf * vchol.solve(Bf.transpose());

  // pressure mass matrix, block diagonal over cells
  const PolyMesh& mesh = *dm.mesh;
  Eigen::MatrixXd Mp = Eigen::MatrixXd::Zero(dm.n_pressure, dm.n_pressure);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    QuadRule rule = polygon_rule(mesh.cell_vertices(c), dm.par.cell_exactness());
    Eigen::MatrixXd vp = dm.pressure_basis(c).eval(rule.x, rule.y);
    int nb = dm.pres_nb(c);
    Mp.block(dm.pres_offset[c], dm.pres_offset[c], nb, nb) =
        vp * rule.w.asDiagonal() * vp.transpose();
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, Mp,
                                                                Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("infsup_probe: generalized eigensolver failed");
  InfSupProbe probe;
  probe.zero_mode = eig.eigenvalues()(0);
  probe.beta_h = std::sqrt(std::max(0.0, eig.eigenvalues()(1)));
  probe.n_pressure = dm.n_pressure;
  return probe;
}

// Nonsingularity check of the reduced saddle matrix via sparse LU.
inline bool saddle_nonsingular(const ReducedSystem& red) {
  Eigen::SparseLU<SparseMat> lu;
  lu.analyzePattern(red.K);
  lu.factorize(red.K);
  return lu.info() == Eigen::Success;
}

}  // namespace wgds
