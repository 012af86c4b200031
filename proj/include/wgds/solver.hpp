#pragma once

// Linear solves of the reduced saddle system, with residual certificates
// evaluated on the full (unreduced) operators.  Direct solve through sparse
// LU; optionally MINRES, which fits the symmetric indefinite structure.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <chrono>
#include <string>
#include <unsupported/Eigen/IterativeSolvers>

#include "wgds/assembly.hpp"
#include "wgds/space.hpp"

namespace wgds {

enum class SolverKind { Direct, Minres };

struct SolveReport {
  bool success = false;
  std::string message;
  int iterations = 0;
  double rel_residual = 0.0;       // reduced system, ||Kx - b|| / ||b||
  double momentum_residual = 0.0;  // free rows of F - A u - B^T p
  double mass_residual = 0.0;      // G - B u - m*lambda
  double mean_residual = 0.0;      // m . p
  double solve_seconds = 0.0;
  int n_unknowns = 0;
  long long nnz = 0;
};

struct WgSolution {
  Eigen::VectorXd velocity;  // full coefficient vector, boundary traces included
  Eigen::VectorXd pressure;
  double multiplier = 0.0;
  SolveReport report;
};

inline WgSolution solve_system(const SaddleSystem& sys, const WgDofMap& dm,
                               const Eigen::VectorXd& bvals,
                               SolverKind kind = SolverKind::Direct,
                               double tol = 1e-12, int max_iter = 0) {
  ReducedSystem red = reduce_system(sys, dm, bvals);
  const int nF = red.n_free, nP = red.n_pressure;

  WgSolution sol;
  sol.report.n_unknowns = nF + nP + 1;
  sol.report.nnz = red.K.nonZeros();

  Eigen::VectorXd x;
  auto t0 = std::chrono::steady_clock::now();
  if (kind == SolverKind::Direct) {
    Eigen::SparseLU<SparseMat> lu;
    lu.compute(red.K);
    if (lu.info() != Eigen::Success) {
      sol.report.message = "sparse LU factorization failed";
      return sol;
    }
    x = lu.solve(red.rhs);
    sol.report.iterations = 1;
  } else {
    Eigen::MINRES<SparseMat, Eigen::Lower | Eigen::Upper,
                  Eigen::IdentityPreconditioner>
        minres;
    minres.setTolerance(tol);
    if (max_iter > 0) minres.setMaxIterations(max_iter);
    minres.compute(red.K);
    x = minres.solve(red.rhs);
    sol.report.iterations = static_cast<int>(minres.iterations());
    if (minres.info() != Eigen::Success) {
      sol.report.message = "MINRES did not converge";
      return sol;
    }
  }
  sol.report.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  double bnorm = red.rhs.norm();
  sol.report.rel_residual = (red.K * x - red.rhs).norm() / (bnorm > 0.0 ? bnorm : 1.0);

  sol.velocity = bvals;
  for (int k = 0; k < nF; ++k) sol.velocity(dm.free_dofs[k]) = x(k);
  sol.pressure = x.segment(nF, nP);
  sol.multiplier = x(nF + nP);

  // certificates on the full system
  Eigen::VectorXd rm = sys.F - sys.A * sol.velocity -
                       sys.B.transpose() * sol.pressure;
  double mom2 = 0.0;
  for (int i : dm.free_dofs) mom2 += rm(i) * rm(i);
  sol.report.momentum_residual = std::sqrt(mom2);
  sol.report.mass_residual =
      (sys.G - sys.B * sol.velocity - sol.multiplier * sys.mean_weights).norm();
  sol.report.mean_residual = sys.mean_weights.dot(sol.pressure);
  sol.report.success = true;
  return sol;
}

}  // namespace wgds
