#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wgds/solver.hpp"

using namespace wgds;

namespace {

VectorField zero_vec() {
  return [](double, double, Region) { return Eigen::Vector2d::Zero(); };
}
ScalarField zero_sca() {
  return [](double, double, Region) { return 0.0; };
}

// Piecewise-linear exact solution of the coupled problem with zero pressure:
//   Stokes: u = (2y+2, 1), Darcy: u = (0, 1), p = 0,
//   f = 0 in the free-flow region, f = (0,1) in the porous region, g = 0.
// Normal flux is continuous across y = 0, the shear of u balances the slip
// term exactly, and both divergences vanish, so the discrete solution must
// reproduce the interior and trace projections of u to solver precision.
VectorField piecewise_exact() {
  return [](double, double y, Region r) {
    return r == Region::Stokes ? Eigen::Vector2d(2.0 * y + 2.0, 1.0)
                               : Eigen::Vector2d(0.0, 1.0);
  };
}
VectorField piecewise_forcing() {
  return [](double, double, Region r) {
    return r == Region::Stokes ? Eigen::Vector2d(0.0, 0.0) : Eigen::Vector2d(0.0, 1.0);
  };
}

}  // namespace

TEST_CASE("zero data produces the zero solution") {
  for (int n : {1, 2, 4}) {
    PolyMesh mesh = build_rect_mesh(n);
    WgDofMap dm = WgDofMap::build(mesh, WgParams{});
    SaddleSystem sys = assemble_system(dm, zero_vec(), zero_sca());
    Eigen::VectorXd bvals = Eigen::VectorXd::Zero(dm.n_velocity);
    WgSolution sol = solve_system(sys, dm, bvals);
    REQUIRE(sol.report.success);
    INFO("n=" << n);
    REQUIRE(sol.velocity.cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(sol.pressure.cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(std::abs(sol.multiplier) < 1e-12);
  }
}

TEST_CASE("a piecewise-linear exact solution is reproduced through the projections") {
  for (int n : {2, 4}) {
    PolyMesh mesh = build_rect_mesh(n);
    WgDofMap dm = WgDofMap::build(mesh, WgParams{});
    SaddleSystem sys = assemble_system(dm, piecewise_forcing(), zero_sca());
    Eigen::VectorXd bvals = boundary_values(dm, piecewise_exact(), BcMode::Projection);
    WgSolution sol = solve_system(sys, dm, bvals);
    REQUIRE(sol.report.success);

    Eigen::VectorXd qhu = project_velocity(dm, piecewise_exact());
    INFO("n=" << n);
    REQUIRE((sol.velocity - qhu).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE(sol.pressure.cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE(std::abs(sol.multiplier) < 1e-10);
  }
}

TEST_CASE("solver certificates bound the true residuals") {
  PolyMesh mesh = build_rect_mesh(2);
  WgDofMap dm = WgDofMap::build(mesh, WgParams{});
  SaddleSystem sys = assemble_system(dm, piecewise_forcing(), zero_sca());
  Eigen::VectorXd bvals = boundary_values(dm, piecewise_exact(), BcMode::Nodal);
  WgSolution sol = solve_system(sys, dm, bvals);
  REQUIRE(sol.report.success);
  REQUIRE(sol.report.rel_residual < 1e-10);
  REQUIRE(sol.report.momentum_residual < 1e-9);
  REQUIRE(sol.report.mass_residual < 1e-9);
  REQUIRE(std::abs(sol.report.mean_residual) < 1e-9);
  REQUIRE(sol.report.n_unknowns ==
          static_cast<int>(dm.free_dofs.size()) + dm.n_pressure + 1);
}

TEST_CASE("direct and iterative solves agree") {
  PolyMesh mesh = build_rect_mesh(2);
  WgDofMap dm = WgDofMap::build(mesh, WgParams{});
  SaddleSystem sys = assemble_system(dm, piecewise_forcing(), zero_sca());
  Eigen::VectorXd bvals = boundary_values(dm, piecewise_exact(), BcMode::Projection);
  WgSolution direct = solve_system(sys, dm, bvals, SolverKind::Direct);
  WgSolution minres = solve_system(sys, dm, bvals, SolverKind::Minres, 1e-13, 20000);
  REQUIRE(direct.report.success);
  REQUIRE(minres.report.success);
  REQUIRE(minres.report.iterations > 1);
  REQUIRE((direct.velocity - minres.velocity).cwiseAbs().maxCoeff() < 1e-8);
  REQUIRE((direct.pressure - minres.pressure).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("an exhausted iteration budget is reported as failure") {
  PolyMesh mesh = build_rect_mesh(2);
  WgDofMap dm = WgDofMap::build(mesh, WgParams{});
  SaddleSystem sys = assemble_system(dm, piecewise_forcing(), zero_sca());
  Eigen::VectorXd bvals = boundary_values(dm, piecewise_exact(), BcMode::Projection);
  WgSolution sol = solve_system(sys, dm, bvals, SolverKind::Minres, 1e-16, 1);
  REQUIRE_FALSE(sol.report.success);
  REQUIRE_FALSE(sol.report.message.empty());
}
