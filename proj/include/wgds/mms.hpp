#pragma once

// Manufactured solution on Omega_S = (0,pi)x(0,1), Omega_D = (0,pi)x(-1,0)
// with the interface at y = 0, for nu = 1, kappa = I, mu = 1:
//
//   Stokes:  u = ( v'(y) cos x, v(y) sin x ),  v(y) = sin^2(pi y)/pi^2 - 2,
//            p = sin x sin y
//   Darcy:   p = (e^y - e^-y) sin x,  u = -grad p
//
// The velocity is divergence-free in both regions, the Darcy field needs no
// forcing, and every interface condition (normal-velocity continuity, normal
// stress balance against the Darcy pressure, and the tangential slip law)
// holds along y = 0.  Closed-form forcing is derived from the momentum
// equations.
//
// Also here: the lowest-order interpolants used to measure errors (P1 corner
// interpolation of the velocity, centroid values of the mean-free pressure),
// the five-column error report, the convergence-study driver, and the
// residual diagnostics that feed the consistency checks.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "wgds/assembly.hpp"
#include "wgds/mesh.hpp"
#include "wgds/solver.hpp"
#include "wgds/space.hpp"
#include "wgds/weakops.hpp"

namespace wgds {

struct ManufacturedSolution {
  // profile v(y) and its derivatives
  static double prof(double y) {
    double s = std::sin(std::numbers::pi * y);
    return s * s / (std::numbers::pi * std::numbers::pi) - 2.0;
  }
  static double prof1(double y) { return std::sin(2.0 * std::numbers::pi * y) / std::numbers::pi; }
  static double prof2(double y) { return 2.0 * std::cos(2.0 * std::numbers::pi * y); }
  static double prof3(double y) {
    return -4.0 * std::numbers::pi * std::sin(2.0 * std::numbers::pi * y);
  }

  Eigen::Vector2d velocity(double x, double y, Region r) const {
    if (r == Region::Stokes)
      return {prof1(y) * std::cos(x), prof(y) * std::sin(x)};
    return {-(std::exp(y) - std::exp(-y)) * std::cos(x),
            -(std::exp(y) + std::exp(-y)) * std::sin(x)};
  }

  Eigen::Matrix2d velocity_gradient(double x, double y, Region r) const {
    Eigen::Matrix2d g;
    if (r == Region::Stokes) {
      g(0, 0) = -prof1(y) * std::sin(x);
      g(0, 1) = prof2(y) * std::cos(x);
      g(1, 0) = prof(y) * std::cos(x);
      g(1, 1) = prof1(y) * std::sin(x);
    } else {
      g(0, 0) = (std::exp(y) - std::exp(-y)) * std::sin(x);
      g(0, 1) = -(std::exp(y) + std::exp(-y)) * std::cos(x);
      g(1, 0) = -(std::exp(y) + std::exp(-y)) * std::cos(x);
      g(1, 1) = -(std::exp(y) - std::exp(-y)) * std::sin(x);
    }
    return g;
  }

  double pressure(double x, double y, Region r) const {
    if (r == Region::Stokes) return std::sin(x) * std::sin(y);
    return (std::exp(y) - std::exp(-y)) * std::sin(x);
  }

  Eigen::Vector2d pressure_gradient(double x, double y, Region r) const {
    if (r == Region::Stokes)
      return {std::cos(x) * std::sin(y), std::sin(x) * std::cos(y)};
    return {(std::exp(y) - std::exp(-y)) * std::cos(x),
            (std::exp(y) + std::exp(-y)) * std::sin(x)};
  }

  // mean of p over the whole domain, divided out when measuring errors:
  // int p = 2 (3 - cos 1 - e - 1/e)
  double pressure_mean() const {
    return 2.0 * (3.0 - std::cos(1.0) - std::numbers::e - 1.0 / std::numbers::e) /
           (2.0 * std::numbers::pi);
  }

  // momentum forcing; the Darcy side needs none since u = -grad p there
  Eigen::Vector2d forcing(double x, double y, Region r) const {
    if (r == Region::Darcy) return Eigen::Vector2d::Zero();
    double fx = (prof1(y) - prof3(y)) * std::cos(x) + std::cos(x) * std::sin(y);
    double fy = (prof(y) - prof2(y)) * std::sin(x) + std::sin(x) * std::cos(y);
    return {fx, fy};
  }

  double divergence(double, double, Region) const { return 0.0; }

  VectorField velocity_field() const {
    return [this](double x, double y, Region r) { return velocity(x, y, r); };
  }
  VectorField forcing_field() const {
    return [this](double x, double y, Region r) { return forcing(x, y, r); };
  }
  ScalarField divergence_field() const {
    return [](double, double, Region) { return 0.0; };
  }
  ScalarField shifted_pressure_field() const {
    double mean = pressure_mean();
    return [this, mean](double x, double y, Region r) { return pressure(x, y, r) - mean; };
  }

  // This solution is derived for unit material coefficients.
  void require_unit_coefficients(const WgParams& par) const {
    bool ok = par.nu == 1.0 && par.mu == 1.0 &&
              (par.kappa - Eigen::Matrix2d::Identity()).norm() == 0.0;
    if (!ok)
      throw std::invalid_argument(
          "manufactured solution requires nu = 1, mu = 1, kappa = I");
  }
};

//// interpolants ////////////////////////////////////////////////////////////

namespace detail {

// lower-left, lower-right and upper-left corners of an axis-aligned
// rectangular cell
inline std::array<Eigen::Vector2d, 3> rect_corners(const PolyMesh& mesh, int c) {
  auto verts = mesh.cell_vertices(c);
  if (!is_axis_aligned_rect(verts, 1e-12 * mesh.scale()))
    throw std::invalid_argument("interpolant: cell is not an axis-aligned rectangle");
  double x0 = verts[0].x(), x1 = x0, y0 = verts[0].y(), y1 = y0;
  for (const auto& p : verts) {
    x0 = std::min(x0, p.x());
    x1 = std::max(x1, p.x());
    y0 = std::min(y0, p.y());
    y1 = std::max(y1, p.y());
  }
  return {Eigen::Vector2d(x0, y0), Eigen::Vector2d(x1, y0), Eigen::Vector2d(x0, y1)};
}

}  // namespace detail

// P1 interpolation of the velocity: cell values match the field at the
// lower-left, lower-right and upper-left corners; edge values match at the
// edge endpoints.  Lowest-order configuration only.
inline Eigen::VectorXd nodal_velocity_interpolant(const WgDofMap& dm, const VectorField& f) {
  if (dm.par.alpha_s != 1 || dm.par.alpha_d != 1 || dm.par.beta != 1)
    throw std::invalid_argument(
        "nodal_velocity_interpolant: requires alpha_s = alpha_d = beta = 1");
  const PolyMesh& mesh = *dm.mesh;
  Eigen::VectorXd u(dm.n_velocity);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    auto [ll, lr, ul] = detail::rect_corners(mesh, c);
    Region r = mesh.cells[c].region;
    Eigen::Vector2d fll = f(ll.x(), ll.y(), r);
    Eigen::Vector2d flr = f(lr.x(), lr.y(), r);
    Eigen::Vector2d ful = f(ul.x(), ul.y(), r);
    double dx = lr.x() - ll.x(), dy = ul.y() - ll.y();
    const MeshCell& cell = mesh.cells[c];
    for (int i = 0; i < 2; ++i) {
      double sx = (flr(i) - fll(i)) / dx;
      double sy = (ful(i) - fll(i)) / dy;
      // coefficients in the scaled basis [1, X, Y]
      u(dm.cell_offset[c] + 3 * i) = fll(i) + sx * (cell.centroid.x() - ll.x()) +
                                     sy * (cell.centroid.y() - ll.y());
      u(dm.cell_offset[c] + 3 * i + 1) = sx * cell.h;
      u(dm.cell_offset[c] + 3 * i + 2) = sy * cell.h;
    }
  }
  for (int e = 0; e < mesh.n_edges(); ++e)
    u.segment(dm.edge_offset[e], dm.edge_ndof(e)) = nodal_edge_trace(dm, e, f);
  return u;
}

// Piecewise-constant interpolation of a pressure field at cell centroids.
inline Eigen::VectorXd centroid_pressure_interpolant(const WgDofMap& dm,
                                                     const ScalarField& f) {
  if (dm.par.gamma_s != 0 || dm.par.gamma_d != 0)
    throw std::invalid_argument(
        "centroid_pressure_interpolant: requires gamma_s = gamma_d = 0");
  const PolyMesh& mesh = *dm.mesh;
  Eigen::VectorXd p(dm.n_pressure);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const MeshCell& cell = mesh.cells[c];
    p(dm.pres_offset[c]) = f(cell.centroid.x(), cell.centroid.y(), cell.region);
  }
  return p;
}

//// error norms /////////////////////////////////////////////////////////////

enum class ErrorMode {
  Interpolant,  // compare against the nodal/centroid interpolants
  Projection,   // compare against Q_h / the mean-free pressure projection
};

struct ErrorNorms {
  double strain_s = 0.0;  // weak strain seminorm of the velocity error, Stokes side
  double l2_s = 0.0;      // interior L2 velocity error, Stokes side
  double p_s = 0.0;       // pressure L2 error, Stokes side
  double l2_d = 0.0;      // interior L2 velocity error, Darcy side
  double p_d = 0.0;       // pressure L2 error, Darcy side
  double grad_s = 0.0;    // full weak-gradient seminorm, diagnostic

  std::array<double, 5> columns() const { return {strain_s, l2_s, p_s, l2_d, p_d}; }
};

inline ErrorNorms error_norms(const WgDofMap& dm, const Eigen::VectorXd& velocity,
                              const Eigen::VectorXd& pressure,
                              const ManufacturedSolution& exact, ErrorMode mode) {
  const PolyMesh& mesh = *dm.mesh;
  Eigen::VectorXd uref, pref;
  if (mode == ErrorMode::Interpolant) {
    uref = nodal_velocity_interpolant(dm, exact.velocity_field());
    pref = centroid_pressure_interpolant(dm, exact.shifted_pressure_field());
  } else {
    uref = project_velocity(dm, exact.velocity_field());
    pref = project_pressure(dm, exact.shifted_pressure_field());
  }
  Eigen::VectorXd eu = uref - velocity;
  Eigen::VectorXd ep = pref - pressure;

  ErrorNorms out;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    CellOps ops = build_cell_ops(dm, c);
    Eigen::VectorXd local(ops.nloc);
    for (int k = 0; k < ops.nloc; ++k) local(k) = eu(ops.dofs[k]);
    int na = ops.nb_alpha;
    double l2 = 0.0;
    for (int i = 0; i < 2; ++i) {
      Eigen::VectorXd ci = local.segment(i * na, na);
      l2 += ci.dot(ops.mass_alpha * ci);
    }
    // pressure error through the P_gamma mass matrix
    QuadRule rule = polygon_rule(mesh.cell_vertices(c), dm.par.cell_exactness());
    Eigen::MatrixXd vp = dm.pressure_basis(c).eval(rule.x, rule.y);
    Eigen::MatrixXd mp = vp * rule.w.asDiagonal() * vp.transpose();
    Eigen::VectorXd cp = ep.segment(dm.pres_offset[c], dm.pres_nb(c));
    double perr = cp.dot(mp * cp);

    if (ops.stokes) {
      out.l2_s += l2;
      out.p_s += perr;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          Eigen::VectorXd gij = ops.grad[2 * i + j] * local;
          Eigen::VectorXd dij = 0.5 * (gij + ops.grad[2 * j + i] * local);
          out.grad_s += gij.dot(ops.mass_beta * gij);
          out.strain_s += dij.dot(ops.mass_beta * dij);
        }
    } else {
      out.l2_d += l2;
      out.p_d += perr;
    }
  }
  out.strain_s = std::sqrt(out.strain_s);
  out.grad_s = std::sqrt(out.grad_s);
  out.l2_s = std::sqrt(out.l2_s);
  out.p_s = std::sqrt(out.p_s);
  out.l2_d = std::sqrt(out.l2_d);
  out.p_d = std::sqrt(out.p_d);
  return out;
}

// The discrete velocity norm evaluated termwise from its definition (not via
// the assembled norm matrix): viscous strain energy, both stabilizations,
// the Darcy mass, the weak-divergence energy and the interface slip energy.
inline double discrete_norm(const WgDofMap& dm, const Eigen::VectorXd& velocity) {
  const PolyMesh& mesh = *dm.mesh;
  const WgParams& par = dm.par;
  double total = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    CellOps ops = build_cell_ops(dm, c);
    Eigen::VectorXd local(ops.nloc);
    for (int k = 0; k < ops.nloc; ++k) local(k) = velocity(ops.dofs[k]);
    Eigen::VectorXd dv = ops.div * local;
    total += dv.dot(ops.mass_beta * dv);
    if (ops.stokes) {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          Eigen::VectorXd dij =
              0.5 * (ops.grad[2 * i + j] * local + ops.grad[2 * j + i] * local);
          total += 2.0 * par.nu * dij.dot(ops.mass_beta * dij);
        }
      for (const auto& term : ops.eterms)
        for (int i = 0; i < 2; ++i) {
          Eigen::VectorXd jc = term.jump[i] * local;
          total += par.rho_s * ops.stab_weight * jc.dot(term.emass * jc);
        }
    } else {
      Eigen::Matrix2d kinv = par.kappa_inv();
      int na = ops.nb_alpha;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          total += kinv(i, j) * local.segment(i * na, na)
                       .dot(ops.mass_alpha * local.segment(j * na, na));
      for (const auto& term : ops.eterms) {
        Eigen::VectorXd jc = term.njump * local;
        total += par.rho_d * ops.stab_weight * jc.dot(term.emass * jc);
      }
    }
  }
  int ne = par.beta + 1;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const MeshEdge& edge = mesh.edges[e];
    if (edge.type != EdgeType::Interface) continue;
    Eigen::Vector2d t(-edge.normal.y(), edge.normal.x());
    double w = par.mu * t.dot(par.kappa_inv_sqrt() * t);
    Eigen::MatrixXd emass = dm.edge_basis(e).mass();
    Eigen::VectorXd tb = t(0) * velocity.segment(dm.edge_offset[e], ne) +
                         t(1) * velocity.segment(dm.edge_offset[e] + ne, ne);
    total += w * tb.dot(emass * tb);
  }
  return std::sqrt(total);
}

//// convergence study ///////////////////////////////////////////////////////

struct StudyOptions {
  BcMode bc = BcMode::Nodal;
  ErrorMode error = ErrorMode::Interpolant;
  SolverKind solver = SolverKind::Direct;
  double tol = 1e-12;
  int max_iter = 0;
  int threads = 1;
};

struct StudyRow {
  int n = 0;
  double h = 0.0;  // cell size pi/n
  ErrorNorms errors;
  SolveReport report;
};

struct ConvergenceStudy {
  std::vector<StudyRow> rows;
  std::array<double, 5> rates_ls{};        // least-squares fit of log err vs log h
  std::array<double, 5> rates_pairwise{};  // mean of successive-refinement rates
};

inline WgSolution solve_manufactured(const PolyMesh& mesh, const WgParams& par,
                                     const ManufacturedSolution& exact,
                                     const StudyOptions& opt) {
  exact.require_unit_coefficients(par);
  WgDofMap dm = WgDofMap::build(mesh, par);
  SaddleSystem sys =
      assemble_system(dm, exact.forcing_field(), exact.divergence_field(), opt.threads);
  Eigen::VectorXd bv = boundary_values(dm, exact.velocity_field(), opt.bc);
  return solve_system(sys, dm, bv, opt.solver, opt.tol, opt.max_iter);
}

inline ConvergenceStudy convergence_study(const std::vector<int>& ns, WgParams par,
                                          const StudyOptions& opt = {}) {
  par.validate();
  ManufacturedSolution exact;
  exact.require_unit_coefficients(par);
  ConvergenceStudy study;
  for (int n : ns) {
    PolyMesh mesh = build_rect_mesh(n);
    WgDofMap dm = WgDofMap::build(mesh, par);
    WgSolution sol = solve_manufactured(mesh, par, exact, opt);
    if (!sol.report.success)
      throw std::runtime_error("convergence_study: solve failed at n = " +
                               std::to_string(n) + ": " + sol.report.message);
    StudyRow row;
    row.n = n;
    row.h = std::numbers::pi / n;
    row.errors = error_norms(dm, sol.velocity, sol.pressure, exact, opt.error);
    row.report = sol.report;
    study.rows.push_back(row);
  }

  // rate fits over all rows
  int m = static_cast<int>(study.rows.size());
  if (m >= 2) {
    for (int j = 0; j < 5; ++j) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      double pair = 0.0;
      for (int i = 0; i < m; ++i) {
        double lx = std::log(study.rows[i].h);
        double ly = std::log(study.rows[i].errors.columns()[j]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        if (i + 1 < m) {
          const auto& r0 = study.rows[i];
          const auto& r1 = study.rows[i + 1];
          pair += std::log(r0.errors.columns()[j] / r1.errors.columns()[j]) /
                  std::log(r0.h / r1.h);
        }
      }
      study.rates_ls[j] = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      study.rates_pairwise[j] = pair / (m - 1);
    }
  }
  return study;
}

//// residual diagnostics ////////////////////////////////////////////////////

// Consistency functionals of the error equation.  With e_u = Q_h u - u_h and
// e_p the mean-free pressure projection minus p_h, the discrete solution
// satisfies, for every admissible v vanishing on the outer boundary,
//
//   a_h(e_u, v) + b_h(v, e_p)
//     = s(Q_h u, v) + l_S(v) - l_D(v) - l_div(v) - l_I(v).
//
// Everything on the right involves only the exact solution and v.
struct ResidualIdentity {
  double lhs = 0.0, rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / scale
};

inline ResidualIdentity error_equation_residual(const WgDofMap& dm,
                                                const SaddleSystem& sys,
                                                const SparseMat& stab,
                                                const WgSolution& sol,
                                                const ManufacturedSolution& exact,
                                                const Eigen::VectorXd& v) {
  const PolyMesh& mesh = *dm.mesh;
  const WgParams& par = dm.par;
  Eigen::VectorXd qhu = project_velocity(dm, exact.velocity_field());
  Eigen::VectorXd qhp = project_pressure(dm, exact.shifted_pressure_field());
  Eigen::VectorXd eu = qhu - sol.velocity;
  Eigen::VectorXd ep = qhp - sol.pressure;

  double lhs = v.dot(sys.A * eu) + ep.dot(sys.B * v);
  double s_term = v.dot(stab * qhu);

  WgFunction vf{&dm, v};
  double l_s = 0.0, l_d = 0.0, l_div = 0.0, l_i = 0.0;
  PressureFunction qp{&dm, qhp};
  double pmean = exact.pressure_mean();

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const MeshCell& cell = mesh.cells[c];
    Region r = cell.region;
    bool stokes = (r == Region::Stokes);

    std::array<Eigen::VectorXd, 4> du_proj;
    CellBasis basis_b = dm.cell_basis(c, par.beta);
    if (stokes)
      du_proj = project_cell_tensor(dm, c, [&](double x, double y, Region rr) {
        Eigen::Matrix2d g = exact.velocity_gradient(x, y, rr);
        return Eigen::Matrix2d(0.5 * (g + g.transpose()));
      });

    if (!stokes) {
      // l_D: (K^-1 (u - Q_0 u), v_0)
      QuadRule rule = polygon_rule(mesh.cell_vertices(c), par.cell_exactness());
      Eigen::MatrixXd v0 = vf.eval_interior(c, rule.x, rule.y);
      int na = dm.cell_nb(c);
      Eigen::MatrixXd va = dm.cell_basis(c).eval(rule.x, rule.y);
      Eigen::Matrix2d kinv = par.kappa_inv();
      Eigen::VectorXd q0u[2];
      for (int i = 0; i < 2; ++i)
        q0u[i] = qhu.segment(dm.cell_offset[c] + i * na, na);
      for (int q = 0; q < rule.size(); ++q) {
        Eigen::Vector2d u = exact.velocity(rule.x(q), rule.y(q), r);
        Eigen::Vector2d uh(q0u[0].dot(va.col(q)), q0u[1].dot(va.col(q)));
        l_d += rule.w(q) * (kinv * (u - uh)).dot(v0.col(q));
      }
    }

    for (std::size_t k = 0; k < cell.edges.size(); ++k) {
      int e = cell.edges[k];
      const MeshEdge& edge = mesh.edges[e];
      Eigen::Vector2d n_out = cell.outward[k] * edge.normal;
      EdgeQuadRule erule = edge_rule(mesh.vertices[edge.v0], mesh.vertices[edge.v1],
                                     std::max(par.edge_exactness(), 12));
      Eigen::MatrixXd v0e = vf.eval_interior(c, erule.x, erule.y);
      Eigen::MatrixXd vbe = vf.eval_edge(e, erule.xi);
      Eigen::MatrixXd bvals = basis_b.eval(erule.x, erule.y);
      Eigen::VectorXd qpe = qp.eval(c, erule.x, erule.y);
      for (int q = 0; q < erule.size(); ++q) {
        Eigen::Vector2d dv = v0e.col(q) - vbe.col(q);
        if (stokes) {
          // l_S: 2 nu <v0 - vb, (D(u) - Pi_h D(u)) n>
          Eigen::Matrix2d g = exact.velocity_gradient(erule.x(q), erule.y(q), Region::Stokes);
          Eigen::Matrix2d du = 0.5 * (g + g.transpose());
          Eigen::Matrix2d ph;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) ph(i, j) = du_proj[2 * i + j].dot(bvals.col(q));
          l_s += 2.0 * par.nu * erule.w(q) * dv.dot((du - ph) * n_out);
        }
        // l_div: <(v0 - vb).n, p - BQh p> with the mean-free exact pressure
        double pexc = exact.pressure(erule.x(q), erule.y(q), r) - pmean;
        l_div += erule.w(q) * dv.dot(n_out) * (pexc - qpe(q));
      }
    }
  }

  // l_I: <mu K^-1/2 (u_S - Q_b u_S).t, v_b.t> on the interface
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const MeshEdge& edge = mesh.edges[e];
    if (edge.type != EdgeType::Interface) continue;
    Eigen::Vector2d t(-edge.normal.y(), edge.normal.x());
    double w = par.mu * t.dot(par.kappa_inv_sqrt() * t);
    EdgeQuadRule erule = edge_rule(mesh.vertices[edge.v0], mesh.vertices[edge.v1],
                                   std::max(par.edge_exactness(), 12));
    Eigen::MatrixXd chi = EdgeBasis::eval(erule.xi, par.beta);
    int ne = par.beta + 1;
    Eigen::VectorXd qb[2] = {qhu.segment(dm.edge_offset[e], ne),
                             qhu.segment(dm.edge_offset[e] + ne, ne)};
    Eigen::MatrixXd vbe = vf.eval_edge(e, erule.xi);
    for (int q = 0; q < erule.size(); ++q) {
      Eigen::Vector2d us = exact.velocity(erule.x(q), erule.y(q), Region::Stokes);
      Eigen::Vector2d qbu(qb[0].dot(chi.col(q)), qb[1].dot(chi.col(q)));
      l_i += w * erule.w(q) * (us - qbu).dot(t) * vbe.col(q).dot(t);
    }
  }

  ResidualIdentity out;
  out.lhs = lhs;
  out.rhs = s_term + l_s - l_d - l_div - l_i;
  double scale = std::max({1.0, std::abs(out.lhs), std::abs(s_term), std::abs(l_s),
                           std::abs(l_d), std::abs(l_div), std::abs(l_i)});
  out.residual = std::abs(out.lhs - out.rhs) / scale;
  return out;
}

//// exact-data checks ///////////////////////////////////////////////////////

// Largest violation of the interface conditions along y = 0, sampled at
// equispaced interior points: normal-velocity continuity and the combined
// stress condition T(u,p) n + p_D n + mu K^-1/2 (u_S.t) t = 0.
struct InterfaceCheck {
  double normal_velocity = 0.0;
  double stress_condition = 0.0;
  double divergence = 0.0;  // max |div u| over interior samples of both regions
  double darcy_forcing = 0.0;
};

inline InterfaceCheck check_manufactured_data(const ManufacturedSolution& exact,
                                              int samples = 100) {
  InterfaceCheck chk;
  Eigen::Vector2d nhat(0.0, -1.0);  // Stokes -> Darcy
  Eigen::Vector2d that(-nhat.y(), nhat.x());
  for (int k = 0; k < samples; ++k) {
    double x = std::numbers::pi * (k + 0.5) / samples;
    Eigen::Vector2d us = exact.velocity(x, 0.0, Region::Stokes);
    Eigen::Vector2d ud = exact.velocity(x, 0.0, Region::Darcy);
    chk.normal_velocity = std::max(chk.normal_velocity,
                                   std::abs(us.dot(nhat) - ud.dot(nhat)));
    Eigen::Matrix2d g = exact.velocity_gradient(x, 0.0, Region::Stokes);
    Eigen::Matrix2d T = (g + g.transpose()) - exact.pressure(x, 0.0, Region::Stokes) *
                                                  Eigen::Matrix2d::Identity();
    Eigen::Vector2d resid = T * nhat + exact.pressure(x, 0.0, Region::Darcy) * nhat +
                            us.dot(that) * that;
    chk.stress_condition = std::max(chk.stress_condition, resid.norm());

    for (Region r : {Region::Stokes, Region::Darcy}) {
      double y = (r == Region::Stokes ? 1.0 : -1.0) * (k + 0.5) / samples;
      Eigen::Matrix2d gr = exact.velocity_gradient(x, y, r);
      chk.divergence = std::max(chk.divergence, std::abs(gr(0, 0) + gr(1, 1)));
      if (r == Region::Darcy) {
        Eigen::Vector2d f = exact.velocity(x, y, r) + exact.pressure_gradient(x, y, r);
        chk.darcy_forcing = std::max(chk.darcy_forcing, f.norm());
      }
    }
  }
  return chk;
}

}  // namespace wgds
