#pragma once

// Discretization parameters for the coupled Darcy-Stokes WG method and the
// admissibility checks tying the polynomial degrees together.

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace wgds {

struct WgParams {
  // polynomial degrees: cell interiors (alpha), edge traces (beta),
  // pressures (gamma), per region
  int alpha_s = 1;
  int alpha_d = 1;
  int beta = 1;
  int gamma_s = 0;
  int gamma_d = 0;

  // material data
  double nu = 1.0;                              // Stokes viscosity
  double mu = 1.0;                              // interface slip coefficient
  Eigen::Matrix2d kappa = Eigen::Matrix2d::Identity();  // Darcy permeability

  // stabilization weights
  double rho_s = 1.0;
  double rho_d = 1.0;

  // quadrature exactness override; 0 picks the defaults below
  int quad_exactness = 0;

  int cell_exactness() const {
    if (quad_exactness > 0) return quad_exactness;
    return std::max(2 * std::max(alpha_s, beta) + 2, 8);
  }
  int edge_exactness() const {
    if (quad_exactness > 0) return quad_exactness;
    return std::max(2 * beta + 4, 8);
  }

  // Every violated admissibility constraint, in a fixed order.
  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    auto need = [&](bool ok, const char* what) {
      if (!ok) out.push_back(what);
    };
    need(beta >= 0, "beta >= 0");
    need(gamma_s >= 0 && gamma_d >= 0, "gamma_s, gamma_d >= 0");
    need(gamma_s >= beta - 1, "beta - 1 <= gamma_s");
    need(gamma_s <= beta, "gamma_s <= beta");
    need(alpha_s >= beta, "beta <= alpha_s");
    need(alpha_s <= beta + 1, "alpha_s <= beta + 1");
    need(alpha_s <= gamma_s + 1, "alpha_s <= gamma_s + 1");
    need(gamma_d >= beta - 1, "beta - 1 <= gamma_d");
    need(gamma_d <= beta, "gamma_d <= beta");
    need(alpha_d == beta, "alpha_d == beta");
    need(nu > 0.0, "nu > 0");
    need(mu > 0.0, "mu > 0");
    need(rho_s > 0.0 && rho_d > 0.0, "rho_s, rho_d > 0");
    if ((kappa - kappa.transpose()).norm() > 1e-14 * kappa.norm()) {
      out.push_back("kappa symmetric");
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(kappa);
      need(es.eigenvalues().minCoeff() > 0.0, "kappa positive definite");
    }
    return out;
  }

  // Throws std::invalid_argument listing every violated constraint.
  void validate() const {
    std::vector<std::string> bad = violations();
    if (bad.empty()) return;
    std::string msg = "invalid WG parameters: ";
    for (std::size_t i = 0; i < bad.size(); ++i) {
      if (i) msg += "; ";
      msg += bad[i];
    }
    throw std::invalid_argument(msg);
  }

  // kappa^{-1} and kappa^{-1/2} through the spectral decomposition
  Eigen::Matrix2d kappa_inv() const {
    return kappa.inverse();
  }
  Eigen::Matrix2d kappa_inv_sqrt() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(kappa);
    Eigen::Vector2d d = es.eigenvalues();
    Eigen::Matrix2d V = es.eigenvectors();
    Eigen::Matrix2d r = Eigen::Matrix2d::Zero();
    r(0, 0) = 1.0 / std::sqrt(d(0));
    r(1, 1) = 1.0 / std::sqrt(d(1));
    return V * r * V.transpose();
  }
};

}  // namespace wgds
