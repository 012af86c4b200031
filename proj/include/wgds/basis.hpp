#pragma once

// Local polynomial bases.  Cells use scaled monomials
//   ((x-xc)/h)^a ((y-yc)/h)^b,  a+b <= deg,
// ordered by total degree, x-power descending within a degree:
//   1, X, Y, X^2, XY, Y^2, ...
// Edges use Legendre polynomials in the normalized arclength parameter
// xi in [-1,1] about the edge midpoint, so the edge mass matrix is diagonal.

#include <Eigen/Dense>

#include "wgds/quadrature.hpp"

namespace wgds {

inline int poly_dim(int deg) { return (deg + 1) * (deg + 2) / 2; }

struct CellBasis {
  Eigen::Vector2d center;
  double h = 1.0;
  int deg = 1;

  int size() const { return poly_dim(deg); }

  // values at points: (size x npts)
  Eigen::MatrixXd eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    int np = static_cast<int>(x.size());
    Eigen::VectorXd X = (x.array() - center.x()) / h;
    Eigen::VectorXd Y = (y.array() - center.y()) / h;
    Eigen::MatrixXd val(size(), np);
    int row = 0;
    for (int d = 0; d <= deg; ++d)
      for (int k = 0; k <= d; ++k, ++row)
        val.row(row) = X.array().pow(d - k) * Y.array().pow(k);
    return val;
  }

  // physical-space gradients at points
  void eval_grad(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                 Eigen::MatrixXd& gx, Eigen::MatrixXd& gy) const {
    int np = static_cast<int>(x.size());
    Eigen::VectorXd X = (x.array() - center.x()) / h;
    Eigen::VectorXd Y = (y.array() - center.y()) / h;
    gx.resize(size(), np);
    gy.resize(size(), np);
    int row = 0;
    for (int d = 0; d <= deg; ++d)
      for (int k = 0; k <= d; ++k, ++row) {
        int a = d - k, b = k;
        if (a > 0)
          gx.row(row) = (a / h) * (X.array().pow(a - 1) * Y.array().pow(b));
        else
          gx.row(row).setZero();
        if (b > 0)
          gy.row(row) = (b / h) * (X.array().pow(a) * Y.array().pow(b - 1));
        else
          gy.row(row).setZero();
      }
  }
};

struct EdgeBasis {
  int deg = 1;
  double len = 1.0;

  int size() const { return deg + 1; }

  // Legendre values at normalized parameters xi in [-1,1]: (size x npts)
  static Eigen::MatrixXd eval(const Eigen::VectorXd& xi, int deg) {
    int np = static_cast<int>(xi.size());
    Eigen::MatrixXd val(deg + 1, np);
    val.row(0).setOnes();
    if (deg >= 1) val.row(1) = xi.transpose();
    for (int k = 2; k <= deg; ++k)
      val.row(k) = ((2.0 * k - 1.0) * xi.transpose().array() * val.row(k - 1).array() -
                    (k - 1.0) * val.row(k - 2).array()) /
                   static_cast<double>(k);
    return val;
  }

  Eigen::MatrixXd eval(const Eigen::VectorXd& xi) const { return eval(xi, deg); }

  // diagonal mass matrix: int_e P_j P_k ds = len/(2k+1) delta_jk
  Eigen::MatrixXd mass() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size(), size());
    for (int k = 0; k <= deg; ++k) m(k, k) = len / (2.0 * k + 1.0);
    return m;
  }
};

inline Eigen::MatrixXd mass_matrix(const CellBasis& basis, const QuadRule& rule) {
  Eigen::MatrixXd val = basis.eval(rule.x, rule.y);
  return val * rule.w.asDiagonal() * val.transpose();
}

}  // namespace wgds
