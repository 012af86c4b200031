#pragma once

// Gauss-Legendre quadrature on segments, axis-aligned rectangles and general
// polygons.  Rectangles get tensor rules; other polygons are fanned into
// triangles around the centroid and each triangle gets a collapsed tensor
// rule.  Rules are constructed for a requested polynomial exactness.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wgds {

struct QuadRule {
  Eigen::VectorXd x, y, w;
  int size() const { return static_cast<int>(w.size()); }
};

struct EdgeQuadRule {
  Eigen::VectorXd x, y, w;
  Eigen::VectorXd xi;  // normalized parameter in [-1,1] along the edge
  int size() const { return static_cast<int>(w.size()); }
};

// Nodes and weights on [-1,1] via the Golub-Welsch eigenvalue method.
inline void gauss_legendre(int npts, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  if (npts < 1) throw std::invalid_argument("gauss_legendre: npts >= 1");
  if (npts == 1) {
    x = Eigen::VectorXd::Zero(1);
    w = Eigen::VectorXd::Constant(1, 2.0);
    return;
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(npts, npts);
  for (int k = 1; k < npts; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x = es.eigenvalues();
  w.resize(npts);
  for (int k = 0; k < npts; ++k)
    w(k) = 2.0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
}

inline int gauss_npts(int exactness) { return exactness / 2 + 1; }

inline EdgeQuadRule edge_rule(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                              int exactness) {
  Eigen::VectorXd gx, gw;
  gauss_legendre(gauss_npts(exactness), gx, gw);
  int m = gx.size();
  EdgeQuadRule r;
  r.x.resize(m);
  r.y.resize(m);
  r.w.resize(m);
  r.xi = gx;
  Eigen::Vector2d mid = 0.5 * (p0 + p1), half = 0.5 * (p1 - p0);
  double len = (p1 - p0).norm();
  for (int q = 0; q < m; ++q) {
    r.x(q) = mid.x() + gx(q) * half.x();
    r.y(q) = mid.y() + gx(q) * half.y();
    r.w(q) = 0.5 * len * gw(q);
  }
  return r;
}

inline QuadRule rect_rule(double x0, double x1, double y0, double y1, int exactness) {
  Eigen::VectorXd gx, gw;
  gauss_legendre(gauss_npts(exactness), gx, gw);
  int m = gx.size();
  QuadRule r;
  r.x.resize(m * m);
  r.y.resize(m * m);
  r.w.resize(m * m);
  double xm = 0.5 * (x0 + x1), xr = 0.5 * (x1 - x0);
  double ym = 0.5 * (y0 + y1), yr = 0.5 * (y1 - y0);
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j, ++k) {
      r.x(k) = xm + xr * gx(i);
      r.y(k) = ym + yr * gx(j);
      r.w(k) = xr * yr * gw(i) * gw(j);
    }
  return r;
}

// Collapsed tensor rule on the triangle (a,b,c):
//   P(u,v) = a + u(b-a) + uv(c-b),  |J| = 2|T| u,  (u,v) in [0,1]^2.
// A degree-d integrand becomes degree d+1 in u and d in v.
inline QuadRule triangle_rule(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                              const Eigen::Vector2d& c, int exactness) {
  Eigen::VectorXd ux, uw, vx, vw;
  gauss_legendre(gauss_npts(exactness + 1), ux, uw);
  gauss_legendre(gauss_npts(exactness), vx, vw);
  double area2 = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
  int mu = ux.size(), mv = vx.size();
  QuadRule r;
  r.x.resize(mu * mv);
  r.y.resize(mu * mv);
  r.w.resize(mu * mv);
  int k = 0;
  for (int i = 0; i < mu; ++i) {
    double u = 0.5 * (ux(i) + 1.0);
    for (int j = 0; j < mv; ++j, ++k) {
      double v = 0.5 * (vx(j) + 1.0);
      Eigen::Vector2d p = a + u * (b - a) + u * v * (c - b);
      r.x(k) = p.x();
      r.y(k) = p.y();
      r.w(k) = std::abs(area2) * u * 0.25 * uw(i) * vw(j);
    }
  }
  return r;
}

inline bool is_axis_aligned_rect(const std::vector<Eigen::Vector2d>& v, double tol) {
  if (v.size() != 4) return false;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector2d d = v[(k + 1) % 4] - v[k];
    if (std::abs(d.x()) > tol && std::abs(d.y()) > tol) return false;
  }
  return true;
}

inline QuadRule polygon_rule(const std::vector<Eigen::Vector2d>& verts, int exactness) {
  if (verts.size() < 3) throw std::invalid_argument("polygon_rule: need >= 3 vertices");
  double scale = 0.0;
  for (const auto& p : verts) scale = std::max(scale, p.norm());
  if (is_axis_aligned_rect(verts, 1e-12 * std::max(scale, 1.0))) {
    double x0 = verts[0].x(), x1 = verts[0].x(), y0 = verts[0].y(), y1 = verts[0].y();
    for (const auto& p : verts) {
      x0 = std::min(x0, p.x());
      x1 = std::max(x1, p.x());
      y0 = std::min(y0, p.y());
      y1 = std::max(y1, p.y());
    }
    return rect_rule(x0, x1, y0, y1, exactness);
  }
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& p : verts) c += p;
  c /= static_cast<double>(verts.size());
  QuadRule r;
  std::vector<QuadRule> parts;
  int total = 0;
  for (std::size_t k = 0; k < verts.size(); ++k) {
    parts.push_back(triangle_rule(c, verts[k], verts[(k + 1) % verts.size()], exactness));
    total += parts.back().size();
  }
  r.x.resize(total);
  r.y.resize(total);
  r.w.resize(total);
  int at = 0;
  for (const auto& part : parts) {
    r.x.segment(at, part.size()) = part.x;
    r.y.segment(at, part.size()) = part.y;
    r.w.segment(at, part.size()) = part.w;
    at += part.size();
  }
  return r;
}

}  // namespace wgds
