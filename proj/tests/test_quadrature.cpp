#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "wgds/quadrature.hpp"

using namespace wgds;

namespace {

double integrate(const QuadRule& r, const std::function<double(double, double)>& f) {
  double s = 0.0;
  for (int q = 0; q < r.size(); ++q) s += r.w(q) * f(r.x(q), r.y(q));
  return s;
}

// Exact integral of x^a y^b over a polygon via Green's theorem:
//   int_P x^a y^b dA = 1/(a+1) oint x^(a+1) y^b dy,
// with each boundary segment integrated by a high-order Gauss rule.
double greens_monomial(const std::vector<Eigen::Vector2d>& verts, int a, int b) {
  double total = 0.0;
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const Eigen::Vector2d& p = verts[k];
    const Eigen::Vector2d& q = verts[(k + 1) % verts.size()];
    Eigen::VectorXd gx, gw;
    gauss_legendre(gauss_npts(2 * (a + b + 1)), gx, gw);
    double dy = 0.5 * (q.y() - p.y());
    for (int i = 0; i < gx.size(); ++i) {
      double x = 0.5 * (p.x() + q.x()) + 0.5 * gx(i) * (q.x() - p.x());
      double y = 0.5 * (p.y() + q.y()) + 0.5 * gx(i) * (q.y() - p.y());
      total += gw(i) * dy * std::pow(x, a + 1) * std::pow(y, b) / (a + 1);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("Gauss-Legendre nodes integrate 1D monomials to degree 2n-1") {
  for (int n = 1; n <= 8; ++n) {
    Eigen::VectorXd x, w;
    gauss_legendre(n, x, w);
    REQUIRE(w.sum() == Catch::Approx(2.0).epsilon(1e-14));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double got = 0.0;
      for (int q = 0; q < n; ++q) got += w(q) * std::pow(x(q), k);
      double want = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
      INFO("n=" << n << " k=" << k);
      REQUIRE(got == Catch::Approx(want).margin(1e-13));
    }
  }
}

TEST_CASE("gauss_npts covers the requested exactness") {
  for (int e = 0; e <= 20; ++e) REQUIRE(2 * gauss_npts(e) - 1 >= e);
}

TEST_CASE("edge rule integrates along a slanted segment") {
  Eigen::Vector2d p0(1.0, 2.0), p1(4.0, 6.0);  // length 5
  EdgeQuadRule r = edge_rule(p0, p1, 3);
  REQUIRE(r.w.sum() == Catch::Approx(5.0).epsilon(1e-14));
  // f = x + 2y on the segment (x,y) = p0 + t (p1-p0), ds = 5 dt:
  // int_0^1 (1+3t + 2(2+4t)) 5 dt = 5 (5 + 11/2) = 52.5
  double got = 0.0;
  for (int q = 0; q < r.size(); ++q) got += r.w(q) * (r.x(q) + 2.0 * r.y(q));
  REQUIRE(got == Catch::Approx(52.5).epsilon(1e-14));
  // xi spans the edge from v0 to v1
  Eigen::Vector2d at_first(r.x(0), r.y(0));
  REQUIRE((at_first - p0).norm() < (at_first - p1).norm());
}

TEST_CASE("tensor rule on the unit square hits known monomial values") {
  QuadRule r = rect_rule(0.0, 1.0, 0.0, 1.0, 3);
  REQUIRE(integrate(r, [](double x, double y) { return std::pow(x, 3) * std::pow(y, 3); }) ==
          Catch::Approx(1.0 / 16.0).epsilon(1e-14));
  QuadRule r2 = rect_rule(0.0, 1.0, 0.0, 1.0, 2);
  REQUIRE(integrate(r2, [](double x, double) { return (x - 0.5) * (x - 0.5); }) ==
          Catch::Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("tensor rules are exact on random rectangles") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    double x0 = U(rng), y0 = U(rng);
    double x1 = x0 + 0.1 + std::abs(U(rng)), y1 = y0 + 0.1 + std::abs(U(rng));
    int e = 1 + trial % 8;
    QuadRule r = rect_rule(x0, x1, y0, y1, e);
    REQUIRE(r.w.minCoeff() > 0.0);
    REQUIRE(r.w.sum() == Catch::Approx((x1 - x0) * (y1 - y0)).epsilon(1e-13));
    for (int a = 0; a <= e; ++a)
      for (int b = 0; b <= e; ++b) {
        double want = (std::pow(x1, a + 1) - std::pow(x0, a + 1)) / (a + 1) *
                      (std::pow(y1, b + 1) - std::pow(y0, b + 1)) / (b + 1);
        double got = integrate(r, [a, b](double x, double y) {
          return std::pow(x, a) * std::pow(y, b);
        });
        REQUIRE(got == Catch::Approx(want).epsilon(1e-12).margin(1e-13));
      }
  }
}

TEST_CASE("triangle rule matches closed forms on the unit triangle") {
  Eigen::Vector2d a(0, 0), b(1, 0), c(0, 1);
  // int x^p y^q = p! q! / (p+q+2)!
  auto fact = [](int n) {
    double f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  };
  for (int p = 0; p <= 4; ++p)
    for (int q = 0; p + q <= 4; ++q) {
      QuadRule r = triangle_rule(a, b, c, p + q);
      double want = fact(p) * fact(q) / fact(p + q + 2);
      double got = integrate(r, [p, q](double x, double y) {
        return std::pow(x, p) * std::pow(y, q);
      });
      INFO("p=" << p << " q=" << q);
      REQUIRE(got == Catch::Approx(want).epsilon(1e-13).margin(1e-15));
    }
}

TEST_CASE("triangle rule handles either orientation") {
  Eigen::Vector2d a(0, 0), b(1, 0), c(0, 1);
  QuadRule ccw = triangle_rule(a, b, c, 2);
  QuadRule cw = triangle_rule(a, c, b, 2);
  REQUIRE(ccw.w.sum() == Catch::Approx(0.5).epsilon(1e-14));
  REQUIRE(cw.w.sum() == Catch::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("polygon rule takes the tensor path on axis-aligned rectangles") {
  std::vector<Eigen::Vector2d> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  REQUIRE(is_axis_aligned_rect(sq, 1e-12));
  // exactness 3 per direction is enough for x^3 y^3 only on the tensor path
  QuadRule r = polygon_rule(sq, 3);
  REQUIRE(integrate(r, [](double x, double y) { return std::pow(x, 3) * std::pow(y, 3); }) ==
          Catch::Approx(1.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("polygon rule integrates monomials on convex polygons") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> U(0.3, 1.0);
  std::uniform_real_distribution<double> C(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    // convex polygon: points on an ellipse at increasing angles
    int m = 3 + trial % 5;
    double rx = U(rng) * 2.0, ry = U(rng) * 2.0;
    double cx = C(rng), cy = C(rng);
    std::vector<double> ang(m);
    std::uniform_real_distribution<double> A(0.0, 2.0 * M_PI);
    for (double& t : ang) t = A(rng);
    std::sort(ang.begin(), ang.end());
    bool distinct = true;
    for (int k = 0; k + 1 < m; ++k)
      if (ang[k + 1] - ang[k] < 0.2) distinct = false;
    if (!distinct) continue;
    std::vector<Eigen::Vector2d> verts;
    for (double t : ang) verts.emplace_back(cx + rx * std::cos(t), cy + ry * std::sin(t));

    double area = 0.0;
    for (int k = 0; k < m; ++k) {
      const auto& p = verts[k];
      const auto& q = verts[(k + 1) % m];
      area += 0.5 * (p.x() * q.y() - q.x() * p.y());
    }
    int e = 2 + trial % 4;
    QuadRule r = polygon_rule(verts, e);
    REQUIRE(r.w.sum() == Catch::Approx(area).epsilon(1e-13));
    for (int a = 0; a <= e; ++a)
      for (int b = 0; a + b <= e; ++b) {
        double want = greens_monomial(verts, a, b);
        double got = integrate(r, [a, b](double x, double y) {
          return std::pow(x, a) * std::pow(y, b);
        });
        INFO("trial=" << trial << " a=" << a << " b=" << b);
        REQUIRE(got == Catch::Approx(want).epsilon(1e-11).margin(1e-13));
      }
  }
}
