#include <doctest.h>

#include "ewbem/quadrature.hpp"
#include "oracles.hpp"

using namespace ewbem;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Mean of x^a y^b over the reference triangle (0,0), (1,0), (0,1).
double monomial_mean(int a, int b) { return 2.0 * factorial(a) * factorial(b) / factorial(a + b + 2); }

const Material kSteel = Material::from_young(2.11e11, 0.0, 7850.0);

}  // namespace

TEST_CASE("triangle rules: weights, interior points, exactness") {
  for (int n : {1, 3, 7, 12}) {
    const TriangleRule& rule = triangle_rule(n);
    REQUIRE(rule.size() == static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      wsum += rule.weights[q];
      CHECK(rule.weights[q] > 0.0);
      double bsum = 0.0;
      for (double b : rule.points[q]) {
        CHECK(b > 0.0);
        bsum += b;
      }
      CHECK(std::abs(bsum - 1.0) < 1e-14);
    }
    CHECK(std::abs(wsum - 1.0) < 1e-14);

    for (int a = 0; a <= rule.degree; ++a) {
      for (int b = 0; a + b <= rule.degree; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          s += rule.weights[q] * std::pow(rule.points[q][1], a) * std::pow(rule.points[q][2], b);
        }
        CHECK(std::abs(s - monomial_mean(a, b)) < 1e-14);
      }
    }
  }
  CHECK(triangle_rule(3).degree == 2);
  CHECK(triangle_rule(7).degree == 5);
  CHECK(triangle_rule(12).degree == 6);
  CHECK_THROWS(triangle_rule(5));
}

TEST_CASE("Gauss-Legendre on [0, 1]") {
  for (int n : {1, 4, 8, 16}) {
    const auto& gl = gauss_legendre(n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += gl.weights[i] * std::pow(gl.nodes[i], p);
      CHECK(std::abs(s - 1.0 / (p + 1)) < 1e-14);
    }
  }
}

TEST_CASE("constant and linear integrands") {
  const std::array<Vec3, 3> tri{Vec3(0.1, 0, 0), Vec3(1.3, 0.2, 0.1), Vec3(0.4, 0.9, -0.3)};
  const double area = 0.5 * (tri[1] - tri[0]).cross(tri[2] - tri[0]).norm();
  const Vec3 c = (tri[0] + tri[1] + tri[2]) / 3.0;
  for (int n : {1, 3, 7, 12}) {
    CHECK(integrate_rule(triangle_rule(n), tri, [](const Vec3&) { return 2.5; }) ==
          doctest::Approx(2.5 * area).epsilon(1e-14));
  }
  const Vec3 g(0.3, -1.1, 2.0);
  const double lin = integrate_rule(triangle_rule(3), tri, [&](const Vec3& y) { return 1.0 + g.dot(y); });
  CHECK(std::abs(lin - area * (1.0 + g.dot(c))) < 1e-14 * area * (1.0 + std::abs(g.dot(c))));
}

TEST_CASE("1/r over a triangle from an interior point") {
  const std::array<Vec3, 3> right{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  const std::array<Vec3, 3> slanted{Vec3(0.2, -0.1, 0.3), Vec3(1.7, 0.4, 0.1), Vec3(0.1, 0.5, 1.2)};
  for (const auto& tri : {right, slanted}) {
    const Vec3 c = (tri[0] + tri[1] + tri[2]) / 3.0;
    const Vec3 off = 0.6 * tri[0] + 0.3 * tri[1] + 0.1 * tri[2];
    for (const Vec3& x : {c, off}) {
      auto inv_r = [&](const Vec3& y) { return 1.0 / (y - x).norm(); };
      const double exact = oracle::inv_r_over_triangle(x, tri[0], tri[1], tri[2]);
      const double q8 = integrate_polar(tri, x, 8, inv_r);
      const double q16 = integrate_polar(tri, x, 16, inv_r);
      CHECK(std::abs(q8 - exact) < 1e-8 * exact);
      CHECK(std::abs(q16 - q8) < 1e-9 * exact);
    }
  }
}

TEST_CASE("self-element static U on an equilateral triangle") {
  const double s3 = std::sqrt(3.0);
  const std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0.5, s3 / 2, 0}, {0.5, s3 / 6, -0.8}};
  const TriangleMesh tet(v, {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {2, 3, 0}});
  const Vec3 x = tet.geometry(0).centroid;
  const auto c = tet.corners(0);
  auto u = [&](const Vec3& y) { return Mat3(static_kernels(x, y, Vec3::UnitZ(), kSteel).U); };
  const Mat3 U8 = integrate_polar(c, x, 8, u);
  const Mat3 U16 = integrate_polar(c, x, 16, u);
  CHECK(std::abs(U8(0, 0) - U8(1, 1)) < 1e-12 * U8(0, 0));
  CHECK(std::abs(U8(0, 1)) < 1e-12 * U8(0, 0));
  CHECK((U16 - U8).norm() < 1e-9 * U8.norm());

  // The dynamic self integral reduces to the static one at small frequency.
  const ElastodynamicKernel k(kSteel, {Complex(1e-3, -1e-4)});
  const KernelValue self = integrate_weakly_singular(k, tet, 0, 8);
  CHECK((self.U.real() - U8).norm() < 1e-6 * U8.norm());
  CHECK(self.T.norm() < 1e-6 * U8.norm() * kSteel.mu());
}

TEST_CASE("far element: 3-point and 12-point rules agree") {
  const auto rod = generate_box_mesh({3, 1, 1}, {12, 4, 4});
  const ElastodynamicKernel k(kSteel, ComplexFrequency::sample(10, 2 * kPi / 0.0155, 594.24));
  const std::size_t e = 0;
  const auto c = rod.corners(e);
  const Vec3 x = rod.geometry(e).centroid + Vec3(10 * rod.diameter(e), 0.3, 0.2);
  const Vec3 n = rod.geometry(e).normal;
  auto f = [&](const Vec3& y) { return k.evaluate(x, y, n); };
  const KernelValue r3 = integrate_rule(triangle_rule(3), c, f);
  const KernelValue r12 = integrate_rule(triangle_rule(12), c, f);
  CHECK((r3.U - r12.U).norm() < 1e-5 * r12.U.norm());
  CHECK((r3.T - r12.T).norm() < 1e-4 * r12.T.norm());
}

TEST_CASE("near-element ladder converges") {
  const auto rod = generate_box_mesh({3, 1, 1}, {12, 4, 4});
  const ElastodynamicKernel k(kSteel, ComplexFrequency::sample(20, 2 * kPi / 0.0155, 594.24));
  // Collocate at the neighbour of element 0 across a shared edge and at distances
  // on each rung of the ladder.
  for (double d : {0.3, 0.6, 1.5, 3.0, 6.0}) {
    const Vec3 x = rod.geometry(0).centroid + d * rod.diameter(0) * Vec3(0.6, 0.0, 0.8);
    const KernelValue base = integrate_regular(k, rod, 0, x, QuadraturePolicy{});
    const KernelValue fine = integrate_regular(k, rod, 0, x, QuadraturePolicy::refined());
    QuadraturePolicy finest = QuadraturePolicy::refined();
    finest.far_points = 12;
    finest.far_ratio = 1e9;
    finest.near_ratio = 1e9;
    finest.split_ratio = 4.0;
    finest.near_max_depth = 10;
    const KernelValue ref = integrate_regular(k, rod, 0, x, finest);
    const double eb = (base.U - ref.U).norm() / ref.U.norm();
    const double ef = (fine.U - ref.U).norm() / ref.U.norm();
    CHECK(ef <= eb + 1e-14);
    CHECK(eb < 1e-4);
    CHECK((base.T - ref.T).norm() < 1e-3 * ref.T.norm());
  }
}

TEST_CASE("static row sums: free term of a flat face") {
  // On a closed surface the Kelvin traction integral over everything except
  // the element itself is -I/2 minus the element's own principal value, which
  // for a flat element is the antisymmetric (1 - 2 nu) term.
  const double nu = 0.3;
  const Material m = Material::from_young(1.0, nu, 1.0);
  const double kappa = (1 - 2 * nu) / (8 * oracle::pi * (1 - nu));
  for (const auto& policy : {QuadraturePolicy{}, QuadraturePolicy::refined()}) {
    const auto cube = generate_box_mesh({1, 1, 1}, {3, 3, 3});
    const auto sums = static_offdiag_rowsums(cube, m, policy);
    double worst = 0.0;
    for (std::size_t e = 0; e < cube.num_elements(); ++e) {
      const auto c = cube.corners(e);
      const Vec3 n = cube.geometry(e).normal;
      const Vec3 ebar = oracle::cpv_e_over_r2(cube.geometry(e).centroid, c[0], c[1], c[2]);
      const Mat3 self = kappa * (ebar * n.transpose() - n * ebar.transpose());
      worst = std::max(worst, (sums[e] + 0.5 * Mat3::Identity() + self).norm());
    }
    CHECK(worst < 1e-4);
    MESSAGE("worst free-term deviation " << worst);
  }
}

TEST_CASE("self term needs a closed mesh") {
  const std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const TriangleMesh open(v, {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}});
  const ElastodynamicKernel k(kSteel, {Complex(10.0, -1.0)});
  std::vector<Mat3> sums(open.num_elements(), Mat3::Zero());
  CHECK_THROWS_AS(self_term_T(open, k, sums), AssemblyError);
}
