#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "ewbem/kernels.hpp"
#include "ewbem/mesh.hpp"

namespace ewbem {

/// Symmetric Gauss rule on the reference triangle. Points are barycentric,
/// weights sum to one (multiply by the element area at use).
struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Dunavant rules with 1, 3, 7 or 12 points (degree 1, 2, 5, 6).
const TriangleRule& triangle_rule(int num_points);

struct GaussLegendre {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule mapped to [0, 1]. Cached per n.
const GaussLegendre& gauss_legendre(int n);

/// Rule selection by d = |x - centroid| / diameter.
struct QuadraturePolicy {
  double far_ratio = 4.0;   // d >= far_ratio: far rule
  double near_ratio = 1.0;  // near_ratio <= d < far_ratio: mid rule
  int far_points = 3;
  int mid_points = 7;
  double split_ratio = 1.0;  // subdivision stops once pieces satisfy d >= split_ratio
  int near_max_depth = 6;    // recursive 4:1 splits for d < near_ratio
  int self_order = 8;        // Gauss points per direction in the singular scheme

  /// Same ladder with every order raised one step.
  static QuadraturePolicy refined();
};

inline KernelValue operator+(const KernelValue& a, const KernelValue& b) { return {a.U + b.U, a.T + b.T}; }
inline KernelValue operator*(double s, const KernelValue& a) { return {s * a.U, s * a.T}; }
inline StaticKernelValue operator+(const StaticKernelValue& a, const StaticKernelValue& b) {
  return {a.U + b.U, a.T + b.T};
}
inline StaticKernelValue operator*(double s, const StaticKernelValue& a) { return {s * a.U, s * a.T}; }

/// Sum_q w_q * area * f(y_q) over the triangle (a, b, c).
template <class Fn>
auto integrate_rule(const TriangleRule& rule, const std::array<Vec3, 3>& tri, Fn&& f) {
  const double area = 0.5 * (tri[1] - tri[0]).cross(tri[2] - tri[0]).norm();
  auto point = [&](std::size_t q) {
    const auto& b = rule.points[q];
    return Vec3(b[0] * tri[0] + b[1] * tri[1] + b[2] * tri[2]);
  };
  auto sum = (rule.weights[0] * area) * f(point(0));
  for (std::size_t q = 1; q < rule.size(); ++q) sum = sum + (rule.weights[q] * area) * f(point(q));
  return sum;
}

/// Recursively splits the triangle 4:1 until every piece satisfies
/// |x - piece centroid| >= ratio * piece diameter (or max_depth is reached),
/// then applies `rule` on each piece.
template <class Fn>
auto integrate_subdivided(const TriangleRule& rule, const std::array<Vec3, 3>& tri, const Vec3& x,
                          double ratio, int max_depth, Fn&& f) {
  const Vec3 c = (tri[0] + tri[1] + tri[2]) / 3.0;
  const double diam = std::max({(tri[1] - tri[0]).norm(), (tri[2] - tri[1]).norm(), (tri[0] - tri[2]).norm()});
  if (max_depth <= 0 || (x - c).norm() >= ratio * diam) return integrate_rule(rule, tri, f);
  const Vec3 m01 = 0.5 * (tri[0] + tri[1]);
  const Vec3 m12 = 0.5 * (tri[1] + tri[2]);
  const Vec3 m20 = 0.5 * (tri[2] + tri[0]);
  auto sum = integrate_subdivided(rule, {tri[0], m01, m20}, x, ratio, max_depth - 1, f);
  sum = sum + integrate_subdivided(rule, {m01, tri[1], m12}, x, ratio, max_depth - 1, f);
  sum = sum + integrate_subdivided(rule, {m20, m12, tri[2]}, x, ratio, max_depth - 1, f);
  sum = sum + integrate_subdivided(rule, {m01, m12, m20}, x, ratio, max_depth - 1, f);
  return sum;
}

/// Integral over a triangle of a function with a 1/r singularity at the
/// interior point x. The triangle is split at x into three pieces, each piece
/// again at the foot of the perpendicular from x to its outer edge, and every
/// piece is integrated in polar coordinates centred at x with `order` x `order`
/// Gauss points. The angular variable is u = asinh(tan theta), whose Jacobian
/// cancels the growth of the ray length, so 1/r is integrated exactly.
template <class Fn>
auto integrate_polar(const std::array<Vec3, 3>& tri, const Vec3& x, int order, Fn&& f) {
  const GaussLegendre& gl = gauss_legendre(order);
  using Result = decltype(f(x));
  Result sum{};
  bool first = true;
  auto add = [&](const Result& v, double w) {
    if (first) {
      sum = w * v;
      first = false;
    } else {
      sum = sum + w * v;
    }
  };
  for (int s = 0; s < 3; ++s) {
    const Vec3& a = tri[s];
    const Vec3& b = tri[(s + 1) % 3];
    const Vec3 edge = b - a;
    const Vec3 dir = edge / edge.norm();
    const Vec3 foot = a + ((x - a).dot(dir)) * dir;
    const double h = (x - foot).norm();
    const double ua = std::asinh((a - foot).dot(dir) / h);
    const double ub = std::asinh((b - foot).dot(dir) / h);
    std::array<std::array<double, 2>, 2> spans{};
    int nspans = 0;
    if (ua < 0.0 && ub > 0.0) {
      spans[nspans++] = {ua, 0.0};
      spans[nspans++] = {0.0, ub};
    } else {
      spans[nspans++] = {ua, ub};
    }
    for (int k = 0; k < nspans; ++k) {
      const double u0 = spans[k][0];
      const double du = spans[k][1] - u0;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double u = u0 + du * gl.nodes[i];
        // Ray to the edge point at signed offset h sinh(u) from the foot; its
        // length is h cosh(u) and d(theta) = du / cosh(u).
        const Vec3 ray = foot + (h * std::sinh(u)) * dir - x;
        const double jac = h * h * std::cosh(u);
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
          const double rho = gl.nodes[j];
          add(f(Vec3(x + rho * ray)), du * gl.weights[i] * gl.weights[j] * rho * jac);
        }
      }
    }
  }
  return sum;
}

/// Regular-rule integral of U and T over element e for the collocation point x
/// (x must not lie on the element). The rule follows `policy`.
KernelValue integrate_regular(const ElastodynamicKernel& kernel, const TriangleMesh& mesh, std::size_t e,
                              const Vec3& x, const QuadraturePolicy& policy = {});

/// Same rule ladder for the Kelvin kernels.
StaticKernelValue integrate_regular_static(const Material& material, const TriangleMesh& mesh, std::size_t e,
                                           const Vec3& x, const QuadraturePolicy& policy = {});

/// Self-element integrals from the element centroid: U(w) and T(w) - T_static,
/// both weakly singular.
KernelValue integrate_weakly_singular(const ElastodynamicKernel& kernel, const TriangleMesh& mesh,
                                      std::size_t e, int order = 8);

/// For each element e: sum over e' != e of the Kelvin traction integral at the
/// centroid of e. Frequency independent.
std::vector<Mat3> static_offdiag_rowsums(const TriangleMesh& mesh, const Material& material,
                                         const QuadraturePolicy& policy = {}, unsigned workers = 1);

/// Diagonal blocks of T including the free term, from the rigid-body identity:
/// block_e = -rowsum_e + integral over e of (T(w) - T_static). Requires a
/// closed mesh (AssemblyError otherwise).
std::vector<Mat3c> self_term_T(const TriangleMesh& mesh, const ElastodynamicKernel& kernel,
                               const std::vector<Mat3>& static_rowsums, int order = 8);

}  // namespace ewbem
