#include "ewbem/quadrature.hpp"

#include <mutex>
#include <string>

#include "ewbem/parallel.hpp"

namespace ewbem {
namespace {

TriangleRule make_rule(int degree, std::initializer_list<std::pair<double, std::array<double, 3>>> orbits) {
  TriangleRule rule;
  rule.degree = degree;
  for (const auto& [w, p] : orbits) {
    const double a = p[0], b = p[1], c = p[2];
    std::vector<std::array<double, 3>> pts;
    if (a == b && b == c) {
      pts = {{a, b, c}};
    } else if (b == c) {
      pts = {{a, b, b}, {b, a, b}, {b, b, a}};
    } else {
      pts = {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
    }
    for (const auto& q : pts) {
      rule.points.push_back(q);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

const TriangleRule& rule_1() {
  static const TriangleRule r = make_rule(1, {{1.0, {1.0 / 3, 1.0 / 3, 1.0 / 3}}});
  return r;
}

const TriangleRule& rule_3() {
  static const TriangleRule r = make_rule(2, {{1.0 / 3, {2.0 / 3, 1.0 / 6, 1.0 / 6}}});
  return r;
}

const TriangleRule& rule_7() {
  static const TriangleRule r = [] {
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, a2 = (6.0 + s15) / 21.0;
    return make_rule(5, {{9.0 / 40.0, {1.0 / 3, 1.0 / 3, 1.0 / 3}},
                         {(155.0 - s15) / 1200.0, {1.0 - 2.0 * a1, a1, a1}},
                         {(155.0 + s15) / 1200.0, {1.0 - 2.0 * a2, a2, a2}}});
  }();
  return r;
}

const TriangleRule& rule_12() {
  static const TriangleRule r =
      make_rule(6, {{0.116786275726379, {0.501426509658179, 0.249286745170910, 0.249286745170910}},
                    {0.050844906370207, {0.873821971016996, 0.063089014491502, 0.063089014491502}},
                    {0.082851075618374, {0.053145049844817, 0.310352451033784, 0.636502499121399}}});
  return r;
}

GaussLegendre compute_gauss_legendre(int n) {
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    // Map [-1, 1] -> [0, 1], ascending order.
    gl.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    gl.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

}  // namespace

const TriangleRule& triangle_rule(int num_points) {
  switch (num_points) {
    case 1: return rule_1();
    case 3: return rule_3();
    case 7: return rule_7();
    case 12: return rule_12();
    default: throw Error("no triangle rule with " + std::to_string(num_points) + " points");
  }
}

const GaussLegendre& gauss_legendre(int n) {
  constexpr int kMax = 64;
  if (n < 1 || n > kMax) throw Error("Gauss-Legendre order must lie in [1, 64]");
  static std::array<GaussLegendre, kMax + 1> cache;
  static std::array<std::once_flag, kMax + 1> flags;
  std::call_once(flags[n], [n] { cache[n] = compute_gauss_legendre(n); });
  return cache[n];
}

QuadraturePolicy QuadraturePolicy::refined() {
  QuadraturePolicy p;
  p.far_points = 7;
  p.mid_points = 12;
  p.split_ratio = 2.0;
  p.near_max_depth = 8;
  p.self_order = 16;
  return p;
}

namespace {

template <class Fn>
auto integrate_element(const TriangleMesh& mesh, std::size_t e, const Vec3& x, const QuadraturePolicy& policy,
                       Fn&& f) {
  const auto tri = mesh.corners(e);
  const double d = (x - mesh.geometry(e).centroid).norm() / mesh.diameter(e);
  if (d >= policy.far_ratio) return integrate_rule(triangle_rule(policy.far_points), tri, f);
  if (d >= policy.near_ratio) return integrate_rule(triangle_rule(policy.mid_points), tri, f);
  return integrate_subdivided(triangle_rule(policy.mid_points), tri, x, policy.split_ratio, policy.near_max_depth,
                              f);
}

}  // namespace

KernelValue integrate_regular(const ElastodynamicKernel& kernel, const TriangleMesh& mesh, std::size_t e,
                              const Vec3& x, const QuadraturePolicy& policy) {
  const Vec3& n = mesh.geometry(e).normal;
  return integrate_element(mesh, e, x, policy, [&](const Vec3& y) { return kernel.evaluate(x, y, n); });
}

StaticKernelValue integrate_regular_static(const Material& material, const TriangleMesh& mesh, std::size_t e,
                                           const Vec3& x, const QuadraturePolicy& policy) {
  const Vec3& n = mesh.geometry(e).normal;
  return integrate_element(mesh, e, x, policy, [&](const Vec3& y) { return static_kernels(x, y, n, material); });
}

KernelValue integrate_weakly_singular(const ElastodynamicKernel& kernel, const TriangleMesh& mesh, std::size_t e,
                                      int order) {
  const auto tri = mesh.corners(e);
  const ElementGeometry& g = mesh.geometry(e);
  const Vec3& x = g.centroid;
  const Material& material = kernel.material();
  return integrate_polar(tri, x, order, [&](const Vec3& y) {
    KernelValue v = kernel.evaluate(x, y, g.normal);
    v.T -= static_kernels(x, y, g.normal, material).T.cast<Complex>();
    return v;
  });
}

std::vector<Mat3> static_offdiag_rowsums(const TriangleMesh& mesh, const Material& material,
                                         const QuadraturePolicy& policy, unsigned workers) {
  const std::size_t ne = mesh.num_elements();
  std::vector<Mat3> rows(ne, Mat3::Zero());
  parallel_for(ne, workers, [&](std::size_t i) {
    const Vec3& x = mesh.geometry(i).centroid;
    Mat3 sum = Mat3::Zero();
    for (std::size_t e = 0; e < ne; ++e) {
      if (e == i) continue;
      sum += integrate_regular_static(material, mesh, e, x, policy).T;
    }
    rows[i] = sum;
  });
  return rows;
}

std::vector<Mat3c> self_term_T(const TriangleMesh& mesh, const ElastodynamicKernel& kernel,
                               const std::vector<Mat3>& static_rowsums, int order) {
  if (!mesh.is_closed()) {
    throw AssemblyError("the rigid-body self-term requires a closed mesh; direct principal-value "
                        "integration is not supported");
  }
  if (static_rowsums.size() != mesh.num_elements()) throw AssemblyError("row-sum table does not match mesh");
  std::vector<Mat3c> out(mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    out[e] = -static_rowsums[e].cast<Complex>() + integrate_weakly_singular(kernel, mesh, e, order).T;
  }
  return out;
}

}  // namespace ewbem
