#include <doctest.h>

#include "ewbem/assembly.hpp"
#include "oracles.hpp"

using namespace ewbem;

namespace {

const Material kSteel = Material::from_young(2.11e11, 0.0, 7850.0);
const Material kSoft = Material::from_young(1.0, 0.25, 1.0);

double max_abs(const MatrixXc& A) { return A.cwiseAbs().maxCoeff(); }

// Rows of T applied to a rigid translation, relative to max|T|.
double rigid_residual(const MatrixXc& T) {
  double worst = 0.0;
  for (int d = 0; d < 3; ++d) {
    VectorXc t = VectorXc::Zero(T.cols());
    for (Eigen::Index i = d; i < t.size(); i += 3) t[i] = 1.0;
    worst = std::max(worst, (T * t).cwiseAbs().maxCoeff());
  }
  return worst / max_abs(T);
}

}  // namespace

TEST_CASE("rigid-body identity at near-static frequency") {
  for (const auto& mesh : {generate_box_mesh({1, 1, 1}, {1, 1, 1}), generate_box_mesh({3, 1, 1}, {3, 2, 2}),
                           generate_icosphere({0, 0, 0}, 1.0, 1, false)}) {
    const auto tu = assemble_TU(mesh, kSoft, {Complex(1e-6, -1e-7)});
    CHECK(rigid_residual(tu.T) < 1e-7);
  }
}

TEST_CASE("diagonal blocks carry the smooth free term") {
  // Free term I/2 plus the principal value of the flat self element.
  const auto cube = generate_box_mesh({1, 1, 1}, {3, 3, 3});
  const auto tu = assemble_TU(cube, kSoft, {Complex(1e-6, 0.0)});
  const double nu = kSoft.poisson();
  const double kappa = (1 - 2 * nu) / (8 * oracle::pi * (1 - nu));
  for (std::size_t e = 0; e < cube.num_elements(); ++e) {
    const auto c = cube.corners(e);
    const Vec3 n = cube.geometry(e).normal;
    const Vec3 ebar = oracle::cpv_e_over_r2(cube.geometry(e).centroid, c[0], c[1], c[2]);
    const Mat3 expected = 0.5 * Mat3::Identity() + kappa * (ebar * n.transpose() - n * ebar.transpose());
    const auto i = static_cast<Eigen::Index>(3 * e);
    CHECK((tu.T.block<3, 3>(i, i) - expected.cast<Complex>()).norm() < 1e-4);
  }
}

TEST_CASE("U blocks are nearly symmetric on a symmetric mesh") {
  const auto cube = generate_box_mesh({1, 1, 1}, {2, 2, 2});
  const auto tu = assemble_TU(cube, kSoft, {Complex(0.5, -0.05)});
  const Eigen::Index ne = static_cast<Eigen::Index>(cube.num_elements());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < ne; ++i) {
    for (Eigen::Index j = 0; j < ne; ++j) {
      const Mat3c a = tu.U.block<3, 3>(3 * i, 3 * j);
      const Mat3c b = tu.U.block<3, 3>(3 * j, 3 * i);
      worst = std::max(worst, (a - b.transpose()).norm() / (a.norm() + b.norm()));
    }
  }
  // Collocation is not Galerkin: the residual asymmetry is a discretization
  // effect that only needs to be small.
  CHECK(worst < 5e-2);
  // Self blocks are exactly symmetric.
  for (Eigen::Index i = 0; i < ne; ++i) {
    const Mat3c a = tu.U.block<3, 3>(3 * i, 3 * i);
    CHECK((a - a.transpose()).norm() < 1e-12 * a.norm());
  }
}

TEST_CASE("entries are finite with pure damping") {
  const auto rod = generate_box_mesh({3, 1, 1}, {6, 2, 2});
  const auto tu = assemble_TU(rod, kSteel, {Complex(0.0, -594.0)});
  CHECK(tu.T.allFinite());
  CHECK(tu.U.allFinite());
  // Pure imaginary frequency gives real kernels.
  CHECK(tu.T.imag().cwiseAbs().maxCoeff() < 1e-12 * max_abs(tu.T));
  CHECK(tu.U.imag().cwiseAbs().maxCoeff() < 1e-12 * max_abs(tu.U));
}

TEST_CASE("conjugate frequency gives the conjugate matrix") {
  const auto rod = generate_box_mesh({3, 1, 1}, {3, 1, 1});
  const Complex w(2 * kPi / 0.0155 * 7, -594.24);
  const auto a = assemble_TU(rod, kSteel, {w});
  const auto b = assemble_TU(rod, kSteel, {-std::conj(w)});
  CHECK((a.T.conjugate() - b.T).cwiseAbs().maxCoeff() < 1e-12 * max_abs(a.T));
  CHECK((a.U.conjugate() - b.U).cwiseAbs().maxCoeff() < 1e-12 * max_abs(a.U));
}

TEST_CASE("boundary conditions: bookkeeping and reconstruction") {
  const auto rod = generate_box_mesh({3, 1, 1}, {6, 2, 2});
  const std::vector<BcRule> rules{{kXMinus, -1, BcKind::Displacement, ""}, {kXPlus, 0, BcKind::Traction, "load"},
                                  {kYPlus, 1, BcKind::Displacement, "shake"}};
  const BoundaryConditionSet bcs(rod, rules);
  REQUIRE(bcs.signal_names().size() == 2);
  CHECK(bcs.signal_names()[0] == "load");
  const std::size_t e_plus = rod.elements_with_tag(kXPlus).front();
  CHECK(bcs.kind(3 * e_plus) == BcKind::Traction);
  CHECK(bcs.signal(3 * e_plus) == 0);
  CHECK(bcs.signal(3 * e_plus + 1) == -1);
  CHECK(bcs.kind(3 * rod.elements_with_tag(kXMinus).front() + 2) == BcKind::Displacement);

  const ComplexFrequency w{Complex(3000.0, -594.24)};
  const auto tu = assemble_TU(rod, kSteel, w);
  const VectorXc prescribed = bcs.resolve({Complex(-1e6, 2e5), Complex(1e-6, -3e-7)});
  const DenseSystem sys = apply_bcs(tu, bcs, prescribed);
  const VectorXc a = Eigen::PartialPivLU<Eigen::MatrixXcd>(sys.A).solve(sys.b);
  const BoundaryFields f = scatter_solution(bcs, a, prescribed);
  const VectorXc lhs = tu.T * f.displacement, rhs = tu.U * f.traction;
  CHECK((lhs - rhs).norm() <= 1e-9 * rhs.norm());
  for (std::size_t d = 0; d < bcs.num_dofs(); ++d) {
    const auto i = static_cast<Eigen::Index>(d);
    const Complex known = bcs.kind(d) == BcKind::Displacement ? f.displacement[i] : f.traction[i];
    CHECK(known == prescribed[i]);
    CHECK(sys.unknown[d] != bcs.kind(d));
  }

  // The fused assembler builds the same system.
  const Assembler assembler(rod, kSteel);
  const DenseSystem fused = assembler.assemble_system(w, bcs, prescribed);
  CHECK((fused.A - sys.A).cwiseAbs().maxCoeff() <= 1e-13 * max_abs(sys.A));
  CHECK((fused.b - sys.b).cwiseAbs().maxCoeff() <= 1e-13 * sys.b.cwiseAbs().maxCoeff());

  // Linear in the prescribed data.
  const VectorXc p2 = bcs.resolve({Complex(0.5, 1.0), Complex(-2e-6, 0.0)});
  const DenseSystem s2 = apply_bcs(tu, bcs, p2);
  const DenseSystem s12 = apply_bcs(tu, bcs, VectorXc(2.0 * prescribed + 3.0 * p2));
  CHECK((s12.b - 2.0 * sys.b - 3.0 * s2.b).norm() < 1e-12 * s12.b.norm());
}

TEST_CASE("zero data gives a zero right-hand side") {
  const auto cube = generate_box_mesh({1, 1, 1}, {1, 1, 1});
  const BoundaryConditionSet bcs(cube, {}, true);
  const auto tu = assemble_TU(cube, kSoft, {Complex(1.0, -0.1)});
  const DenseSystem sys = apply_bcs(tu, bcs, VectorXc::Zero(36));
  CHECK(sys.b.norm() == 0.0);
}

TEST_CASE("boundary condition errors") {
  const auto cube = generate_box_mesh({1, 1, 1}, {1, 1, 1});
  CHECK_THROWS_AS(BoundaryConditionSet(cube, {}), ConfigError);
  CHECK_THROWS_AS(BoundaryConditionSet(cube, {{9, -1, BcKind::Displacement, ""}}), ConfigError);
  CHECK_THROWS_AS(BoundaryConditionSet(cube, {{0, 3, BcKind::Displacement, ""}}), ConfigError);
  const BoundaryConditionSet ok(cube, {{0, -1, BcKind::Displacement, "s"}});
  CHECK_THROWS_AS(ok.resolve({}), AssemblyError);
  const auto tu = assemble_TU(cube, kSoft, {Complex(1.0, -0.1)});
  CHECK_THROWS_AS(apply_bcs(tu, ok, VectorXc::Zero(5)), AssemblyError);

  const std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const TriangleMesh open(v, {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}});
  CHECK_THROWS_AS(Assembler(open, kSoft), AssemblyError);
}

TEST_CASE("assembly does not depend on the worker count") {
  const auto rod = generate_box_mesh({3, 1, 1}, {6, 2, 2});
  const BoundaryConditionSet bcs(rod, {{kXMinus, -1, BcKind::Displacement, ""}, {kXPlus, 0, BcKind::Traction, "p"}});
  const VectorXc prescribed = bcs.resolve({Complex(1.0, 0.5)});
  const ComplexFrequency w{Complex(5000.0, -594.24)};
  const DenseSystem one = Assembler(rod, kSteel, {}, 1).assemble_system(w, bcs, prescribed);
  const DenseSystem three = Assembler(rod, kSteel, {}, 3).assemble_system(w, bcs, prescribed);
  CHECK(one.A == three.A);
  CHECK(one.b == three.b);
}

TEST_CASE("refined quadrature barely moves the rod matrix") {
  const auto rod = generate_box_mesh({3, 1, 1}, {12, 4, 4});
  const ComplexFrequency w = ComplexFrequency::sample(32, 2 * kPi / 0.0155, 594.24);
  const auto base = assemble_TU(rod, kSteel, w);
  const auto fine = assemble_TU(rod, kSteel, w, QuadraturePolicy::refined());
  CHECK((base.U - fine.U).cwiseAbs().maxCoeff() < 1e-4 * max_abs(fine.U));
  CHECK((base.T - fine.T).cwiseAbs().maxCoeff() < 1e-3 * max_abs(fine.T));
  MESSAGE("max |dU|/max|U| = " << (base.U - fine.U).cwiseAbs().maxCoeff() / max_abs(fine.U)
                               << ", max |dT|/max|T| = " << (base.T - fine.T).cwiseAbs().maxCoeff() / max_abs(fine.T));
}
