#include <doctest.h>

#include <random>

#include "ewbem/assembly.hpp"
#include "ewbem/types.hpp"
#include "ewbem/linsolve.hpp"
#include "fixtures.hpp"

using namespace ewbem;

namespace {

MatrixXc random_matrix(Eigen::Index n, unsigned seed, double diag_shift) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  MatrixXc A(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = Complex(g(gen), g(gen)) / std::sqrt(double(n));
  }
  A.diagonal().array() += diag_shift;
  return A;
}

VectorXc random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  VectorXc v(n);
  for (auto& x : v) x = Complex(g(gen), g(gen));
  return v;
}

}  // namespace

TEST_CASE("gmres: identity converges in one iteration") {
  const MatrixXc I = MatrixXc::Identity(12, 12);
  const VectorXc b = random_vector(12, 1);
  const auto r = gmres(dense_operator(I), b, VectorXc::Zero(12), {1e-12, 30, 100});
  CHECK(r.stats.converged);
  CHECK(r.stats.iterations == 1);
  CHECK((r.x - b).norm() < 1e-14 * b.norm());
}

TEST_CASE("gmres: block-diagonal system is solved exactly by its preconditioner") {
  MatrixXc A = MatrixXc::Zero(15, 15);
  for (int e = 0; e < 5; ++e) A.block<3, 3>(3 * e, 3 * e) = random_matrix(3, 10 + e, 2.0);
  const BlockDiagonalPreconditioner P(A);
  CHECK(P.fallback_blocks() == 0);
  const VectorXc b = random_vector(15, 2);
  const auto r = gmres(dense_operator(A), b, VectorXc::Zero(15), {1e-12, 30, 100}, P.as_operator());
  CHECK(r.stats.converged);
  CHECK(r.stats.iterations == 1);
  CHECK((A * r.x - b).norm() < 1e-12 * b.norm());
}

TEST_CASE("block preconditioner: diagonal blocks of A P^-1 are the identity") {
  const MatrixXc A = random_matrix(30, 3, 3.0);
  const BlockDiagonalPreconditioner P(A);
  MatrixXc AP(30, 30);
  for (Eigen::Index j = 0; j < 30; ++j) {
    VectorXc y;
    P.apply(A.col(j), y);
    AP.col(j) = y;
  }
  for (int e = 0; e < 10; ++e) {
    CHECK((AP.block<3, 3>(3 * e, 3 * e) - Mat3c::Identity()).norm() < 1e-13);
  }
}

TEST_CASE("block preconditioner: singular block falls back to identity") {
  MatrixXc A = random_matrix(6, 4, 3.0);
  A.block<3, 3>(3, 3).setZero();
  const BlockDiagonalPreconditioner P(A);
  CHECK(P.fallback_blocks() == 1);
}

TEST_CASE("gmres: exact initial guess takes zero iterations") {
  const MatrixXc A = random_matrix(20, 5, 4.0);
  const VectorXc x = random_vector(20, 6);
  const VectorXc b = A * x;
  const auto r = gmres(dense_operator(A), b, x, {1e-8, 30, 100});
  CHECK(r.stats.converged);
  CHECK(r.stats.iterations == 0);
  CHECK(r.stats.initial_residual < 1e-14);
}

TEST_CASE("gmres: zero right-hand side returns zero") {
  const MatrixXc A = random_matrix(10, 7, 4.0);
  const auto r = gmres(dense_operator(A), VectorXc::Zero(10), random_vector(10, 8), {1e-8, 30, 100});
  CHECK(r.stats.converged);
  CHECK(r.x.norm() == 0.0);
}

TEST_CASE("gmres: iteration cap is reported as non-convergence") {
  const MatrixXc A = random_matrix(40, 9, 0.5);
  const VectorXc b = random_vector(40, 10);
  const auto r = gmres(dense_operator(A), b, VectorXc::Zero(40), {1e-12, 5, 3});
  CHECK_FALSE(r.stats.converged);
  CHECK(r.stats.iterations <= 3);
  CHECK(r.stats.final_residual > 1e-12);
  CHECK(r.stats.final_residual < 1.0);
}

TEST_CASE("gmres: restarted cycles still converge and residuals never grow") {
  const MatrixXc A = random_matrix(60, 11, 2.5);
  const VectorXc b = random_vector(60, 12);
  const auto r = gmres(dense_operator(A), b, VectorXc::Zero(60), {1e-10, 8, 1000});
  CHECK(r.stats.converged);
  CHECK(r.cycle_residuals.size() > 1);
  CHECK((A * r.x - b).norm() <= 1e-10 * b.norm() * 1.0001);
  for (const auto& cycle : r.cycle_residuals) {
    for (std::size_t j = 1; j < cycle.size(); ++j) CHECK(cycle[j] <= cycle[j - 1] * (1 + 1e-12));
  }
  for (std::size_t c = 1; c < r.cycle_residuals.size(); ++c) {
    CHECK(r.cycle_residuals[c].back() <= r.cycle_residuals[c - 1].back() * (1 + 1e-12));
  }
}

TEST_CASE("gmres agrees with a direct solve on a 30-element BEM system") {
  const auto mesh = fixture::bipyramid();
  REQUIRE(mesh.num_elements() == 30);
  const Material m = Material::from_young(2.11e11, 0.25, 7850.0);
  const BoundaryConditionSet bcs(mesh, {{0, -1, BcKind::Displacement, ""}, {1, 2, BcKind::Traction, "load"}});
  const Assembler assembler(mesh, m);
  const VectorXc prescribed = bcs.resolve({Complex(1e6, -2e5)});
  for (const Complex w : {Complex(3000.0, -300.0), Complex(20000.0, -300.0)}) {
    const DenseSystem sys = assembler.assemble_system({w}, bcs, prescribed);
    const VectorXc direct = sys.A.partialPivLu().solve(sys.b);
    const BlockDiagonalPreconditioner P(sys.A);
    const auto r = gmres(dense_operator(sys.A), sys.b, VectorXc::Zero(sys.b.size()), {1e-6, 60, 1000},
                         P.as_operator());
    CHECK(r.stats.converged);
    CHECK((r.x - direct).norm() / direct.norm() <= 1e-4);
  }
}

TEST_CASE("solution history keeps the newest columns first") {
  SolutionHistory h(2);
  CHECK(h.empty());
  for (int i = 1; i <= 3; ++i) h.push(VectorXc::Constant(2, double(i)));
  CHECK(h.size() == 2);
  CHECK(h[0][0] == Complex(3.0));
  CHECK(h[1][0] == Complex(2.0));
}

TEST_CASE("sem: empty history throws") {
  const MatrixXc A = MatrixXc::Identity(3, 3);
  CHECK_THROWS_AS(sem_initial_guess(SolutionHistory(4), dense_operator(A), VectorXc::Ones(3)), SolveError);
}

TEST_CASE("sem: exact when b lies in span(A X)") {
  const MatrixXc A = random_matrix(24, 13, 3.0);
  SolutionHistory h(4);
  for (unsigned i = 0; i < 4; ++i) h.push(random_vector(24, 20 + i));
  const VectorXc x = 0.3 * h[0] - Complex(0.0, 1.1) * h[2] + 2.0 * h[3];
  const VectorXc b = A * x;
  const auto g = sem_initial_guess(h, dense_operator(A), b);
  CHECK(g.kept_columns == 4);
  CHECK((A * g.x0 - b).norm() <= 1e-10 * b.norm());
  CHECK((g.x0 - x).norm() <= 1e-10 * x.norm());
}

TEST_CASE("sem: least-squares residual is no worse than any single column") {
  const MatrixXc A = random_matrix(24, 14, 3.0);
  SolutionHistory h(4);
  for (unsigned i = 0; i < 4; ++i) h.push(random_vector(24, 30 + i));
  const VectorXc b = random_vector(24, 40);
  const auto g = sem_initial_guess(h, dense_operator(A), b);
  // Coefficients reproduce x0 from the kept columns.
  VectorXc rebuilt = VectorXc::Zero(24);
  for (std::size_t i = 0; i < g.coefficients.size(); ++i) rebuilt += g.coefficients[i] * h[i];
  CHECK((rebuilt - g.x0).norm() < 1e-12 * g.x0.norm());
  const double res = (A * g.x0 - b).norm();
  CHECK(res <= b.norm());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const VectorXc y = A * h[i];
    const Complex s = y.dot(b) / y.squaredNorm();
    CHECK(res <= (y * s - b).norm() * (1 + 1e-12));
  }
}

TEST_CASE("sem: dependent columns are dropped") {
  const MatrixXc A = random_matrix(16, 15, 3.0);
  SolutionHistory h(4);
  const VectorXc a = random_vector(16, 50);
  h.push(a);
  h.push(Complex(2.0, -1.0) * a);
  h.push(random_vector(16, 51));
  const auto g = sem_initial_guess(h, dense_operator(A), random_vector(16, 52));
  CHECK(g.kept_columns == 2);
  CHECK(g.x0.allFinite());
}
