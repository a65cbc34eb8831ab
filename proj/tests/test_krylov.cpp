#include "doctest.h"

#include <random>
#include <stdexcept>

#include "epirk/krylov.hpp"
#include "epirk/matfunc.hpp"

using namespace epirk;

namespace {

Eigen::MatrixXd random_matrix(int n, double scale, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = scale * g(rng);
  return A;
}

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

LinearOperator matvec(const Eigen::MatrixXd& A) {
  return [A](const Eigen::VectorXd& v) { return Eigen::VectorXd(A * v); };
}

}  // namespace

TEST_CASE("arnoldi basis is orthonormal and reproduces the projection") {
  const int n = 24;
  const Eigen::MatrixXd A = random_matrix(n, 1.0, 41);
  const Eigen::VectorXd b = random_vector(n, 42);
  const KrylovBasis K = arnoldi(matvec(A), b, ArnoldiFixed{8});
  REQUIRE(K.m == 8);
  CHECK((K.V.transpose() * K.V - Eigen::MatrixXd::Identity(8, 8)).norm() <
        1e-10);
  CHECK((K.H - K.V.transpose() * A * K.V).norm() < 1e-12 * A.norm());
  CHECK(K.beta == doctest::Approx(b.norm()));
  CHECK((K.V.col(0) - b / b.norm()).norm() < 1e-14);
}

TEST_CASE("happy breakdown on an invariant seed") {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D.diagonal() << 2.0, 3.0;
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(2);
  e1(0) = 1.0;
  const KrylovBasis K = arnoldi(matvec(D), e1, ArnoldiFixed{2});
  CHECK(K.breakdown);
  CHECK(K.m == 1);
  CHECK(K.H(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("breakdown basis spans an invariant subspace and phi is exact there") {
  // A block-diagonal operator and a seed inside the first block: the basis
  // stops at the block size and the projected phi action is exact.
  const int n = 12, k = 3;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  A.topLeftCorner(k, k) = random_matrix(k, 1.0, 7);
  A.bottomRightCorner(n - k, n - k) = random_matrix(n - k, 1.0, 8);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b.head(k) = random_vector(k, 9);
  const KrylovBasis K = arnoldi(matvec(A), b, ArnoldiFixed{10});
  CHECK(K.breakdown);
  CHECK(K.m <= k);
  const double row[] = {1.0};
  const Eigen::VectorXd got = psi_action_projected(K, row, 0.4, b);
  const Eigen::VectorXd want = psi_action(row, A, 0.4, b);
  CHECK((got - want).norm() / want.norm() < 1e-12);
}

TEST_CASE("full-dimension basis reproduces dense phi and A actions") {
  const int n = 10;
  const Eigen::MatrixXd A = random_matrix(n, 0.8, 17);
  const Eigen::VectorXd b = random_vector(n, 18);
  const KrylovBasis K = arnoldi(matvec(A), b, ArnoldiFixed{n});
  REQUIRE(K.m == n);
  const Eigen::VectorXd v = random_vector(n, 19);
  CHECK((projected_apply(K, v) - A * v).norm() / v.norm() < 1e-10);
  const double row[] = {1.0, 0.5};
  const Eigen::VectorXd got = psi_action_projected(K, row, 0.6, v);
  const Eigen::VectorXd want = psi_action(row, A, 0.6, v);
  CHECK((got - want).norm() / want.norm() < 1e-10);
}

TEST_CASE("adaptive stop uses fewer vectors at looser tolerance") {
  const int n = 40;
  const Eigen::MatrixXd A = random_matrix(n, 1.0, 55);
  const Eigen::VectorXd b = random_vector(n, 56);
  const KrylovBasis loose = arnoldi(matvec(A), b, ArnoldiAdaptive{1e-2, 40, 0.1});
  const KrylovBasis tight = arnoldi(matvec(A), b, ArnoldiAdaptive{1e-10, 40, 0.1});
  CHECK(loose.tol_met);
  CHECK(tight.tol_met);
  CHECK(loose.m <= tight.m);
  CHECK(loose.m >= 1);
}

TEST_CASE("adaptive flags an exhausted cap instead of throwing") {
  const int n = 40;
  const Eigen::MatrixXd A = random_matrix(n, 3.0, 60);
  const Eigen::VectorXd b = random_vector(n, 61);
  const KrylovBasis K = arnoldi(matvec(A), b, ArnoldiAdaptive{1e-14, 3, 1.0});
  CHECK(!K.tol_met);
  CHECK(K.m == 3);
}

TEST_CASE("arnoldi rejects a zero seed") {
  const Eigen::MatrixXd A = random_matrix(4, 1.0, 70);
  CHECK_THROWS_AS(arnoldi(matvec(A), Eigen::VectorXd::Zero(4), ArnoldiFixed{2}),
                  std::invalid_argument);
}

TEST_CASE("psi_action_projected splits range and complement correctly") {
  // For v orthogonal to the basis the action reduces to psi_tilde * v.
  const int n = 16;
  const Eigen::MatrixXd A = random_matrix(n, 1.0, 80);
  const Eigen::VectorXd b = random_vector(n, 81);
  const KrylovBasis K = arnoldi(matvec(A), b, ArnoldiFixed{5});
  Eigen::VectorXd v = random_vector(n, 82);
  v -= K.V * (K.V.transpose() * v);
  const double row[] = {1.0, 2.0, 3.0};
  const Eigen::VectorXd got = psi_action_projected(K, row, 0.3, v);
  CHECK((got - 2.5 * v).norm() / v.norm() < 1e-12);
}
