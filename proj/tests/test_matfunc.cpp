#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "epirk/matfunc.hpp"

using namespace epirk;

namespace {

// Plain truncated series, independent of the augmented-matrix route.
Eigen::MatrixXd phi_taylor(const Eigen::MatrixXd& A, int k, int terms) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd pow = Eigen::MatrixXd::Identity(n, n);
  double fact = 1;
  for (int j = 1; j <= k; ++j) fact *= j;
  for (int i = 0; i < terms; ++i) {
    sum += pow / fact;
    pow = pow * A;
    fact *= i + k + 1;
  }
  return sum;
}

Eigen::MatrixXd random_matrix(int n, double scale, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = scale * g(rng);
  return A;
}

}  // namespace

TEST_CASE("phi_scalar reference values") {
  CHECK(phi_scalar(0, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(phi_scalar(1, 1.0) ==
        doctest::Approx(1.71828182845904523536).epsilon(1e-15));
  CHECK(phi_scalar(1, -2.0) ==
        doctest::Approx(0.432332358381693654053).epsilon(1e-15));
  // Taylor branch (|z| < 0.5)
  CHECK(phi_scalar(3, 0.37) ==
        doctest::Approx(0.1832984159541283159).epsilon(1e-15));
  CHECK(phi_scalar(2, 0.37) ==
        doctest::Approx(0.5678204139030274769).epsilon(1e-15));
  // Recurrence branch
  CHECK(phi_scalar(4, 3.7) ==
        doctest::Approx(0.1091695841147090557).epsilon(1e-14));
}

TEST_CASE("phi_scalar at zero is 1/k!") {
  double fact = 1;
  for (int k = 0; k <= 8; ++k) {
    if (k > 0) fact *= k;
    CHECK(phi_scalar(k, 0.0) == doctest::Approx(1.0 / fact).epsilon(1e-15));
  }
}

TEST_CASE("phi_scalar recurrence consistency") {
  for (double z : {-3.0, -0.9, -0.3, 0.2, 0.45, 0.55, 1.7, 4.0}) {
    double fact = 1;
    for (int k = 0; k <= 6; ++k) {
      if (k > 0) fact *= k;
      const double lhs = phi_scalar(k + 1, z);
      const double rhs = (phi_scalar(k, z) - 1.0 / fact) / z;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
  }
}

TEST_CASE("phi_scalar rejects out-of-range k") {
  CHECK_THROWS_AS(phi_scalar(9, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(phi_scalar(-1, 1.0), std::invalid_argument);
}

TEST_CASE("exp_matrix basics") {
  const Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(3, 3);
  CHECK((exp_matrix(Z) - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-15);

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3, 3);
  D.diagonal() << -1.0, 0.5, 2.0;
  const Eigen::MatrixXd E = exp_matrix(D);
  for (int i = 0; i < 3; ++i)
    CHECK(E(i, i) == doctest::Approx(std::exp(D(i, i))).epsilon(1e-14));

  // Nilpotent: exp(N) = I + N exactly.
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(2, 2);
  N(0, 1) = 3.25;
  const Eigen::MatrixXd EN = exp_matrix(N);
  CHECK(EN(0, 0) == doctest::Approx(1.0));
  CHECK(EN(0, 1) == doctest::Approx(3.25));
  CHECK(EN(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("exp_matrix semigroup property through the squaring path") {
  // Norm far above the Pade threshold exercises scaling and squaring.
  const Eigen::MatrixXd A = random_matrix(8, 4.0, 11);
  const Eigen::MatrixXd E1 = exp_matrix(A);
  const Eigen::MatrixXd Eh = exp_matrix(Eigen::MatrixXd(0.5 * A));
  CHECK((E1 - Eh * Eh).norm() / E1.norm() < 1e-12);
}

TEST_CASE("exp_matrix input validation") {
  CHECK_THROWS_AS(exp_matrix(Eigen::MatrixXd::Zero(2, 3)),
                  std::invalid_argument);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(exp_matrix(bad), std::invalid_argument);
}

TEST_CASE("phi_matrix matches the Taylor series") {
  const Eigen::MatrixXd A = random_matrix(6, 0.3, 21);
  for (int k = 1; k <= 4; ++k) {
    const Eigen::MatrixXd P = phi_matrix(A, k);
    const Eigen::MatrixXd T = phi_taylor(A, k, 40);
    CHECK((P - T).norm() / T.norm() < 1e-13);
  }
}

TEST_CASE("phi_matrices agree with phi_matrix and exp_matrix") {
  const Eigen::MatrixXd A = random_matrix(5, 0.8, 33);
  const auto all = phi_matrices(A, 3);
  REQUIRE(all.size() == 4);
  CHECK((all[0] - exp_matrix(A)).norm() < 1e-12 * all[0].norm());
  for (int k = 1; k <= 3; ++k)
    CHECK((all[k] - phi_matrix(A, k)).norm() < 1e-12);
}

TEST_CASE("phi_chain_action columns equal phi_matrix times the vector") {
  const Eigen::MatrixXd A = random_matrix(7, 0.6, 5);
  Eigen::VectorXd b(7);
  for (int i = 0; i < 7; ++i) b(i) = std::sin(1.0 + i);
  const Eigen::MatrixXd cols = phi_chain_action(A, b, 3);
  REQUIRE(cols.rows() == 7);
  REQUIRE(cols.cols() == 3);
  for (int k = 1; k <= 3; ++k) {
    const Eigen::VectorXd want = phi_matrix(A, k) * b;
    CHECK((cols.col(k - 1) - want).norm() / want.norm() < 1e-12);
  }
}

TEST_CASE("psi_tilde hand values") {
  const double one[] = {1.0};
  CHECK(psi_tilde(one) == doctest::Approx(1.0));
  const double row[] = {1.0, 2.0, 3.0};
  CHECK(psi_tilde(row) == doctest::Approx(2.5));  // 1/1! + 2/2! + 3/3!
}

TEST_CASE("psi with a unit weight row reduces to a single phi") {
  const Eigen::MatrixXd A = random_matrix(5, 0.5, 8);
  const double e1[] = {1.0};
  CHECK((psi_matrix(e1, A, 1.0) - phi_matrix(A, 1)).norm() < 1e-12);
  const double e2[] = {0.0, 1.0};
  CHECK((psi_matrix(e2, A, 1.0) - phi_matrix(A, 2)).norm() < 1e-12);
}

TEST_CASE("psi_matrix scalar consistency") {
  // 1x1 matrix: psi of the scalar must match the phi_scalar combination.
  Eigen::MatrixXd A(1, 1);
  A(0, 0) = 1.0;
  const double row[] = {4.0 / 3.0};
  const Eigen::MatrixXd P = psi_matrix(row, A, 1.0);
  CHECK(P(0, 0) == doctest::Approx(2.291042437945393647).epsilon(1e-14));
}

TEST_CASE("psi_action matches psi_matrix and honors the scaling") {
  const Eigen::MatrixXd A = random_matrix(6, 0.7, 13);
  Eigen::VectorXd v(6);
  for (int i = 0; i < 6; ++i) v(i) = std::cos(0.5 * i) + 0.1;
  const double row[] = {1.0, 0.5, -0.25};
  const double hg = 0.73;
  const Eigen::VectorXd got = psi_action(row, A, hg, v);
  const Eigen::VectorXd want = psi_matrix(row, A, hg) * v;
  CHECK((got - want).norm() / want.norm() < 1e-12);
}

TEST_CASE("psi_action maps the zero vector to zero") {
  const Eigen::MatrixXd A = random_matrix(4, 0.5, 2);
  const double row[] = {1.0, 1.0};
  const Eigen::VectorXd out =
      psi_action(row, A, 0.9, Eigen::VectorXd::Zero(4));
  CHECK(out.norm() == 0.0);
}
