#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "epirk/problems.hpp"

using namespace epirk;

TEST_CASE("cyclic advection model: registry entry") {
  const Problem& p = find_problem("lorenz96");
  CHECK(p.dim == 40);
  CHECK(p.t0 == 0.0);
  CHECK(p.tf == 1.8);
  REQUIRE(p.y0.size() == 40);
}

TEST_CASE("cyclic advection model: uniform state is a fixed point") {
  const Problem p = lorenz96();
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(40, 8.0);
  CHECK(p.f(u).norm() == 0.0);
}

TEST_CASE("cyclic advection model: jacobian pieces agree") {
  const Problem p = lorenz96();
  Eigen::VectorXd y(40);
  for (int i = 0; i < 40; ++i) y(i) = 8.0 + std::sin(0.7 * i);

  const Eigen::MatrixXd J = p.jac_dense(y);
  // Directional derivative against a central difference; the right-hand side
  // is quadratic so the difference is exact up to roundoff.
  Eigen::VectorXd v(40);
  for (int i = 0; i < 40; ++i) v(i) = std::cos(1.3 * i);
  const double eps = 1e-6;
  const Eigen::VectorXd fd = (p.f(y + eps * v) - p.f(y - eps * v)) / (2 * eps);
  CHECK((p.jac_vp(y, v) - fd).norm() / fd.norm() < 1e-8);
  CHECK((J * v - p.jac_vp(y, v)).norm() / v.norm() < 1e-12);

  const Eigen::VectorXd d = p.jac_diag(y);
  for (int i = 0; i < 40; ++i) {
    CHECK(d(i) == -1.0);
    CHECK(J(i, i) == -1.0);
  }
  CHECK((J.cwiseAbs().array() > 0.0).count() == 4 * 40);
}

TEST_CASE("cyclic advection model: spun-up start is deterministic and developed") {
  const Eigen::VectorXd a = lorenz96_initial();
  const Eigen::VectorXd b = lorenz96_initial();
  CHECK((a - b).norm() == 0.0);
  // The seeded bump must have evolved, not just sat at the fixed point.
  CHECK((a - Eigen::VectorXd::Constant(40, 8.0)).norm() > 1e-3);
  CHECK(std::abs(a.maxCoeff() - a.minCoeff()) > 1e-3);
}

TEST_CASE("reaction-diffusion model: registry entries") {
  const Problem& p64 = find_problem("allencahn-64");
  CHECK(p64.dim == 64 * 64);
  CHECK(p64.tf == 1.2);
  CHECK(bool(p64.jac_dense));
  const Problem& p256 = find_problem("allencahn-256");
  CHECK(p256.dim == 256 * 256);
  CHECK(!p256.jac_dense);  // too large for a dense matrix
}

TEST_CASE("reaction-diffusion model: constant phases are equilibria") {
  const Problem p = allen_cahn(16, 16);
  for (double c : {0.0, 1.0, -1.0}) {
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(p.dim, c);
    CHECK(p.f(u).norm() < 1e-12);
  }
}

TEST_CASE("reaction-diffusion model: jacobian pieces agree on a small grid") {
  const Problem p = allen_cahn(8, 8);
  Eigen::VectorXd y(p.dim);
  for (int i = 0; i < p.dim; ++i) y(i) = 0.3 * std::sin(0.9 * i);

  const Eigen::MatrixXd J = p.jac_dense(y);
  const Eigen::VectorXd d = p.jac_diag(y);
  for (int i = 0; i < p.dim; ++i)
    CHECK(J(i, i) == doctest::Approx(d(i)).epsilon(1e-13));

  Eigen::VectorXd v(p.dim);
  for (int i = 0; i < p.dim; ++i) v(i) = std::cos(0.31 * i);
  CHECK((J * v - p.jac_vp(y, v)).norm() / v.norm() < 1e-11);

  const double eps = 1e-6;
  const Eigen::VectorXd fd = (p.f(y + eps * v) - p.f(y - eps * v)) / (2 * eps);
  CHECK((p.jac_vp(y, v) - fd).norm() / fd.norm() < 1e-8);
}

TEST_CASE("reaction-diffusion model: spatially uniform states follow the scalar law") {
  // With no gradients the reaction u' = u - u^3 has the closed form
  // u(t)^-2 = 1 + (u0^-2 - 1) e^(-2t).
  const Problem p = allen_cahn(8, 8, 0.01, 1.0);
  const double u0 = 0.4;
  const Eigen::VectorXd y0 = Eigen::VectorXd::Constant(p.dim, u0);
  const double t1 = 0.5;
  const Eigen::VectorXd y1 = reference_solve(p, y0, 0.0, t1, 1e-12);
  const double w = 1.0 + (1.0 / (u0 * u0) - 1.0) * std::exp(-2.0 * t1);
  const double expect = 1.0 / std::sqrt(w);
  for (int i = 0; i < p.dim; i += 13)
    CHECK(y1(i) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("reaction-diffusion model: start state matches its formula") {
  const Problem p = allen_cahn(4, 4);
  // u = 0.4 + 0.1 (x + y) + 0.1 sin(10x) sin(20y) on the unit square corners
  const double dx = 1.0 / 3.0;
  auto expect = [&](int i, int j) {
    const double x = i * dx, y = j * dx;
    return 0.4 + 0.1 * (x + y) + 0.1 * std::sin(10 * x) * std::sin(20 * y);
  };
  CHECK(p.y0(0) == doctest::Approx(expect(0, 0)));
  CHECK(p.y0(3) == doctest::Approx(expect(3, 0)));
  CHECK(p.y0(4 * 3) == doctest::Approx(expect(0, 3)));
  CHECK(p.y0(15) == doctest::Approx(expect(3, 3)));
}

TEST_CASE("reference solver: linear decay to ten digits") {
  Problem p;
  p.name = "decay";
  p.dim = 1;
  p.t0 = 0;
  p.tf = 1;
  p.y0 = Eigen::VectorXd::Constant(1, 1.0);
  p.f = [](const Eigen::VectorXd& y) { return Eigen::VectorXd(-y); };
  const Eigen::VectorXd y1 = reference_solve(p, p.y0, 0.0, 1.0, 1e-12);
  CHECK(y1(0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("reference solver: empty span returns the start state") {
  const Problem& p = find_problem("lorenz96");
  const Eigen::VectorXd y = reference_solve(p, p.y0, 0.5, 0.5, 1e-12);
  CHECK((y - p.y0).norm() == 0.0);
}

TEST_CASE("registry: reserved and unknown names") {
  CHECK_THROWS_AS(find_problem("swe"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(find_problem("swe"),
                       doctest::Contains("not implemented"),
                       std::invalid_argument);
  CHECK_THROWS_AS(find_problem("heat"), std::invalid_argument);
  CHECK(problem_names().size() == 3);
}
