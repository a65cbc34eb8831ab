// Benchmark ODE systems and the reference solver used to score them.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace epirk {

struct Problem {
  std::string name;
  Eigen::Index dim = 0;
  double t0 = 0, tf = 1;  // default integration span
  Eigen::VectorXd y0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f;
  // Absent (empty function) when the dimension makes a dense matrix
  // unreasonable; check before calling.
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jac_dense;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> jac_diag;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
      jac_vp;  // (y, v) -> J(y) v
};

// Cyclic advection model with constant forcing; dense Jacobian is a cyclic
// 4-band. y0 is the raw unperturbed rest state; the registry entry carries
// the spun-up state from lorenz96_initial instead.
Problem lorenz96(int n = 40, double forcing = 8.0);

// Rest state plus a 0.01 kick on component 20, integrated over [0, 0.3] by
// the reference solver.
Eigen::VectorXd lorenz96_initial();

// Reaction-diffusion on the unit square, 5-point Laplacian, Neumann walls by
// mirror ghosts, grid includes the boundary points.
Problem allen_cahn(int nx, int ny, double alpha = 0.01, double gamma = 1.0);

// Dormand-Prince 5(4) with atol = rtol = tol.
Eigen::VectorXd reference_solve(const Problem& prob, const Eigen::VectorXd& y0,
                                double t0, double tf, double tol = 1e-12);

// Registry: "lorenz96", "allencahn-64", "allencahn-256".
const Problem& find_problem(std::string_view name);
std::vector<std::string> problem_names();

}  // namespace epirk
