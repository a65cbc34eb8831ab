// Arnoldi bases of the Jacobian and psi-function actions of the projected
// operator A = V H V^T.
//
// Projection identities used throughout (small-space evaluation of functions
// of the full-space projected operator):
//   A^k        = V H^k V^T                       for k >= 1
//   phi_k(c A) = (1/k!)(I - V V^T) + V phi_k(c H) V^T
//   psi_j(c A) = ptilde_j (I - V V^T) + V psi_j(c H) V^T
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>

namespace epirk {

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct KrylovBasis {
  Eigen::MatrixXd V;  // n x m, orthonormal columns
  Eigen::MatrixXd H;  // m x m upper Hessenberg, H = V^T (op) V
  int m = 0;
  double beta = 0;    // norm of the seed vector
  double h_next = 0;  // subdiagonal (m+1, m) entry, kept for residuals
  bool breakdown = false;  // subspace became invariant before the size cap
  bool tol_met = true;     // false when Adaptive stopped at m_max instead
};

struct ArnoldiFixed {
  int m;
};

// Grow until h_next * |(phi_1(tau H) e1)_m| <= tol, where tau is the step
// scaling the basis will serve (h times the largest g among its uses). The
// seed norm cancels from this estimate, making it relative.
struct ArnoldiAdaptive {
  double tol;
  int m_max;
  double tau;
};

// Modified Gram-Schmidt with one reorthogonalization pass. Happy breakdown
// when a subdiagonal falls below 1e-12 * beta. Throws on a zero seed.
KrylovBasis arnoldi(const LinearOperator& op, const Eigen::VectorXd& b,
                    const ArnoldiFixed& policy);
KrylovBasis arnoldi(const LinearOperator& op, const Eigen::VectorXd& b,
                    const ArnoldiAdaptive& policy);

// V H V^T v
Eigen::VectorXd projected_apply(const KrylovBasis& basis,
                                const Eigen::VectorXd& v);

// psi_j(hg * V H V^T) v evaluated in the reduced space.
Eigen::VectorXd psi_action_projected(const KrylovBasis& basis,
                                     std::span<const double> prow, double hg,
                                     const Eigen::VectorXd& v);

}  // namespace epirk
