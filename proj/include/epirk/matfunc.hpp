// Dense matrix exponential and the phi/psi function family.
//
// phi_0(z) = exp(z), phi_{k+1}(z) = (phi_k(z) - 1/k!)/z, phi_k(0) = 1/k!.
// psi_j is the method-specific combination sum_k prow[k-1] * phi_k; its
// value at zero is psi_tilde(prow) * I with psi_tilde = sum_k prow[k-1]/k!.
//
// Matrix phi values always come from one exponential of an augmented matrix,
// never from the recurrence (the Hessenberg inputs may be near singular).
#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace epirk {

double phi_scalar(int k, double z);  // k in 0..8

// Scaling-and-squaring Pade approximant. Throws on non-finite input or when
// the Pade denominator solve produces non-finite entries.
Eigen::MatrixXd exp_matrix(const Eigen::MatrixXd& A);

// Columns [phi_1(A)b, ..., phi_p(A)b] from one exponential of order n+p:
// exp([[A, b e1^T], [0, K]]) with K the p-by-p upshift holds them in its
// top-right block.
Eigen::MatrixXd phi_chain_action(const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& b, int p);

// {phi_0(A), ..., phi_kmax(A)} from one exponential of the (kmax+1)n block
// companion form.
std::vector<Eigen::MatrixXd> phi_matrices(const Eigen::MatrixXd& A, int kmax);

Eigen::MatrixXd phi_matrix(const Eigen::MatrixXd& A, int k);

double psi_tilde(std::span<const double> prow);

// sum_k prow[k-1] * phi_k(hg*A), k = 1..prow.size()
Eigen::MatrixXd psi_matrix(std::span<const double> prow,
                           const Eigen::MatrixXd& A, double hg);

// psi(hg*A)v through phi_chain_action; the zero vector maps to zero.
Eigen::VectorXd psi_action(std::span<const double> prow,
                           const Eigen::MatrixXd& A, double hg,
                           const Eigen::VectorXd& v);

}  // namespace epirk
