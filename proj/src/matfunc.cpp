#include "epirk/matfunc.hpp"

#include <cmath>
#include <stdexcept>

namespace epirk {

namespace {

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double phi_scalar(int k, double z) {
  if (k < 0 || k > 8) throw std::invalid_argument("phi_scalar: k out of range");
  if (k == 0) return std::exp(z);
  if (std::abs(z) < 0.5) {
    // Taylor sum_i z^i/(i+k)!; the recurrence loses digits to cancellation
    // here. 30 terms put the remainder far below double precision at |z|=1/2.
    double term = 1.0 / factorial(k);
    double sum = term;
    for (int i = 1; i < 30; ++i) {
      term *= z / (i + k);
      sum += term;
    }
    return sum;
  }
  double phi = std::exp(z);
  for (int m = 1; m <= k; ++m) phi = (phi - 1.0 / factorial(m - 1)) / z;
  return phi;
}

Eigen::MatrixXd exp_matrix(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("exp_matrix: not square");
  if (!A.allFinite()) throw std::invalid_argument("exp_matrix: non-finite input");
  static const double theta13 = 5.371920351148152;
  static const double b[] = {64764752532480000.0, 32382376266240000.0,
                             7771770303897600.0,  1187353796428800.0,
                             129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,
                             1323241920.0,        40840800.0,
                             960960.0,            16380.0,
                             182.0,               1.0};

  const double nrm = A.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
  const Eigen::MatrixXd As = A / std::ldexp(1.0, s);

  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd A2 = As * As;
  const Eigen::MatrixXd A4 = A2 * A2;
  const Eigen::MatrixXd A6 = A2 * A4;
  const Eigen::MatrixXd U =
      As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
            b[3] * A2 + b[1] * I);
  const Eigen::MatrixXd V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) +
                            b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  Eigen::MatrixXd X = (V - U).partialPivLu().solve(V + U);
  if (!X.allFinite()) throw std::runtime_error("exp_matrix: Pade solve failed");
  for (int i = 0; i < s; ++i) X = X * X;
  if (!X.allFinite()) throw std::runtime_error("exp_matrix: overflow in squaring");
  return X;
}

Eigen::MatrixXd phi_chain_action(const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& b, int p) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n + p, n + p);
  W.topLeftCorner(n, n) = A;
  W.block(0, n, n, 1) = b;
  for (int j = 0; j < p - 1; ++j) W(n + j, n + j + 1) = 1.0;
  const Eigen::MatrixXd E = exp_matrix(W);
  return E.block(0, n, n, p);
}

std::vector<Eigen::MatrixXd> phi_matrices(const Eigen::MatrixXd& A, int kmax) {
  const Eigen::Index n = A.rows();
  if (kmax == 0) return {exp_matrix(A)};
  // Block companion: W(0,0) = A, W(j, j+1) = I; exp(W) has top block row
  // [exp(A), phi_1(A), ..., phi_kmax(A)].
  const Eigen::Index N = n * (kmax + 1);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(N, N);
  W.topLeftCorner(n, n) = A;
  for (int j = 0; j < kmax; ++j)
    W.block(j * n, (j + 1) * n, n, n).setIdentity();
  const Eigen::MatrixXd E = exp_matrix(W);
  std::vector<Eigen::MatrixXd> out;
  out.reserve(kmax + 1);
  for (int k = 0; k <= kmax; ++k) out.push_back(E.block(0, k * n, n, n));
  return out;
}

Eigen::MatrixXd phi_matrix(const Eigen::MatrixXd& A, int k) {
  return phi_matrices(A, k).back();
}

double psi_tilde(std::span<const double> prow) {
  double s = 0;
  for (std::size_t k = 1; k <= prow.size(); ++k)
    s += prow[k - 1] / factorial(static_cast<int>(k));
  return s;
}

Eigen::MatrixXd psi_matrix(std::span<const double> prow,
                           const Eigen::MatrixXd& A, double hg) {
  const auto phis = phi_matrices(hg * A, static_cast<int>(prow.size()));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(A.rows(), A.cols());
  for (std::size_t k = 1; k <= prow.size(); ++k)
    if (prow[k - 1] != 0) out += prow[k - 1] * phis[k];
  return out;
}

Eigen::VectorXd psi_action(std::span<const double> prow,
                           const Eigen::MatrixXd& A, double hg,
                           const Eigen::VectorXd& v) {
  if (v.norm() == 0) return Eigen::VectorXd::Zero(v.size());
  const int p = static_cast<int>(prow.size());
  const Eigen::MatrixXd cols = phi_chain_action(hg * A, v, p);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (int k = 1; k <= p; ++k)
    if (prow[k - 1] != 0) out += prow[k - 1] * cols.col(k - 1);
  return out;
}

}  // namespace epirk
