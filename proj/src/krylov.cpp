#include "epirk/krylov.hpp"

#include <cmath>
#include <stdexcept>

#include "epirk/matfunc.hpp"

namespace epirk {

namespace {

using StopFn = std::function<bool(int m, const Eigen::Ref<const Eigen::MatrixXd>& H,
                                  double h_next)>;

// Grows the basis until stop returns true or m_cap is reached.
KrylovBasis arnoldi_core(const LinearOperator& op, const Eigen::VectorXd& b,
                         int m_cap, const StopFn& stop) {
  const double beta = b.norm();
  if (beta == 0) throw std::invalid_argument("arnoldi: zero seed vector");
  const Eigen::Index n = b.size();
  if (m_cap > n) m_cap = static_cast<int>(n);

  Eigen::MatrixXd V(n, m_cap + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m_cap + 1, m_cap);
  V.col(0) = b / beta;

  KrylovBasis out;
  out.beta = beta;
  const double happy_tol = 1e-12 * beta;

  int m = 0;
  bool done = false;
  while (!done) {
    Eigen::VectorXd w = op(V.col(m));
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= m; ++i) {
        const double c = V.col(i).dot(w);
        H(i, m) += c;
        w -= c * V.col(i);
      }
    }
    const double hnext = w.norm();
    H(m + 1, m) = hnext;
    ++m;

    out.m = m;
    out.h_next = hnext;
    if (hnext <= happy_tol) {
      out.breakdown = true;
      done = true;
    } else if (stop(m, H.topLeftCorner(m, m), hnext)) {
      done = true;
    } else if (m == m_cap) {
      out.tol_met = false;
      done = true;
    } else {
      V.col(m) = w / hnext;
    }
  }
  out.V = V.leftCols(m);
  out.H = H.topLeftCorner(m, m);
  return out;
}

}  // namespace

KrylovBasis arnoldi(const LinearOperator& op, const Eigen::VectorXd& b,
                    const ArnoldiFixed& policy) {
  return arnoldi_core(op, b, policy.m,
                      [&](int m, const Eigen::Ref<const Eigen::MatrixXd>&,
                          double) { return m >= policy.m; });
}

KrylovBasis arnoldi(const LinearOperator& op, const Eigen::VectorXd& b,
                    const ArnoldiAdaptive& policy) {
  auto stop = [&](int m, const Eigen::Ref<const Eigen::MatrixXd>& H,
                  double h_next) {
    const Eigen::VectorXd w =
        phi_chain_action(policy.tau * H, Eigen::VectorXd::Unit(m, 0), 1);
    return h_next * std::abs(w(m - 1)) <= policy.tol;
  };
  return arnoldi_core(op, b, policy.m_max, stop);
}

Eigen::VectorXd projected_apply(const KrylovBasis& basis,
                                const Eigen::VectorXd& v) {
  return basis.V * (basis.H * (basis.V.transpose() * v));
}

Eigen::VectorXd psi_action_projected(const KrylovBasis& basis,
                                     std::span<const double> prow, double hg,
                                     const Eigen::VectorXd& v) {
  const Eigen::VectorXd vt = basis.V.transpose() * v;
  const Eigen::VectorXd reduced = psi_action(prow, basis.H, hg, vt);
  return psi_tilde(prow) * (v - basis.V * vt) + basis.V * reduced;
}

}  // namespace epirk
