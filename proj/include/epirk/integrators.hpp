// Single steps of the three-stage exponential schemes and the fixed/adaptive
// drivers around them.
//
// The W step accepts any Jacobian approximation A through JacobianMode; its
// remainder r(z) = f(z) - f(y) - A(z - y) is what the psi-weighted
// corrections integrate. The K step is the reduced-space execution of the
// same update for A = V H V^T built from one Arnoldi run on (J, f(y)); the
// two agree to rounding for that choice of A.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "epirk/problems.hpp"
#include "epirk/tableau.hpp"

namespace epirk {

enum class JacobianKind {
  ExactDense,
  Diagonal,
  Identity,
  Zero,
  KrylovProjected,
  ClassicalAdaptive,
};

struct JacobianMode {
  JacobianKind kind = JacobianKind::ExactDense;
  int m = 4;           // KrylovProjected basis size
  double tol = 1e-12;  // ClassicalAdaptive Arnoldi stopping tolerance
  int m_max = 128;     // ClassicalAdaptive basis cap

  static JacobianMode exact() { return {JacobianKind::ExactDense, 0, 0, 0}; }
  static JacobianMode diagonal() { return {JacobianKind::Diagonal, 0, 0, 0}; }
  static JacobianMode identity() { return {JacobianKind::Identity, 0, 0, 0}; }
  static JacobianMode zero() { return {JacobianKind::Zero, 0, 0, 0}; }
  static JacobianMode krylov(int m) {
    return {JacobianKind::KrylovProjected, m, 0, 0};
  }
  static JacobianMode classical(double tol, int m_max = 128) {
    return {JacobianKind::ClassicalAdaptive, 0, tol, m_max};
  }
};

// "exact" | "diag" | "identity" | "zero" | "krylov:M" | "classical:TOL";
// throws std::invalid_argument on anything else.
JacobianMode parse_mode(std::string_view s);
std::string mode_string(const JacobianMode& mode);

struct StepResult {
  Eigen::VectorXd y_next;
  Eigen::VectorXd y_embedded;
  std::vector<int> krylov_dims;  // one entry per Arnoldi projection built
  bool basis_truncated = false;  // happy breakdown shrank a requested basis
  bool ok = true;                // false: reject and retry with smaller h
  std::string fail_reason;
};

StepResult epirk_w_step(const Problem& prob, const Eigen::VectorXd& y, double h,
                        const Tableau& tab, const JacobianMode& mode);

// Algorithm with one fixed-size Arnoldi projection per step; all stage
// arithmetic happens on m-vectors plus rank-one full-space corrections.
StepResult epirk_k_step(const Problem& prob, const Eigen::VectorXd& y, double h,
                        const Tableau& tab, int m);

struct ControllerConfig {
  double safety = 0.9;
  double fac_min = 0.2;
  double fac_max = 5.0;
  double h0 = 0;     // 0: 1e-3 * span
  double h_min = 0;  // 0: 1e-12 * span
  double h_max = 0;  // 0: span
  int max_rejects_per_step = 20;
  double atol = 1e-6;
  double rtol = 1e-6;
};

struct RunStats {
  long long steps_accepted = 0;
  long long steps_rejected = 0;
  long long projections = 0;
  double krylov_rms = 0;  // RMS basis size over all projections, 0 if none
};

Eigen::VectorXd integrate_fixed(const Problem& prob, const Tableau& tab,
                                const JacobianMode& mode,
                                const Eigen::VectorXd& y0, double t0, double tf,
                                double h, RunStats* stats = nullptr);

// Embedded-pair controller: err is the rms of (y - yhat)/(atol + rtol*|y|);
// accept iff err <= 1; h scales by safety*err^(-1/(p+1)) clamped to
// [fac_min, fac_max], with p the tableau's embedded order. Non-finite results
// halve h outright. Throws when h_min or the reject cap is hit.
Eigen::VectorXd integrate_adaptive(const Problem& prob, const Tableau& tab,
                                   const JacobianMode& mode,
                                   const Eigen::VectorXd& y0, double t0,
                                   double tf, const ControllerConfig& cfg,
                                   RunStats* stats = nullptr);

// Named method registry: a tableau plus the execution mode the name implies.
struct Method {
  std::string name;
  Tableau tableau;
  JacobianMode default_mode;
};

// "epirkw3a", "epirkw3b", "epirkk4" (projected, m=4), "epirkk4-classical"
// (same tableau, adaptive per-vector Arnoldi at 1e-12).
const Method& find_method(std::string_view name);
std::vector<std::string> method_names();

}  // namespace epirk
