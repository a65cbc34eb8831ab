#include "epirk/integrators.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>

#include "epirk/krylov.hpp"
#include "epirk/matfunc.hpp"

namespace epirk {

namespace {

// Tableau entries lowered to double once per step.
struct DTab {
  double a[2][3] = {};
  double b[3] = {}, bhat[3] = {};
  double g[3][3] = {};
  double p[3][3] = {};
  double ptilde[3] = {};

  explicit DTab(const Tableau& t) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) a[i][j] = to_double(t.a[i][j]);
    for (int j = 0; j < 3; ++j) {
      b[j] = to_double(t.b[j]);
      bhat[j] = to_double(t.bhat[j]);
      for (int k = 0; k < 3; ++k) {
        g[j][k] = to_double(t.g[j][k]);
        p[j][k] = to_double(t.p[j][k]);
      }
    }
    for (int j = 0; j < 3; ++j)
      ptilde[j] = psi_tilde(std::span<const double>(p[j], j + 1));
  }

  std::span<const double> prow(int j) const {  // j in 1..3
    return {p[j - 1], static_cast<std::size_t>(j)};
  }
};

struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Applies psi_j(g h A)v for the step's Jacobian approximation. Slots name
// the three remainder vectors of a step (0: h f(y); 1: h * first remainder
// difference; 2: h * second difference) so per-vector bases can be cached.
class PsiOp {
 public:
  virtual ~PsiOp() = default;
  virtual Eigen::VectorXd psi(int slot, std::span<const double> prow,
                              double gh, const Eigen::VectorXd& v) = 0;
  virtual Eigen::VectorXd amul(const Eigen::VectorXd& v) = 0;

  std::vector<int> dims;
  bool truncated = false;
};

class DensePsi final : public PsiOp {
 public:
  explicit DensePsi(Eigen::MatrixXd J) : J_(std::move(J)) {}
  Eigen::VectorXd psi(int, std::span<const double> prow, double gh,
                      const Eigen::VectorXd& v) override {
    return psi_action(prow, J_, gh, v);
  }
  Eigen::VectorXd amul(const Eigen::VectorXd& v) override { return J_ * v; }

 private:
  Eigen::MatrixXd J_;
};

class DiagonalPsi final : public PsiOp {
 public:
  explicit DiagonalPsi(Eigen::VectorXd d) : d_(std::move(d)) {}
  Eigen::VectorXd psi(int, std::span<const double> prow, double gh,
                      const Eigen::VectorXd& v) override {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      double s = 0;
      for (std::size_t k = 1; k <= prow.size(); ++k)
        s += prow[k - 1] * phi_scalar(static_cast<int>(k), gh * d_(i));
      out(i) = s * v(i);
    }
    return out;
  }
  Eigen::VectorXd amul(const Eigen::VectorXd& v) override {
    return d_.cwiseProduct(v);
  }

 private:
  Eigen::VectorXd d_;
};

class IdentityPsi final : public PsiOp {
 public:
  Eigen::VectorXd psi(int, std::span<const double> prow, double gh,
                      const Eigen::VectorXd& v) override {
    double s = 0;
    for (std::size_t k = 1; k <= prow.size(); ++k)
      s += prow[k - 1] * phi_scalar(static_cast<int>(k), gh);
    return s * v;
  }
  Eigen::VectorXd amul(const Eigen::VectorXd& v) override { return v; }
};

class ZeroPsi final : public PsiOp {
 public:
  Eigen::VectorXd psi(int, std::span<const double> prow, double,
                      const Eigen::VectorXd& v) override {
    return psi_tilde(prow) * v;
  }
  Eigen::VectorXd amul(const Eigen::VectorXd& v) override {
    return Eigen::VectorXd::Zero(v.size());
  }
};

class ProjectedPsi final : public PsiOp {
 public:
  ProjectedPsi(const LinearOperator& op, const Eigen::VectorXd& seed, int m) {
    basis_ = arnoldi(op, seed, ArnoldiFixed{m});
    dims.push_back(basis_.m);
    truncated = basis_.m < m;
  }
  Eigen::VectorXd psi(int, std::span<const double> prow, double gh,
                      const Eigen::VectorXd& v) override {
    return psi_action_projected(basis_, prow, gh, v);
  }
  Eigen::VectorXd amul(const Eigen::VectorXd& v) override {
    return projected_apply(basis_, v);
  }

 private:
  KrylovBasis basis_;
};

// Exact-Jacobian semantics with one adaptive Arnoldi basis per remainder
// vector, built on first use and reused across that vector's g scalings.
class ClassicalPsi final : public PsiOp {
 public:
  ClassicalPsi(LinearOperator op, double tol, int m_max,
               const std::array<double, 3>& taus)
      : op_(std::move(op)), tol_(tol), m_max_(m_max), taus_(taus) {}

  Eigen::VectorXd psi(int slot, std::span<const double> prow, double gh,
                      const Eigen::VectorXd& v) override {
    if (v.norm() == 0) return Eigen::VectorXd::Zero(v.size());
    if (!bases_[slot]) {
      bases_[slot] =
          arnoldi(op_, v, ArnoldiAdaptive{tol_, m_max_, taus_[slot]});
      dims.push_back(bases_[slot]->m);
      if (!bases_[slot]->tol_met)
        throw StepFailure("arnoldi tolerance not met within basis cap");
    }
    return psi_action_projected(*bases_[slot], prow, gh, v);
  }
  Eigen::VectorXd amul(const Eigen::VectorXd& v) override { return op_(v); }

 private:
  LinearOperator op_;
  double tol_;
  int m_max_;
  std::array<double, 3> taus_;  // step scaling each slot's basis must serve
  std::array<std::optional<KrylovBasis>, 3> bases_;
};

constexpr int kDenseDimCap = 512;

std::unique_ptr<PsiOp> make_psi_op(const Problem& prob,
                                   const Eigen::VectorXd& y, double h,
                                   const Eigen::VectorXd& f0,
                                   const JacobianMode& mode, const DTab& T) {
  JacobianKind kind = mode.kind;
  double tol = mode.tol;
  int m_max = mode.m_max;
  if (kind == JacobianKind::ExactDense &&
      (!prob.jac_dense || prob.dim > kDenseDimCap)) {
    // Dense exponentials stop paying for themselves well before this size;
    // adaptive projection keeps the exact-Jacobian semantics.
    kind = JacobianKind::ClassicalAdaptive;
    tol = 1e-9;
    m_max = 128;
  }
  switch (kind) {
    case JacobianKind::ExactDense:
      return std::make_unique<DensePsi>(prob.jac_dense(y));
    case JacobianKind::Diagonal:
      return std::make_unique<DiagonalPsi>(prob.jac_diag(y));
    case JacobianKind::Identity:
      return std::make_unique<IdentityPsi>();
    case JacobianKind::Zero:
      return std::make_unique<ZeroPsi>();
    case JacobianKind::KrylovProjected: {
      auto op = [&prob, y](const Eigen::VectorXd& v) { return prob.jac_vp(y, v); };
      return std::make_unique<ProjectedPsi>(op, f0, mode.m);
    }
    case JacobianKind::ClassicalAdaptive: {
      auto op = [&prob, y](const Eigen::VectorXd& v) { return prob.jac_vp(y, v); };
      const std::array<double, 3> taus = {
          h * std::max({T.g[0][0], T.g[1][0], T.g[2][0]}),
          h * std::max(T.g[1][1], T.g[2][1]),
          h * T.g[2][2],
      };
      return std::make_unique<ClassicalPsi>(op, tol, m_max, taus);
    }
  }
  throw std::logic_error("make_psi_op: unreachable");
}

StepResult failed_step(const Eigen::VectorXd& y, std::string reason) {
  StepResult res;
  res.ok = false;
  res.fail_reason = std::move(reason);
  res.y_next = res.y_embedded =
      Eigen::VectorXd::Constant(y.size(), std::numeric_limits<double>::quiet_NaN());
  return res;
}

StepResult trivial_step(const Eigen::VectorXd& y) {
  StepResult res;
  res.y_next = res.y_embedded = y;
  return res;
}

}  // namespace

StepResult epirk_w_step(const Problem& prob, const Eigen::VectorXd& y, double h,
                        const Tableau& tab, const JacobianMode& mode) {
  if (!(h > 0)) throw std::invalid_argument("epirk_w_step: h must be positive");
  // Same precondition as epirk_k_step: the reduced space cannot be smaller
  // than the order the scheme is built to reach.
  if (mode.kind == JacobianKind::KrylovProjected && mode.m < tab.design_order)
    throw std::invalid_argument("epirk_w_step: basis size " +
                                std::to_string(mode.m) +
                                " is below the order " +
                                std::to_string(tab.design_order));
  const DTab T(tab);
  try {
    const Eigen::VectorXd f0 = prob.f(y);
    if (!f0.allFinite()) return failed_step(y, "non-finite f(y)");
    if (f0.norm() == 0) return trivial_step(y);  // equilibrium

    auto op = make_psi_op(prob, y, h, f0, mode, T);
    const Eigen::VectorXd hf0 = h * f0;

    const Eigen::VectorXd Y1 =
        y + T.a[0][0] * op->psi(0, T.prow(1), h * T.g[0][0], hf0);
    if (!Y1.allFinite()) return failed_step(y, "non-finite stage 1");
    const Eigen::VectorXd d1 = prob.f(Y1) - f0 - op->amul(Y1 - y);

    const Eigen::VectorXd Y2 =
        y + T.a[1][0] * op->psi(0, T.prow(1), h * T.g[1][0], hf0) +
        T.a[1][1] * op->psi(1, T.prow(2), h * T.g[1][1], h * d1);
    if (!Y2.allFinite()) return failed_step(y, "non-finite stage 2");
    const Eigen::VectorXd d2 =
        prob.f(Y2) - f0 - op->amul(Y2 - y) - 2.0 * d1;

    const Eigen::VectorXd w1 = op->psi(0, T.prow(1), h * T.g[2][0], hf0);
    const Eigen::VectorXd w2 = op->psi(1, T.prow(2), h * T.g[2][1], h * d1);
    const Eigen::VectorXd w3 = op->psi(2, T.prow(3), h * T.g[2][2], h * d2);

    StepResult res;
    res.y_next = y + T.b[0] * w1 + T.b[1] * w2 + T.b[2] * w3;
    res.y_embedded = y + T.bhat[0] * w1 + T.bhat[1] * w2 + T.bhat[2] * w3;
    res.krylov_dims = op->dims;
    res.basis_truncated = op->truncated;
    if (!res.y_next.allFinite() || !res.y_embedded.allFinite())
      return failed_step(y, "non-finite result");
    return res;
  } catch (const StepFailure& e) {
    return failed_step(y, e.what());
  } catch (const std::runtime_error& e) {
    return failed_step(y, e.what());
  }
}

StepResult epirk_k_step(const Problem& prob, const Eigen::VectorXd& y, double h,
                        const Tableau& tab, int m) {
  if (!(h > 0)) throw std::invalid_argument("epirk_k_step: h must be positive");
  // The reduced space must carry at least as many vectors as the order the
  // scheme is built to reach; fewer cannot represent the needed moments.
  if (m < tab.design_order)
    throw std::invalid_argument("epirk_k_step: basis size " +
                                std::to_string(m) + " is below the order " +
                                std::to_string(tab.design_order));
  const DTab T(tab);
  try {
    const Eigen::VectorXd f0 = prob.f(y);
    if (!f0.allFinite()) return failed_step(y, "non-finite f(y)");
    if (f0.norm() == 0) return trivial_step(y);

    auto op = [&prob, &y](const Eigen::VectorXd& v) { return prob.jac_vp(y, v); };
    const KrylovBasis K = arnoldi(op, f0, ArnoldiFixed{m});
    const Eigen::MatrixXd& V = K.V;
    const Eigen::MatrixXd& H = K.H;

    const Eigen::VectorXd lam0 = V.transpose() * y;
    const Eigen::VectorXd eta0 = V.transpose() * f0;
    const Eigen::VectorXd yperp = y - V * lam0;
    const Eigen::VectorXd f0p = f0 - V * eta0;

    const Eigen::VectorXd lam1 =
        lam0 + h * T.a[0][0] * psi_action(T.prow(1), H, h * T.g[0][0], eta0);
    const Eigen::VectorXd Y1 =
        V * lam1 + yperp + (h * T.a[0][0] * T.ptilde[0]) * f0p;
    if (!Y1.allFinite()) return failed_step(y, "non-finite stage 1");
    const Eigen::VectorXd f1 = prob.f(Y1);
    const Eigen::VectorXd eta1 = V.transpose() * f1;
    const Eigen::VectorXd f1p = f1 - V * eta1;
    const Eigen::VectorXd d1 = (eta1 - eta0) - H * (lam1 - lam0);
    const Eigen::VectorXd rp1 = f1p - f0p;

    const Eigen::VectorXd lam2 =
        lam0 + h * T.a[1][0] * psi_action(T.prow(1), H, h * T.g[1][0], eta0) +
        h * T.a[1][1] * psi_action(T.prow(2), H, h * T.g[1][1], d1);
    const Eigen::VectorXd Y2 = V * lam2 + yperp +
                               (h * T.a[1][0] * T.ptilde[0]) * f0p +
                               (h * T.a[1][1] * T.ptilde[1]) * rp1;
    if (!Y2.allFinite()) return failed_step(y, "non-finite stage 2");
    const Eigen::VectorXd f2 = prob.f(Y2);
    const Eigen::VectorXd eta2 = V.transpose() * f2;
    const Eigen::VectorXd f2p = f2 - V * eta2;
    const Eigen::VectorXd d2 =
        (eta2 - 2.0 * eta1 + eta0) - H * (lam2 - 2.0 * lam1 + lam0);
    const Eigen::VectorXd rp2 = f2p - 2.0 * f1p + f0p;

    const Eigen::VectorXd w1 = psi_action(T.prow(1), H, h * T.g[2][0], eta0);
    const Eigen::VectorXd w2 = psi_action(T.prow(2), H, h * T.g[2][1], d1);
    const Eigen::VectorXd w3 = psi_action(T.prow(3), H, h * T.g[2][2], d2);

    StepResult res;
    res.y_next = V * (lam0 + h * (T.b[0] * w1 + T.b[1] * w2 + T.b[2] * w3)) +
                 yperp +
                 h * (T.b[0] * T.ptilde[0] * f0p + T.b[1] * T.ptilde[1] * rp1 +
                      T.b[2] * T.ptilde[2] * rp2);
    res.y_embedded =
        V * (lam0 + h * (T.bhat[0] * w1 + T.bhat[1] * w2 + T.bhat[2] * w3)) +
        yperp +
        h * (T.bhat[0] * T.ptilde[0] * f0p + T.bhat[1] * T.ptilde[1] * rp1 +
             T.bhat[2] * T.ptilde[2] * rp2);
    res.krylov_dims = {K.m};
    res.basis_truncated = K.m < m;
    if (!res.y_next.allFinite() || !res.y_embedded.allFinite())
      return failed_step(y, "non-finite result");
    return res;
  } catch (const std::runtime_error& e) {
    return failed_step(y, e.what());
  }
}

namespace {

StepResult dispatch_step(const Problem& prob, const Eigen::VectorXd& y,
                         double h, const Tableau& tab,
                         const JacobianMode& mode) {
  if (mode.kind == JacobianKind::KrylovProjected)
    return epirk_k_step(prob, y, h, tab, mode.m);
  return epirk_w_step(prob, y, h, tab, mode);
}

struct DimAccum {
  long long count = 0;
  double sumsq = 0;
  void add(const std::vector<int>& dims) {
    for (int d : dims) {
      ++count;
      sumsq += static_cast<double>(d) * d;
    }
  }
  void finalize(RunStats* stats) const {
    if (!stats) return;
    stats->projections = count;
    stats->krylov_rms = count ? std::sqrt(sumsq / static_cast<double>(count)) : 0.0;
  }
};

}  // namespace

Eigen::VectorXd integrate_fixed(const Problem& prob, const Tableau& tab,
                                const JacobianMode& mode,
                                const Eigen::VectorXd& y0, double t0, double tf,
                                double h, RunStats* stats) {
  if (tf == t0) return y0;
  if (!(h > 0) || tf < t0)
    throw std::invalid_argument("integrate_fixed: bad span or step");
  const double span = tf - t0;
  long long n = std::llround(span / h);
  if (n < 1) n = 1;
  const double hs = span / static_cast<double>(n);

  Eigen::VectorXd y = y0;
  DimAccum dims;
  for (long long i = 0; i < n; ++i) {
    StepResult res = dispatch_step(prob, y, hs, tab, mode);
    if (!res.ok || !res.y_next.allFinite()) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "integrate_fixed: step failed at t=%.6g",
                    t0 + static_cast<double>(i) * hs);
      throw std::runtime_error(std::string(buf) +
                               (res.fail_reason.empty() ? "" : ": " + res.fail_reason));
    }
    y = res.y_next;
    dims.add(res.krylov_dims);
    if (stats) ++stats->steps_accepted;
  }
  dims.finalize(stats);
  return y;
}

Eigen::VectorXd integrate_adaptive(const Problem& prob, const Tableau& tab,
                                   const JacobianMode& mode,
                                   const Eigen::VectorXd& y0, double t0,
                                   double tf, const ControllerConfig& cfg,
                                   RunStats* stats) {
  if (tf == t0) return y0;
  if (tf < t0) throw std::invalid_argument("integrate_adaptive: tf < t0");
  const double span = tf - t0;
  const double h_min = cfg.h_min > 0 ? cfg.h_min : 1e-12 * span;
  const double h_max = cfg.h_max > 0 ? cfg.h_max : span;
  double h = cfg.h0 > 0 ? cfg.h0 : 1e-3 * span;
  h = std::min(h, h_max);
  const double inv_expo = -1.0 / (tab.embedded_order + 1);
  const Eigen::Index n = y0.size();

  Eigen::VectorXd y = y0;
  double t = t0;
  DimAccum dims;
  // Endpoint snapping: within one ulp-scale tolerance of tf counts as done.
  const double t_end_eps = 1e-12 * span;

  while (t < tf - t_end_eps) {
    h = std::min(h, tf - t);
    int rejects = 0;
    for (;;) {
      if (h < h_min)
        throw std::runtime_error("integrate_adaptive: step size below h_min");
      StepResult res = dispatch_step(prob, y, h, tab, mode);
      dims.add(res.krylov_dims);

      double err = std::numeric_limits<double>::infinity();
      if (res.ok && res.y_next.allFinite() && res.y_embedded.allFinite()) {
        double acc = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double sc = cfg.atol + cfg.rtol * std::abs(res.y_next(i));
          const double q = (res.y_next(i) - res.y_embedded(i)) / sc;
          acc += q * q;
        }
        err = std::sqrt(acc / static_cast<double>(n));
      }

      if (err <= 1.0) {
        t += h;
        y = res.y_next;
        if (stats) ++stats->steps_accepted;
        const double fac =
            err == 0 ? cfg.fac_max : cfg.safety * std::pow(err, inv_expo);
        h = std::min(h_max, h * std::min(cfg.fac_max, std::max(cfg.fac_min, fac)));
        break;
      }

      if (stats) ++stats->steps_rejected;
      if (++rejects > cfg.max_rejects_per_step)
        throw std::runtime_error("integrate_adaptive: too many rejections");
      if (std::isinf(err)) {
        h *= 0.5;
      } else {
        const double fac = cfg.safety * std::pow(err, inv_expo);
        h *= std::min(cfg.fac_max, std::max(cfg.fac_min, fac));
      }
    }
  }
  dims.finalize(stats);
  return y;
}

JacobianMode parse_mode(std::string_view s) {
  if (s == "exact") return JacobianMode::exact();
  if (s == "diag") return JacobianMode::diagonal();
  if (s == "identity") return JacobianMode::identity();
  if (s == "zero") return JacobianMode::zero();
  if (s.rfind("krylov:", 0) == 0) {
    const std::string arg(s.substr(7));
    std::size_t pos = 0;
    int m = std::stoi(arg, &pos);
    if (pos != arg.size() || m < 1)
      throw std::invalid_argument("bad krylov basis size: " + arg);
    return JacobianMode::krylov(m);
  }
  if (s.rfind("classical:", 0) == 0) {
    const std::string arg(s.substr(10));
    std::size_t pos = 0;
    double tol = std::stod(arg, &pos);
    if (pos != arg.size() || !(tol > 0))
      throw std::invalid_argument("bad classical tolerance: " + arg);
    return JacobianMode::classical(tol);
  }
  throw std::invalid_argument("unknown jacobian mode: " + std::string(s));
}

std::string mode_string(const JacobianMode& mode) {
  char buf[48];
  switch (mode.kind) {
    case JacobianKind::ExactDense:
      return "exact";
    case JacobianKind::Diagonal:
      return "diag";
    case JacobianKind::Identity:
      return "identity";
    case JacobianKind::Zero:
      return "zero";
    case JacobianKind::KrylovProjected:
      std::snprintf(buf, sizeof buf, "krylov:%d", mode.m);
      return buf;
    case JacobianKind::ClassicalAdaptive:
      std::snprintf(buf, sizeof buf, "classical:%g", mode.tol);
      return buf;
  }
  return "?";
}

const Method& find_method(std::string_view name) {
  static const std::map<std::string, Method, std::less<>> reg = [] {
    std::map<std::string, Method, std::less<>> m;
    m.emplace("epirkw3a",
              Method{"epirkw3a", tableau_epirkw3a(), JacobianMode::exact()});
    m.emplace("epirkw3b",
              Method{"epirkw3b", tableau_epirkw3b(), JacobianMode::exact()});
    m.emplace("epirkk4",
              Method{"epirkk4", tableau_epirkk4(), JacobianMode::krylov(4)});
    m.emplace("epirkk4-classical",
              Method{"epirkk4-classical", tableau_epirkk4(),
                     JacobianMode::classical(1e-12)});
    return m;
  }();
  auto it = reg.find(name);
  if (it == reg.end())
    throw std::invalid_argument("unknown method: " + std::string(name));
  return it->second;
}

std::vector<std::string> method_names() {
  return {"epirkw3a", "epirkw3b", "epirkk4", "epirkk4-classical"};
}

}  // namespace epirk
