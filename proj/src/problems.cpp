#include "epirk/problems.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace epirk {

Problem lorenz96(int n, double forcing) {
  if (n < 4) throw std::invalid_argument("lorenz96: n must be at least 4");
  Problem p;
  p.name = "lorenz96";
  p.dim = n;
  p.t0 = 0;
  p.tf = 1.8;
  p.y0 = Eigen::VectorXd::Constant(n, forcing);

  auto wrap = [n](int j) { return ((j % n) + n) % n; };
  p.f = [n, forcing, wrap](const Eigen::VectorXd& y) {
    Eigen::VectorXd out(n);
    for (int j = 0; j < n; ++j)
      out(j) = -y(wrap(j - 1)) * (y(wrap(j - 2)) - y(wrap(j + 1))) - y(j) + forcing;
    return out;
  };
  p.jac_dense = [n, wrap](const Eigen::VectorXd& y) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      J(j, wrap(j - 2)) += -y(wrap(j - 1));
      J(j, wrap(j - 1)) += -(y(wrap(j - 2)) - y(wrap(j + 1)));
      J(j, j) += -1.0;
      J(j, wrap(j + 1)) += y(wrap(j - 1));
    }
    return J;
  };
  p.jac_diag = [n](const Eigen::VectorXd&) {
    return Eigen::VectorXd::Constant(n, -1.0);
  };
  p.jac_vp = [n, wrap](const Eigen::VectorXd& y, const Eigen::VectorXd& v) {
    Eigen::VectorXd out(n);
    for (int j = 0; j < n; ++j)
      out(j) = -y(wrap(j - 1)) * v(wrap(j - 2)) -
               (y(wrap(j - 2)) - y(wrap(j + 1))) * v(wrap(j - 1)) - v(j) +
               y(wrap(j - 1)) * v(wrap(j + 1));
    return out;
  };
  return p;
}

Eigen::VectorXd lorenz96_initial() {
  Problem raw = lorenz96();
  Eigen::VectorXd y = raw.y0;
  y(19) += 0.01;
  return reference_solve(raw, y, 0.0, 0.3);
}

Problem allen_cahn(int nx, int ny, double alpha, double gamma) {
  if (nx < 3 || ny < 3) throw std::invalid_argument("allen_cahn: grid too small");
  Problem p;
  p.name = "allencahn-" + std::to_string(nx);
  const int dim = nx * ny;
  p.dim = dim;
  p.t0 = 0;
  p.tf = 1.2;

  const double dx = 1.0 / (nx - 1);
  const double dy = 1.0 / (ny - 1);
  const double cx = 1.0 / (dx * dx);
  const double cy = 1.0 / (dy * dy);
  auto idx = [nx](int i, int j) { return j * nx + i; };

  p.y0.resize(dim);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x = i * dx, y = j * dy;
      p.y0(idx(i, j)) =
          0.4 + 0.1 * (x + y) + 0.1 * std::sin(10 * x) * std::sin(20 * y);
    }

  // Mirror ghosts double the inner neighbor at a wall; the diagonal stays
  // -2cx - 2cy everywhere.
  auto laplacian = [nx, ny, cx, cy, idx](const Eigen::VectorXd& u) {
    Eigen::VectorXd out(u.size());
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double uc = u(idx(i, j));
        const double ul = i > 0 ? u(idx(i - 1, j)) : u(idx(i + 1, j));
        const double ur = i < nx - 1 ? u(idx(i + 1, j)) : u(idx(i - 1, j));
        const double ud = j > 0 ? u(idx(i, j - 1)) : u(idx(i, j + 1));
        const double uu = j < ny - 1 ? u(idx(i, j + 1)) : u(idx(i, j - 1));
        out(idx(i, j)) = cx * (ul + ur - 2 * uc) + cy * (ud + uu - 2 * uc);
      }
    return out;
  };

  p.f = [alpha, gamma, laplacian](const Eigen::VectorXd& u) {
    return (alpha * laplacian(u) +
            gamma * (u.array() - u.array().cube()).matrix())
        .eval();
  };
  p.jac_vp = [alpha, gamma, laplacian](const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& v) {
    return (alpha * laplacian(v) +
            (gamma * (1.0 - 3.0 * u.array().square()) * v.array()).matrix())
        .eval();
  };
  p.jac_diag = [alpha, gamma, cx, cy](const Eigen::VectorXd& u) {
    return (alpha * (-2 * cx - 2 * cy) +
            gamma * (1.0 - 3.0 * u.array().square()))
        .matrix()
        .eval();
  };
  if (dim <= 4096) {
    p.jac_dense = [nx, ny, cx, cy, alpha, gamma, idx](const Eigen::VectorXd& u) {
      const int n = nx * ny;
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const int r = idx(i, j);
          J(r, r) = alpha * (-2 * cx - 2 * cy) +
                    gamma * (1.0 - 3.0 * u(r) * u(r));
          J(r, idx(i > 0 ? i - 1 : i + 1, j)) += alpha * cx;
          J(r, idx(i < nx - 1 ? i + 1 : i - 1, j)) += alpha * cx;
          J(r, idx(i, j > 0 ? j - 1 : j + 1)) += alpha * cy;
          J(r, idx(i, j < ny - 1 ? j + 1 : j - 1)) += alpha * cy;
        }
      return J;
    };
  }
  return p;
}

Eigen::VectorXd reference_solve(const Problem& prob, const Eigen::VectorXd& y0,
                                double t0, double tf, double tol) {
  if (tf == t0) return y0;
  // Dormand-Prince 5(4), FSAL. The system is autonomous so the stage
  // abscissae never appear.
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                      e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                      e6 = 187.0 / 2100, e7 = 1.0 / 40;

  const double span = tf - t0;
  double t = t0, h = 1e-3 * span;
  const double h_floor = 1e-14 * std::abs(span);
  Eigen::VectorXd y = y0;
  Eigen::VectorXd k1 = prob.f(y);
  const Eigen::Index n = y.size();

  while (t < tf) {
    if (h < h_floor)
      throw std::runtime_error("reference_solve: step size underflow");
    if (t + h > tf) h = tf - t;

    const Eigen::VectorXd k2 = prob.f(y + h * a21 * k1);
    const Eigen::VectorXd k3 = prob.f(y + h * (a31 * k1 + a32 * k2));
    const Eigen::VectorXd k4 = prob.f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXd k5 =
        prob.f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXd k6 =
        prob.f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Eigen::VectorXd y5 =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXd k7 = prob.f(y5);
    const Eigen::VectorXd y4 =
        y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err = 0;
    bool finite = y5.allFinite();
    if (finite) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double sc = tol + tol * std::abs(y5(i));
        const double q = (y5(i) - y4(i)) / sc;
        err += q * q;
      }
      err = std::sqrt(err / static_cast<double>(n));
    }

    if (finite && err <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      const double fac = err == 0 ? 5.0 : 0.9 * std::pow(err, -0.2);
      h *= std::min(5.0, std::max(0.2, fac));
    } else {
      h *= finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.5;
    }
  }
  return y;
}

const Problem& find_problem(std::string_view name) {
  if (name == "swe")
    throw std::invalid_argument(
        "swe: not implemented (shallow-water dynamics are outside this "
        "library's scope; see README)");
  static const std::map<std::string, Problem, std::less<>> reg = [] {
    std::map<std::string, Problem, std::less<>> m;
    Problem l96 = lorenz96();
    l96.y0 = lorenz96_initial();
    m.emplace(l96.name, std::move(l96));
    m.emplace("allencahn-64", allen_cahn(64, 64));
    m.emplace("allencahn-256", allen_cahn(256, 256));
    return m;
  }();
  auto it = reg.find(name);
  if (it == reg.end())
    throw std::invalid_argument("unknown problem: " + std::string(name));
  return it->second;
}

std::vector<std::string> problem_names() {
  return {"lorenz96", "allencahn-64", "allencahn-256"};
}

}  // namespace epirk
