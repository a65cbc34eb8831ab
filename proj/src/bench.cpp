#include "epirk/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "epirk/bseries.hpp"
#include "epirk/polynomial.hpp"
#include "epirk/problems.hpp"
#include "epirk/rational.hpp"
#include "epirk/tableau.hpp"
#include "epirk/trees.hpp"

namespace epirk {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double wall_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size())
    throw std::invalid_argument(std::string(what) + ": bad number '" + s + "'");
  return v;
}

long parse_long(const std::string& s, const char* what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size())
    throw std::invalid_argument(std::string(what) + ": bad integer '" + s + "'");
  return v;
}

}  // namespace

std::string csv_format(const CsvRow& r) {
  std::string line = r.method + "," + r.mode + "," + std::to_string(r.m) + "," +
                     r.problem + ",";
  char buf[200];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%lld,%lld,%.17g,%.17g",
                r.h_or_rtol, r.error, r.steps_accepted, r.steps_rejected,
                r.krylov_rms, r.cpu_seconds);
  return line + buf;
}

CsvRow csv_parse(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) f.push_back(cur);
  if (f.size() != 10)
    throw std::invalid_argument("csv_parse: expected 10 fields, got " +
                                std::to_string(f.size()));
  CsvRow r;
  r.method = f[0];
  r.mode = f[1];
  r.m = static_cast<int>(parse_long(f[2], "csv m"));
  r.problem = f[3];
  r.h_or_rtol = parse_double(f[4], "csv h_or_rtol");
  r.error = parse_double(f[5], "csv error");
  r.steps_accepted = parse_long(f[6], "csv steps_accepted");
  r.steps_rejected = parse_long(f[7], "csv steps_rejected");
  r.krylov_rms = parse_double(f[8], "csv krylov_rms");
  r.cpu_seconds = parse_double(f[9], "csv cpu_seconds");
  return r;
}

double estimate_order(const std::vector<double>& hs,
                      const std::vector<double>& errors) {
  if (hs.size() != errors.size())
    throw std::invalid_argument("estimate_order: length mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (std::isfinite(hs[i]) && hs[i] > 0 && std::isfinite(errors[i]) &&
        errors[i] > 0) {
      x.push_back(std::log2(hs[i]));
      y.push_back(std::log2(errors[i]));
    }
  }
  if (x.size() < 3)
    throw std::invalid_argument(
        "estimate_order: need at least 3 finite positive points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0)
    throw std::invalid_argument("estimate_order: step sizes are all equal");
  return sxy / sxx;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  MethodCell* cell = nullptr;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::string where = " at line " + std::to_string(lineno);
    if (line == "[method]") {
      cfg.cells.emplace_back();
      cell = &cfg.cells.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value" + where);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (cell) {
      if (key == "name")
        cell->method = val;
      else if (key == "mode")
        cell->mode = val;
      else
        throw std::invalid_argument("config: unknown method key '" + key + "'" +
                                    where);
      continue;
    }
    if (key == "command") {
      cfg.command = val;
    } else if (key == "problem") {
      cfg.problem = val;
    } else if (key == "tspan") {
      const auto colon = val.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("config: tspan wants a:b" + where);
      cfg.t0 = parse_double(val.substr(0, colon), "tspan start");
      cfg.tf = parse_double(val.substr(colon + 1), "tspan end");
      cfg.tspan_set = true;
    } else if (key == "h0") {
      cfg.h0 = parse_double(val, "h0");
    } else if (key == "halvings") {
      cfg.halvings = static_cast<int>(parse_long(val, "halvings"));
    } else if (key == "rtol") {
      std::string item;
      std::istringstream vs(val);
      while (vs >> item) {
        while (!item.empty() && item.back() == ',') item.pop_back();
        if (!item.empty()) cfg.rtols.push_back(parse_double(item, "rtol"));
      }
    } else if (key == "atol") {
      cfg.atol = parse_double(val, "atol");
      cfg.atol_set = true;
    } else if (key == "out") {
      cfg.out = val;
    } else if (key == "serial") {
      cfg.serial = (val == "1" || val == "true" || val == "yes");
    } else if (key == "seed") {
      cfg.seed = static_cast<unsigned long>(parse_long(val, "seed"));
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'" + where);
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  return parse_config(in);
}

std::string config_echo(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "command=" << cfg.command << " problem=" << cfg.problem;
  if (cfg.tspan_set)
    os << " tspan=" << fmt17(cfg.t0) << ":" << fmt17(cfg.tf);
  else
    os << " tspan=default";
  os << " h0=" << fmt17(cfg.h0) << " halvings=" << cfg.halvings;
  os << " rtol=";
  if (cfg.rtols.empty()) {
    os << "default";
  } else {
    for (std::size_t i = 0; i < cfg.rtols.size(); ++i)
      os << (i ? "," : "") << fmt17(cfg.rtols[i]);
  }
  os << " atol=" << (cfg.atol_set ? fmt17(cfg.atol) : std::string("track"));
  os << " serial=" << (cfg.serial ? 1 : 0) << " seed=" << cfg.seed;
  os << " methods=";
  for (std::size_t i = 0; i < cfg.cells.size(); ++i) {
    os << (i ? ";" : "") << cfg.cells[i].method << "/"
       << (cfg.cells[i].mode.empty() ? std::string("default")
                                     : cfg.cells[i].mode);
  }
  return os.str();
}

namespace {

std::string residual_display(const Rational& r) {
  if (r == 0) return "0 (exact)";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", to_double(r));
  return buf;
}

Tree meagre_chain(int n) {
  Tree t = leaf();
  for (int i = 1; i < n; ++i) t = make_tree(false, {t});
  return t;
}

}  // namespace

int cmd_verify(const std::string& method, std::ostream& out) {
  const Method& M = find_method(method);
  const Tableau& tab = M.tableau;
  const char* family = tab.family == ConditionFamily::W          ? "W"
                       : tab.family == ConditionFamily::Krylov   ? "K"
                                                                 : "classical";
  const auto conds = generate_conditions(tab.family, 4);
  const auto bind = tableau_binding(tab);
  const auto bind_hat = tableau_binding(tab, true);
  const VarTable& vars = condition_vars();

  out << "method " << M.name << ": " << family << "-family conditions, design order "
      << tab.design_order << ", embedded order " << tab.embedded_order << "\n";
  out << "residual tolerance: " << rat_str(tab.zero_tol) << "\n\n";

  int idx = 0;
  for (const auto& c : conds) {
    ++idx;
    out << "condition " << idx << " of " << conds.size() << " (order "
        << tree_order(c.rep) << ", tree " << tree_name(c.rep) << ")\n";
    out << "  polynomial:    " << poly_to_string(c.residual, vars) << "\n";
    out << "  residual b:    " << residual_display(c.residual.eval(bind))
        << "\n";
    out << "  residual bhat: " << residual_display(c.residual.eval(bind_hat))
        << "\n";
  }

  const int got = attained_order(conds, bind, tab.zero_tol, 4);
  const int got_hat = attained_order(conds, bind_hat, tab.zero_tol, 4);
  out << "\nattained order (b):    " << got << " (design " << tab.design_order
      << ")\n";
  out << "attained order (bhat): " << got_hat << " (target "
      << tab.embedded_order << ")\n";

  if (tab.family == ConditionFamily::W) {
    const Tree chain4 = meagre_chain(4);
    for (const auto& c : conds) {
      if (c.rep == chain4 && c.residual.is_constant() &&
          !c.residual.is_zero()) {
        out << "order-4 obstruction: the condition for tree "
            << tree_name(chain4) << " is the constant "
            << rat_str(c.residual.constant_term())
            << "; no choice of 3-stage coefficients removes it\n";
      }
    }
  }

  const bool ok = got >= tab.design_order && got_hat >= tab.embedded_order;
  out << (ok ? "validated" : "NOT validated") << "\n";
  return ok ? 0 : 2;
}

namespace {

struct ResolvedCell {
  const Method* method;
  JacobianMode mode;
};

ResolvedCell resolve_cell(const MethodCell& cell) {
  const Method& m = find_method(cell.method);
  JacobianMode mode = cell.mode.empty() ? m.default_mode : parse_mode(cell.mode);
  return {&m, mode};
}

int mode_m_column(const JacobianMode& mode) {
  return mode.kind == JacobianKind::KrylovProjected ? mode.m : 0;
}

}  // namespace

int cmd_convergence(const ExperimentConfig& cfg, std::ostream& csv,
                    std::ostream& log) {
  if (cfg.cells.size() != 1)
    throw std::invalid_argument("convergence: exactly one method required");
  if (cfg.halvings < 0 || cfg.halvings > 40)
    throw std::invalid_argument("convergence: halvings out of range");
  if (!(cfg.h0 > 0)) throw std::invalid_argument("convergence: h0 must be > 0");
  const ResolvedCell rc = resolve_cell(cfg.cells[0]);
  const Problem& prob = find_problem(cfg.problem);
  const double t0 = cfg.tspan_set ? cfg.t0 : prob.t0;
  const double tf = cfg.tspan_set ? cfg.tf : prob.tf;

  // Near-roundoff tolerance: the reference floor must sit below the finest
  // fixed-step errors or it flattens the measured slope.
  const Eigen::VectorXd yref = reference_solve(prob, prob.y0, t0, tf, 1e-16);
  const double ref_norm = yref.norm();

  csv << "# cfg: " << config_echo(cfg) << "\n" << kCsvHeader << "\n";
  std::vector<double> hs, errs;
  for (int i = 0; i <= cfg.halvings; ++i) {
    const double h = std::ldexp(cfg.h0, -i);
    CsvRow row;
    row.method = rc.method->name;
    row.mode = mode_string(rc.mode);
    row.m = mode_m_column(rc.mode);
    row.problem = cfg.problem;
    row.h_or_rtol = h;
    RunStats st;
    const auto tic = std::chrono::steady_clock::now();
    try {
      const Eigen::VectorXd y = integrate_fixed(prob, rc.method->tableau,
                                                rc.mode, prob.y0, t0, tf, h, &st);
      row.cpu_seconds = wall_seconds(tic);
      row.error = (y - yref).norm() / ref_norm;
    } catch (const std::runtime_error& e) {
      row.cpu_seconds = wall_seconds(tic);
      row.error = std::numeric_limits<double>::infinity();
      csv << "# failed: h=" << fmt17(h) << " " << e.what() << "\n";
    }
    row.steps_accepted = st.steps_accepted;
    row.steps_rejected = st.steps_rejected;
    row.krylov_rms = st.krylov_rms;
    csv << csv_format(row) << "\n";
    hs.push_back(h);
    errs.push_back(row.error);
  }

  try {
    const double slope = estimate_order(hs, errs);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", slope);
    csv << "# estimated_order: " << buf << "\n";
    log << "estimated order: " << buf << "\n";
  } catch (const std::invalid_argument& e) {
    csv << "# estimated_order: none (" << e.what() << ")\n";
    log << "estimated order unavailable: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_workprecision(const ExperimentConfig& cfg, std::ostream& csv,
                      std::ostream& log) {
  if (cfg.cells.empty())
    throw std::invalid_argument("workprecision: at least one method required");
  std::vector<double> rtols = cfg.rtols;
  if (rtols.empty())
    for (int k = 1; k <= 8; ++k) rtols.push_back(std::pow(10.0, -k));

  const Problem& prob = find_problem(cfg.problem);
  const double t0 = cfg.tspan_set ? cfg.t0 : prob.t0;
  const double tf = cfg.tspan_set ? cfg.tf : prob.tf;
  const Eigen::VectorXd yref = reference_solve(prob, prob.y0, t0, tf);
  const double ref_norm = yref.norm();

  csv << "# cfg: " << config_echo(cfg) << "\n" << kCsvHeader << "\n";
  int ok_rows = 0;
  for (const auto& cell : cfg.cells) {
    const ResolvedCell rc = resolve_cell(cell);
    for (const double rtol : rtols) {
      ControllerConfig cc;
      cc.rtol = rtol;
      cc.atol = cfg.atol_set ? cfg.atol : rtol;
      CsvRow row;
      row.method = rc.method->name;
      row.mode = mode_string(rc.mode);
      row.m = mode_m_column(rc.mode);
      row.problem = cfg.problem;
      row.h_or_rtol = rtol;
      RunStats st;
      const auto tic = std::chrono::steady_clock::now();
      try {
        const Eigen::VectorXd y = integrate_adaptive(
            prob, rc.method->tableau, rc.mode, prob.y0, t0, tf, cc, &st);
        row.cpu_seconds = wall_seconds(tic);
        row.error = (y - yref).norm() / ref_norm;
        ++ok_rows;
      } catch (const std::runtime_error& e) {
        row.cpu_seconds = wall_seconds(tic);
        row.error = std::numeric_limits<double>::infinity();
        csv << "# failed: method=" << row.method << " mode=" << row.mode
            << " rtol=" << fmt17(rtol) << " " << e.what() << "\n";
      }
      row.steps_accepted = st.steps_accepted;
      row.steps_rejected = st.steps_rejected;
      row.krylov_rms = st.krylov_rms;
      csv << csv_format(row) << "\n";
    }
  }
  if (ok_rows == 0) {
    log << "workprecision: every cell failed\n";
    return 2;
  }
  log << "workprecision: " << ok_rows << " rows completed\n";
  return 0;
}

void list_methods(std::ostream& out) {
  for (const auto& name : method_names()) {
    const Method& m = find_method(name);
    out << name << "  design order " << m.tableau.design_order << ", embedded "
        << m.tableau.embedded_order << ", default mode "
        << mode_string(m.default_mode) << "\n";
  }
}

void list_problems(std::ostream& out) {
  for (const auto& name : problem_names()) {
    const Problem& p = find_problem(name);
    out << name << "  dim " << p.dim << ", span [" << p.t0 << ", " << p.tf
        << "]\n";
  }
}

}  // namespace epirk
