#include "epirk/bseries.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace epirk {

namespace {

VarTable& vars_mut() {
  static VarTable v;
  return v;
}

std::string two_index(const char* base, int i, int j) {
  return std::string(base) + "[" + std::to_string(i) + "][" + std::to_string(j) +
         "]";
}

// Truncated series: coefficient of y plus one polynomial per stored tree.
// Absent trees have coefficient zero.
struct Series {
  Poly empty;
  std::map<Tree, Poly> c;

  Poly at(const Tree& t) const {
    auto it = c.find(t);
    return it == c.end() ? Poly() : it->second;
  }
};

// acc += w * s, treating both as formal series.
void acc_add(Series& acc, const Poly& w, const Series& s) {
  acc.empty += w * s.empty;
  for (auto& [t, coef] : s.c) {
    Poly add = w * coef;
    if (add.is_zero()) continue;
    auto [it, inserted] = acc.c.try_emplace(t, add);
    if (!inserted) {
      it->second += add;
      if (it->second.is_zero()) acc.c.erase(it);
    }
  }
}

// Series of h*f(u) where u has series s; requires s.empty == 1. A meagre
// root collects the product of the child coefficients, fat roots vanish.
Series compose_f(const Series& s, const std::vector<Tree>& trees) {
  Series out;
  for (const Tree& t : trees) {
    if (t.fat) continue;
    Poly prod = 1;
    for (const Tree& k : t.kids) {
      prod *= s.at(k);
      if (prod.is_zero()) break;
    }
    if (!prod.is_zero()) out.c.emplace(t, std::move(prod));
  }
  return out;
}

// Series of h*A*u; requires s.empty == 0. Grafts a fat root.
Series multiply_A(const Series& s, const std::vector<Tree>& trees) {
  Series out;
  for (const Tree& t : trees) {
    if (!t.fat) continue;
    Poly v = s.at(t.kids[0]);
    if (!v.is_zero()) out.c.emplace(t, std::move(v));
  }
  return out;
}

// Applies an analytic function of h*A with Taylor coefficients taylor[i] on
// (hA)^i; requires s.empty == 0. Each power of hA strips one fat root layer.
Series multiply_phi(const Series& s, const std::array<Poly, 4>& taylor,
                    const std::vector<Tree>& trees) {
  Series out;
  for (const Tree& t : trees) {
    Poly acc = taylor[0] * s.at(t);
    const Tree* cur = &t;
    for (std::size_t i = 1; i < taylor.size(); ++i) {
      if (!cur->fat) break;
      cur = &cur->kids[0];
      acc += taylor[i] * s.at(*cur);
    }
    if (!acc.is_zero()) out.c.emplace(t, std::move(acc));
  }
  return out;
}

// Tableau entries as polynomial variables; slots outside the lower triangle
// stay zero.
struct SymTab {
  Poly a[2][3], b[3], g[3][3], p[3][3];
};

SymTab symbolic_tableau() {
  SymTab T;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= i; ++j)
      T.a[i - 1][j - 1] = Poly::variable(cond_var_a(i, j));
  for (int j = 1; j <= 3; ++j) T.b[j - 1] = Poly::variable(cond_var_b(j));
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= i; ++j) {
      T.g[i - 1][j - 1] = Poly::variable(cond_var_g(i, j));
      T.p[i - 1][j - 1] = Poly::variable(cond_var_p(i, j));
    }
  return T;
}

// Taylor coefficients of psi_j(g*z) on z^i: g^i * sum_k p[j][k]/(i+k)!.
std::array<Poly, 4> psi_taylor(const SymTab& T, int j, const Poly& gscale) {
  std::array<Poly, 4> out;
  Poly gpow = 1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    Poly sum = 0;
    for (int k = 1; k <= j; ++k)
      sum += T.p[j - 1][k - 1] * Poly(1 / rat_factorial(static_cast<int>(i) + k));
    out[i] = gpow * sum;
    gpow = gpow * gscale;
  }
  return out;
}

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - i + 1) / i;
  return r;
}

// One step of the three-stage scheme as a series in the tableau symbols.
Series numerical_series(const SymTab& T, const std::vector<Tree>& trees) {
  Series yn;
  yn.empty = 1;
  const Series f0 = compose_f(yn, trees);

  std::vector<Series> r;       // r(Y_i)
  std::vector<Series> deltas;  // forward differences of r at the stages
  for (int i = 1; i <= 2; ++i) {
    Series Y = yn;
    acc_add(Y, T.a[i - 1][0], multiply_phi(f0, psi_taylor(T, 1, T.g[i - 1][0]), trees));
    for (int j = 2; j <= i; ++j)
      acc_add(Y, T.a[i - 1][j - 1],
              multiply_phi(deltas[j - 2], psi_taylor(T, j, T.g[i - 1][j - 1]), trees));

    Series incr = Y;
    incr.empty = 0;  // Y - yn; tree coefficients of yn are zero
    Series ri = compose_f(Y, trees);
    acc_add(ri, Poly(-1), f0);
    acc_add(ri, Poly(-1), multiply_A(incr, trees));
    r.push_back(std::move(ri));

    Series d;  // Delta^(i) r = sum_k (-1)^k C(i,k) r(Y_{i-k})
    for (int k = 0; k < i; ++k)
      acc_add(d, Poly(Rational((k % 2 ? -1 : 1) * binom(i, k))), r[i - 1 - k]);
    deltas.push_back(std::move(d));
  }

  Series y1 = yn;
  acc_add(y1, T.b[0], multiply_phi(f0, psi_taylor(T, 1, T.g[2][0]), trees));
  for (int j = 2; j <= 3; ++j)
    acc_add(y1, T.b[j - 1],
            multiply_phi(deltas[j - 2], psi_taylor(T, j, T.g[2][j - 1]), trees));
  return y1;
}

Poly exact_coefficient(const Tree& t) {
  if (tree_has_fat(t)) return Poly();
  return Poly(1 / Rational(tree_density(t)));
}

}  // namespace

const VarTable& condition_vars() { return vars_mut(); }

int cond_var_a(int i, int j) { return vars_mut().intern(two_index("a", i, j)); }
int cond_var_b(int j) {
  return vars_mut().intern("b[" + std::to_string(j) + "]");
}
int cond_var_g(int i, int j) { return vars_mut().intern(two_index("g", i, j)); }
int cond_var_p(int j, int k) { return vars_mut().intern(two_index("p", j, k)); }

std::vector<OrderCondition> generate_conditions(ConditionFamily family,
                                                int max_order) {
  const std::vector<Tree> trees = enumerate_tw_trees(max_order);
  const SymTab T = symbolic_tableau();
  const Series num = numerical_series(T, trees);

  std::map<Tree, Poly> folded;
  for (const Tree& t : trees) {
    Tree rep = t;
    if (family == ConditionFamily::Krylov) rep = recolor_projected(t);
    if (family == ConditionFamily::Classical) rep = recolor_meagre(t);
    folded[rep] += num.at(t) - exact_coefficient(t);
  }

  std::vector<OrderCondition> out;
  out.reserve(folded.size());
  for (auto& [rep, residual] : folded)
    out.push_back(OrderCondition{rep, std::move(residual)});
  return out;
}

std::map<int, Rational> tableau_binding(const Tableau& tab, bool embedded) {
  std::map<int, Rational> bind;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= i; ++j) bind[cond_var_a(i, j)] = tab.a[i - 1][j - 1];
  const auto& w = embedded ? tab.bhat : tab.b;
  for (int j = 1; j <= 3; ++j) bind[cond_var_b(j)] = w[j - 1];
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= i; ++j) {
      bind[cond_var_g(i, j)] = tab.g[i - 1][j - 1];
      bind[cond_var_p(i, j)] = tab.p[i - 1][j - 1];
    }
  return bind;
}

int attained_order(const std::vector<OrderCondition>& conditions,
                   const std::map<int, Rational>& binding, const Rational& tol,
                   int max_order) {
  int attained = 0;
  for (int p = 1; p <= max_order; ++p) {
    for (const OrderCondition& c : conditions) {
      if (tree_order(c.rep) != p) continue;
      if (!rat_abs_le(c.residual.eval(binding), tol)) return attained;
    }
    attained = p;
  }
  return attained;
}

ValidationReport validate_tableau(const Tableau& tab) {
  const auto conds = generate_conditions(tab.family, 4);
  const auto bind = tableau_binding(tab);
  const auto bind_hat = tableau_binding(tab, true);
  ValidationReport rep;
  rep.attained_order = attained_order(conds, bind, tab.zero_tol, 4);
  rep.attained_embedded = attained_order(conds, bind_hat, tab.zero_tol, 4);
  rep.design_order_ok = rep.attained_order >= tab.design_order;
  rep.embedded_order_ok = rep.attained_embedded >= tab.embedded_order;
  for (const OrderCondition& c : conds) {
    if (tree_order(c.rep) <= tab.design_order) {
      Rational r = c.residual.eval(bind);
      if (!rat_abs_le(r, tab.zero_tol))
        rep.failures.push_back({c.rep, std::move(r), false});
    }
    if (tree_order(c.rep) <= tab.embedded_order) {
      Rational r = c.residual.eval(bind_hat);
      if (!rat_abs_le(r, tab.zero_tol))
        rep.failures.push_back({c.rep, std::move(r), true});
    }
  }
  return rep;
}

}  // namespace epirk
