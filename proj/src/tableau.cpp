#include "epirk/tableau.hpp"

#include <map>
#include <stdexcept>

namespace epirk {

namespace {
Rational dec(std::string_view s) { return rat_from_decimal(s); }
}

Tableau tableau_epirkw3a() {
  Tableau t;
  t.name = "epirkw3a";
  t.family = ConditionFamily::W;
  t.design_order = 3;
  t.embedded_order = 2;
  t.zero_tol = 0;  // rational entries satisfy the conditions exactly
  t.a = {{{rat(1, 2), 0, 0}, {0, 1, 0}}};
  t.b = {rat(3, 4), rat(1, 2), 1};
  // The published bhat3 = 6/5 breaks the second-order relation
  // 8*bhat2 - bhat3 = 3 that the rest of the row is built around (it leaves
  // the estimator first order). With bhat2 = 3/4 the relation gives bhat3 = 3.
  t.bhat = {rat(3, 4), rat(3, 4), 3};
  t.g = {{{rat(2, 3), 0, 0}, {0, 0, 0}, {1, rat(3, 5), 0}}};
  t.p = {{{rat(4, 3), 0, 0}, {1, 2, 0}, {0, 0, rat(3, 4)}}};
  return t;
}

Tableau tableau_epirkw3b() {
  Tableau t;
  t.name = "epirkw3b";
  t.family = ConditionFamily::W;
  t.design_order = 3;
  t.embedded_order = 2;
  // Coefficients are published as 20-digit decimals; condition residuals
  // bottom out near 1e-15.
  t.zero_tol = rat_pow(rat(1, 10), 14);
  t.a = {{{dec("0.22824182961171620396"), 0, 0},
          {dec("0.45648365922343240794"), dec("0.33161664063356950085"), 0}}};
  t.b = {1, dec("2.0931591383832578214"), dec("1.2623969257900804404")};
  t.bhat = {1, dec("2.0931591383832578214"), 1};
  const Rational g2 = dec("0.34706341174296320958");
  t.g = {{{0, 0, 0}, {g2, g2, g2}, {1, 1, 1}}};
  t.p = {{{1, 0, 0}, {0, dec("2.0931604100438501004"), 0}, {1, 1, 1}}};
  return t;
}

Tableau tableau_epirkk4() {
  Tableau t;
  t.name = "epirkk4";
  t.family = ConditionFamily::Krylov;
  t.design_order = 4;
  t.embedded_order = 3;
  // a11 is a 15-digit rationalization of an algebraic number whose square
  // should be 3/4; four of the nine conditions carry the O(1e-31) defect.
  t.zero_tol = rat_pow(rat(1, 10), 28);
  const Rational q = rat(692665874901013LL, 799821658665135LL);
  t.a = {{{q, 0, 0}, {q, rat(3, 4), 0}}};
  t.b = {1 / q, rat(352, 729), rat(64, 729)};
  t.bhat = {1 / q, rat(32, 81), 0};
  t.g = {{{rat(3, 4), 0, 0},
          {rat(3, 4), 0, 0},
          {1, rat(9, 16), rat(9, 16)}}};
  t.p = {{{q, 0, 0}, {1, 1, 0}, {1, 1, 0}}};
  return t;
}

const Tableau& find_tableau(std::string_view name) {
  static const std::map<std::string, Tableau, std::less<>> reg = [] {
    std::map<std::string, Tableau, std::less<>> m;
    for (Tableau t : {tableau_epirkw3a(), tableau_epirkw3b(), tableau_epirkk4()})
      m.emplace(t.name, std::move(t));
    return m;
  }();
  auto it = reg.find(name);
  if (it == reg.end())
    throw std::invalid_argument("unknown tableau: " + std::string(name));
  return it->second;
}

std::vector<std::string> tableau_names() {
  return {"epirkw3a", "epirkw3b", "epirkk4"};
}

}  // namespace epirk
