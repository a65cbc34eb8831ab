#include "doctest.h"

#include <stdexcept>

#include "epirk/bseries.hpp"
#include "epirk/tableau.hpp"
#include "epirk/trees.hpp"

using namespace epirk;

TEST_CASE("first variant tableau entries") {
  const Tableau& t = find_tableau("epirkw3a");
  CHECK(t.a[0][0] == rat(1, 2));
  CHECK(t.a[1][0] == 0);
  CHECK(t.a[1][1] == 1);
  CHECK(t.b[0] == rat(3, 4));
  CHECK(t.b[1] == rat(1, 2));
  CHECK(t.b[2] == 1);
  CHECK(t.g[0][0] == rat(2, 3));
  CHECK(t.p[0][0] == rat(4, 3));
  CHECK(t.p[2][2] == rat(3, 4));
  CHECK(t.zero_tol == 0);
}

TEST_CASE("error-estimator weights solve the second-order relation") {
  const Tableau& t = find_tableau("epirkw3a");
  CHECK(t.bhat[2] == -3 + 8 * t.bhat[1]);
}

TEST_CASE("second variant tableau entries") {
  const Tableau& t = find_tableau("epirkw3b");
  CHECK(t.g[1][0] == rat_from_decimal("0.34706341174296320958"));
  CHECK(t.b[1] == rat_from_decimal("2.0931591383832578214"));
  CHECK(t.bhat[2] == 1);
  CHECK(t.b[0] == 1);
  CHECK(t.g[2][0] == 1);
}

TEST_CASE("fourth-order tableau entries") {
  const Tableau& t = find_tableau("epirkk4");
  const Rational b1 = rat(799821658665135LL, 692665874901013LL);
  CHECK(t.b[0] == b1);
  CHECK(t.p[0][0] == 1 / b1);
  CHECK(t.a[0][0] == 1 / b1);
  CHECK(t.g[2][0] == 1);
  CHECK(t.g[2][1] == rat(9, 16));
  CHECK(t.g[2][2] == rat(9, 16));
  CHECK(t.bhat[0] == b1);
  CHECK(t.bhat[1] == rat(32, 81));
  CHECK(t.bhat[2] == 0);
}

TEST_CASE("registry rejects unknown names") {
  CHECK_THROWS_AS(find_tableau("epirk5"), std::invalid_argument);
  CHECK(tableau_names().size() == 3);
}

TEST_CASE("third-order W variants attain their declared orders") {
  for (const char* name : {"epirkw3a", "epirkw3b"}) {
    const Tableau& t = find_tableau(name);
    const ValidationReport rep = validate_tableau(t);
    CHECK(rep.attained_order == 3);
    CHECK(rep.attained_embedded == 2);
    CHECK(rep.design_order_ok);
    CHECK(rep.embedded_order_ok);
    CHECK(rep.failures.empty());
  }
}

TEST_CASE("fourth-order method attains its declared orders") {
  const ValidationReport rep = validate_tableau(find_tableau("epirkk4"));
  CHECK(rep.attained_order == 4);
  CHECK(rep.attained_embedded == 3);
  CHECK(rep.failures.empty());
}

TEST_CASE("exact-arithmetic orders of the rational tableau") {
  // With tolerance zero only true rational zeros count.
  const Tableau& t = find_tableau("epirkw3a");
  const auto conds = generate_conditions(ConditionFamily::W, 4);
  CHECK(attained_order(conds, tableau_binding(t), 0, 4) == 3);
  CHECK(attained_order(conds, tableau_binding(t, true), 0, 4) == 2);
}

TEST_CASE("fat-branching fourth-order residual vanishes exactly") {
  const Tableau& t = find_tableau("epirkk4");
  const auto ks = generate_conditions(ConditionFamily::Krylov, 4);
  const Tree t8 = make_tree(true, {make_tree(false, {leaf(), leaf()})});
  for (const auto& c : ks) {
    if (c.rep == t8) {
      CHECK(c.residual.eval(tableau_binding(t)) == 0);
      return;
    }
  }
  FAIL("missing fat-branching condition");
}

TEST_CASE("fourth-order method does not satisfy tree-wise W conditions") {
  // Its conditions hold summed over recolor classes, not per tree.
  const Tableau& t = find_tableau("epirkk4");
  const auto ws = generate_conditions(ConditionFamily::W, 4);
  CHECK(attained_order(ws, tableau_binding(t), t.zero_tol, 4) < 4);
}

TEST_CASE("fourth-order method passes classical conditions with exact Jacobian") {
  const Tableau& t = find_tableau("epirkk4");
  const auto cs = generate_conditions(ConditionFamily::Classical, 4);
  CHECK(attained_order(cs, tableau_binding(t), t.zero_tol, 4) == 4);
}
