// Order-condition engine. Expands one step of the three-stage exponential
// scheme as a truncated series over two-colored trees, subtracts the exact
// flow, and emits the residual polynomials in the tableau entries. A tableau
// satisfies the order-p conditions of a family iff every residual indexed by
// a tree of order <= p vanishes at its entries.
//
// Families differ only in the index set: W keeps every admissible tree,
// Krylov folds each recolor class onto its projected representative (summing
// residuals), Classical folds everything onto all-meagre trees.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "epirk/polynomial.hpp"
#include "epirk/tableau.hpp"
#include "epirk/trees.hpp"

namespace epirk {

struct OrderCondition {
  Tree rep;       // index tree of the family
  Poly residual;  // numerical minus exact coefficient, summed over the class
};

// Shared symbol table for the 18 tableau entries of the three-stage family,
// display names "a[1][1]".."p[3][3]". Ids are stable for the process lifetime.
const VarTable& condition_vars();

// Variable ids for binding values; i, j are 1-based tableau indices.
int cond_var_a(int i, int j);  // i in 1..2, j <= i
int cond_var_b(int j);         // j in 1..3
int cond_var_g(int i, int j);  // i in 1..3, j <= i
int cond_var_p(int j, int k);  // j in 1..3, k <= j

// All conditions of the family with index-tree order <= max_order, ascending
// in (order, canonical tree).
std::vector<OrderCondition> generate_conditions(ConditionFamily family,
                                                int max_order);

// Binds every condition variable to the tableau's entries; embedded swaps the
// main weights b for the error-estimator weights.
std::map<int, Rational> tableau_binding(const Tableau& tab,
                                        bool embedded = false);

// Largest p <= max_order such that every condition of order <= p evaluates to
// a residual with |r| <= tol; 0 if some first-order condition fails.
int attained_order(const std::vector<OrderCondition>& conditions,
                   const std::map<int, Rational>& binding, const Rational& tol,
                   int max_order);

struct ConditionFailure {
  Tree rep;
  Rational residual;
  bool embedded;  // failure of the error-estimator weights, not the main ones
};

// Outcome of checking a tableau against its family's conditions at the
// declared orders. Collects failures instead of throwing.
struct ValidationReport {
  int attained_order = 0;
  int attained_embedded = 0;
  bool design_order_ok = false;
  bool embedded_order_ok = false;
  std::vector<ConditionFailure> failures;  // |residual| > zero_tol in range
};

ValidationReport validate_tableau(const Tableau& tab);

}  // namespace epirk
