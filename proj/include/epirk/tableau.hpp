// Coefficient sets for the three-stage exponential schemes, stored as exact
// rationals. Printed decimal coefficients are taken literally (digits over a
// power of ten), so residual checks measure the print precision actually
// achieved, not an idealized zero.
#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "epirk/rational.hpp"

namespace epirk {

// Which tree family certifies the design order of a tableau.
enum class ConditionFamily { W, Krylov, Classical };

struct Tableau {
  std::string name;
  ConditionFamily family = ConditionFamily::W;
  int design_order = 3;    // order certified for the main weights b
  int embedded_order = 2;  // order of the error-estimator weights bhat

  // Residuals of satisfied conditions are only zero to the precision of the
  // published coefficients; |r| <= zero_tol counts as satisfied.
  Rational zero_tol = 0;

  // a[i][j] weights stage i+2's term j+1; row 0 is the first internal stage.
  std::array<std::array<Rational, 3>, 2> a{};
  std::array<Rational, 3> b{};
  std::array<Rational, 3> bhat{};
  std::array<std::array<Rational, 3>, 3> g{};  // scalings, row per stage
  std::array<std::array<Rational, 3>, 3> p{};  // psi_j = sum_k p[j][k] phi_{k+1}
};

Tableau tableau_epirkw3a();
Tableau tableau_epirkw3b();
Tableau tableau_epirkk4();

const Tableau& find_tableau(std::string_view name);  // throws on unknown name
std::vector<std::string> tableau_names();

}  // namespace epirk
