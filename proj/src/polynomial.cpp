#include "epirk/polynomial.hpp"

#include <sstream>

namespace epirk {

std::string poly_to_string(const Poly& p, const VarTable& vars) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : p.terms()) {
    Rational coef = c;
    if (first) {
      if (coef < 0) {
        os << "-";
        coef = -coef;
      }
    } else {
      os << (coef < 0 ? " - " : " + ");
      if (coef < 0) coef = -coef;
    }
    first = false;
    bool wrote_coef = false;
    if (coef != 1 || m.factors.empty()) {
      os << coef.str();
      wrote_coef = true;
    }
    for (std::size_t i = 0; i < m.factors.size(); ++i) {
      if (wrote_coef || i > 0) os << "*";
      os << vars.name(m.factors[i].first);
      if (m.factors[i].second > 1) os << "^" << m.factors[i].second;
    }
  }
  return os.str();
}

}  // namespace epirk
