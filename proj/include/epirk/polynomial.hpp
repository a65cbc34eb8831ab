// Sparse multivariate polynomials over the rationals.
//
// Variables are identified by small integer ids issued by VarTable, which
// also keeps the display names ("a[1][1]", "b[2]", ...). Monomials are kept
// sorted by variable id; the term map is ordered so printing and iteration
// are deterministic.
#pragma once

#include "epirk/rational.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace epirk {

struct Monomial {
  // (var id, exponent) pairs, sorted by id, exponents >= 1. Empty = constant.
  std::vector<std::pair<int, int>> factors;

  int degree() const {
    int d = 0;
    for (auto& [v, e] : factors) d += e;
    return d;
  }
  friend bool operator==(const Monomial& x, const Monomial& y) { return x.factors == y.factors; }
  // Graded order: by total degree, then by factor list. Keeps constants first
  // and output stable.
  friend bool operator<(const Monomial& x, const Monomial& y) {
    int dx = x.degree(), dy = y.degree();
    if (dx != dy) return dx < dy;
    return x.factors < y.factors;
  }

  static Monomial one() { return {}; }
  static Monomial var(int id) { return Monomial{{{id, 1}}}; }

  Monomial operator*(const Monomial& o) const {
    Monomial out;
    out.factors.reserve(factors.size() + o.factors.size());
    auto a = factors.begin(), b = o.factors.begin();
    while (a != factors.end() && b != o.factors.end()) {
      if (a->first == b->first) {
        out.factors.emplace_back(a->first, a->second + b->second);
        ++a;
        ++b;
      } else if (a->first < b->first) {
        out.factors.push_back(*a++);
      } else {
        out.factors.push_back(*b++);
      }
    }
    out.factors.insert(out.factors.end(), a, factors.end());
    out.factors.insert(out.factors.end(), b, o.factors.end());
    return out;
  }
};

class Poly {
 public:
  Poly() = default;
  Poly(Rational c) {  // NOLINT: implicit lift of constants into the ring
    if (c != 0) terms_[Monomial::one()] = std::move(c);
  }
  Poly(int c) : Poly(Rational(c)) {}

  static Poly variable(int id) {
    Poly p;
    p.terms_[Monomial::var(id)] = 1;
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.factors.empty());
  }
  Rational constant_term() const {
    auto it = terms_.find(Monomial::one());
    return it == terms_.end() ? Rational(0) : it->second;
  }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  Poly& operator+=(const Poly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) {
    Poly out;
    for (auto& [m, c] : a.terms_) out.terms_[m] = -c;
    return out;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (auto& [ma, ca] : a.terms_)
      for (auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    return out;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  // Substitutes rational values for every variable. Missing ids throw.
  Rational eval(const std::map<int, Rational>& vals) const {
    Rational out = 0;
    for (auto& [m, c] : terms_) {
      Rational t = c;
      for (auto& [v, e] : m.factors) {
        auto it = vals.find(v);
        if (it == vals.end()) throw std::invalid_argument("Poly::eval: unbound variable");
        t *= rat_pow(it->second, e);
      }
      out += t;
    }
    return out;
  }

  // True if a == q*b for a single nonzero rational q (or both are zero);
  // writes q when found.
  static bool proportional(const Poly& a, const Poly& b, Rational* ratio = nullptr) {
    if (a.is_zero() && b.is_zero()) {
      if (ratio) *ratio = 1;
      return true;
    }
    if (a.is_zero() || b.is_zero() || a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    Rational q = 0;
    for (; ia != a.terms_.end(); ++ia, ++ib) {
      if (!(ia->first == ib->first)) return false;
      Rational qi = ia->second / ib->second;
      if (q == 0)
        q = qi;
      else if (qi != q)
        return false;
    }
    if (ratio) *ratio = q;
    return true;
  }

 private:
  void add_term(const Monomial& m, const Rational& c) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  std::map<Monomial, Rational> terms_;
};

// Issues ids and remembers display names for polynomial variables.
class VarTable {
 public:
  int intern(const std::string& name) {
    auto it = by_name_.find(name);
    if (it != by_name_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    by_name_.emplace(name, id);
    return id;
  }
  const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> by_name_;
};

// Renders e.g. "2*a[1][1]^2*b[2] - 1/3". Terms appear in graded map order.
std::string poly_to_string(const Poly& p, const VarTable& vars);

}  // namespace epirk
