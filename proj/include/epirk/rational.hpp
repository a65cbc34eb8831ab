// Exact rational arithmetic used by the order-condition machinery.
// Tableau entries and condition residuals are kept exact; doubles appear
// only at the boundary to the floating-point integrators.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace epirk {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

// Parses a plain decimal literal ("2.0931591383832578214", "-0.5", "3") into
// the exact rational printed-digits/10^k. No exponent forms.
inline Rational rat_from_decimal(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("rat_from_decimal: empty string");
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  BigInt digits = 0;
  BigInt den = 1;
  bool seen_dot = false, seen_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("rat_from_decimal: two dots");
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (seen_dot) den *= 10;
      seen_digit = true;
    } else {
      throw std::invalid_argument("rat_from_decimal: bad character in \"" + std::string(s) + "\"");
    }
  }
  if (!seen_digit) throw std::invalid_argument("rat_from_decimal: no digits");
  Rational r(digits, den);
  return neg ? Rational(-r) : r;
}

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

inline Rational rat_pow(const Rational& base, int exp) {
  if (exp < 0) {
    if (base == 0) throw std::domain_error("rat_pow: 0 to negative power");
    return Rational(1) / rat_pow(base, -exp);
  }
  Rational out = 1, b = base;
  int e = exp;
  while (e > 0) {
    if (e & 1) out *= b;
    b *= b;
    e >>= 1;
  }
  return out;
}

inline Rational rat_factorial(int n) {
  if (n < 0) throw std::domain_error("rat_factorial: negative");
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

// |r| <= p/q test helper for print-precision checks on exact residuals.
inline bool rat_abs_le(const Rational& r, const Rational& bound) {
  return (r < 0 ? Rational(-r) : r) <= bound;
}

inline std::string rat_str(const Rational& r) { return r.str(); }

}  // namespace epirk
