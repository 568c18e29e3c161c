#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace bfvcalc {

// Exact arbitrary-precision rational scalar. Always stored normalized:
// gcd(num, den) = 1, den > 0. That is what makes == a real equality test
// and lets polynomial maps erase zero coefficients eagerly.
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(num, den);
}

// Accepts "p", "-p", "p/q" with q > 0 after normalization.
inline Rational parse_rational(const std::string& text) {
  try {
    Rational r(text);
    return r;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational literal: '" + text + "'");
  }
}

inline std::string to_string(const Rational& r) { return r.str(); }

inline Rational factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative argument");
  Rational acc = 1;
  for (int k = 2; k <= n; ++k) acc *= k;
  return acc;
}

}  // namespace bfvcalc
