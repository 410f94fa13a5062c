#ifndef ERGO_RATIONAL_HPP
#define ERGO_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace ergo {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt pow2(unsigned e) {
  BigInt r = 1;
  r <<= e;
  return r;
}

/// 2^{-e} as an exact rational.
inline Rational inv_pow2(unsigned e) { return Rational(BigInt(1), pow2(e)); }

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// Canonical "p/q" form, q > 0, always with the slash ("3/1", "-1/2").
inline std::string rational_str(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "p/q" or a bare integer "p". Decimal points are rejected.
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (s.find('.') != std::string::npos)
    throw std::invalid_argument("rational literal must be p/q, got: " + s);
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt p(s.substr(0, slash));
    BigInt q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator");
    return Rational(p, q);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

}  // namespace ergo

#endif  // ERGO_RATIONAL_HPP
