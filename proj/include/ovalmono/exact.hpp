#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "ovalmono/errors.hpp"

namespace ovalmono {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }
inline BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / gcd(a, b) * b);
}

/// Parses `p`, `p/q` or a finite decimal such as `-0.125` into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&] { fail(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'"); };
  if (text.empty()) bad();
  auto parse_int = [&](std::string_view s) -> BigInt {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) bad();
    for (std::size_t k = i; k < s.size(); ++k)
      if (s[k] < '0' || s[k] > '9') bad();
    BigInt v(std::string(s[0] == '+' ? s.substr(1) : s));
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt p = parse_int(text.substr(0, slash));
    BigInt q = parse_int(text.substr(slash + 1));
    if (q == 0) bad();
    return Rational(p, q);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot), frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (frac.empty()) bad();
    for (char c : frac)
      if (c < '0' || c > '9') bad();
    BigInt w = (whole.empty() || whole == "-" || whole == "+") ? BigInt(0) : parse_int(whole);
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    Rational f(BigInt(std::string(frac)), scale);
    Rational r = Rational(boost::multiprecision::abs(w)) + f;
    return negative ? Rational(-r) : r;
  }
  return Rational(parse_int(text));
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Converts an exact rational to a floating type, exactly rounded for double and
/// through decimal strings for multiprecision types.
template <class Real>
Real to_real(const Rational& q) {
  if constexpr (std::is_floating_point_v<Real>) {
    return q.template convert_to<Real>();
  } else {
    return Real(numerator(q).str()) / Real(denominator(q).str());
  }
}

}  // namespace ovalmono
