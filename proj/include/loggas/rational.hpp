#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "loggas/errors.hpp"

namespace loggas {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Parses "p", "-p", "p/q" with decimal integers p, q (q != 0).
inline Rational parse_rational(std::string_view text) {
  auto is_integer = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char ch : s)
      if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
  };
  auto to_int = [](std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    return BigInt(std::string(s));
  };

  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  if (!is_integer(num)) throw Error(ErrorKind::InvalidInput, "not a rational literal: '" + std::string(text) + "'");
  if (slash == std::string_view::npos) return Rational(to_int(num));

  const auto den = text.substr(slash + 1);
  if (!is_integer(den)) throw Error(ErrorKind::InvalidInput, "not a rational literal: '" + std::string(text) + "'");
  BigInt d = to_int(den);
  if (d == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + std::string(text) + "'");
  return Rational(to_int(num), d);
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace loggas
