#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace kslab {

// Exact arithmetic carrier for every probability and matrix entry.
// No floating point appears anywhere on a verdict path.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Accepts "p/q" or a bare integer "n" with optional leading sign.
// Floating point notation is rejected.
inline Rational parse_rational(std::string_view text) {
  auto is_int = [](std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_int(text)) throw ParseError("not a rational: '" + std::string(text) + "'");
    return Rational(Integer(std::string(text)));
  }
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  if (!is_int(num) || !is_int(den))
    throw ParseError("not a rational: '" + std::string(text) + "'");
  Integer d{std::string(den)};
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(Integer(std::string(num)), d);
}

// "p/q" for non-integers, "n" otherwise.
inline std::string format_rational(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace kslab
