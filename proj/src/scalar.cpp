#include "wft/scalar.hpp"

#include <cstdio>

namespace wft {

std::string ScalarTraits<double>::to_string(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Rational ScalarTraits<Rational>::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rational num(text.substr(0, slash));
    Rational den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return num / den;
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(text);
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  if (text.find_first_of("eE") != std::string::npos) {
    throw std::invalid_argument("exponent notation not supported for rationals: '" + text + "'");
  }
  Rational scale(1);
  for (std::size_t i = dot + 1; i < text.size(); ++i) scale *= 10;
  bool negative = !digits.empty() && digits[0] == '-';
  if (digits == "-" || digits.empty()) throw std::invalid_argument("bad rational '" + text + "'");
  Rational whole(digits.substr(negative ? 1 : 0).empty() ? std::string("0")
                                                         : digits.substr(negative ? 1 : 0));
  whole /= scale;
  return negative ? Rational(-whole) : whole;
}

}  // namespace wft
