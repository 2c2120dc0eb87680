#ifndef WFT_SCALAR_HPP_
#define WFT_SCALAR_HPP_

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>

namespace wft {

// Exact rationals for the validation mode. Expression templates are off so
// that generic code can use `auto` freely.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool kExact = false;
  static constexpr const char* kName = "float";
  // Jumps with |u_+ - u_-| at or below this are treated as absent.
  static double eps_state() { return 1e-12; }
  // Collision times closer than this are one time stamp.
  static double eps_time() { return 1e-12; }
  // Front positions closer than this are coincident.
  static double eps_position() { return 1e-12; }
  // |a_pm - lambda| below this snaps to equality when classifying.
  static double eps_speed() { return 1e-10; }
  static double to_double(double v) { return v; }
  static double from_double(double v) { return v; }
  static double parse(const std::string& text) { return std::stod(text); }
  static std::string to_string(double v);
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool kExact = true;
  static constexpr const char* kName = "rational";
  static Rational eps_state() { return Rational(0); }
  static Rational eps_time() { return Rational(0); }
  static Rational eps_position() { return Rational(0); }
  static Rational eps_speed() { return Rational(0); }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  // Exact binary expansion of the double.
  static Rational from_double(double v) { return Rational(v); }
  // Accepts "p/q", integers and finite decimals ("0.25").
  static Rational parse(const std::string& text);
  static std::string to_string(const Rational& v) { return v.str(); }
};

template <typename S>
inline double to_double(const S& v) {
  return ScalarTraits<S>::to_double(v);
}

template <typename S>
inline S abs_value(const S& v) {
  return v < S(0) ? S(-v) : v;
}

template <typename S>
inline int sign_of(const S& v) {
  return (S(0) < v) - (v < S(0));
}

// Sign with a dead zone: |v| <= tol counts as zero.
template <typename S>
inline int sign_with_tolerance(const S& v, const S& tol) {
  if (abs_value(v) <= tol) return 0;
  return sign_of(v);
}

}  // namespace wft

#endif  // WFT_SCALAR_HPP_
