#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace medbid {

/// Exact arbitrary-precision rational, the number type of the "rational"
/// numeric mode.  Float mode uses plain double.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class Num>
struct numeric_traits;

template <>
struct numeric_traits<double> {
  static constexpr bool exact = false;
  /// Relative tolerance used by verification-style comparisons in float mode.
  static constexpr double tolerance = 1e-9;
  static constexpr const char* mode_name = "f64";
};

template <>
struct numeric_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr double tolerance = 0.0;
  static constexpr const char* mode_name = "rational";
};

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }

template <class Num>
Num pow2(int j);

template <>
inline double pow2<double>(int j) {
  return std::ldexp(1.0, j);
}

template <>
inline Rational pow2<Rational>(int j) {
  if (j >= 0) return Rational(BigInt(1) << j);
  return Rational(BigInt(1), BigInt(1) << (-j));
}

/// Exact rational value of a double (every finite double is a binary rational).
inline Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  int exp = 0;
  double mant = std::frexp(v, &exp);  // v = mant * 2^exp, |mant| in [0.5, 1)
  long long scaled = static_cast<long long>(std::ldexp(mant, 53));
  return Rational(BigInt(scaled)) * pow2<Rational>(exp - 53);
}

/// Parses "p/q" (or a bare integer "p") with p >= 0, q >= 1.
inline Rational parse_rational(const std::string& text) {
  auto bad = [&](const char* why) {
    throw std::invalid_argument("bad rational '" + text + "': " + why);
  };
  if (text.empty()) bad("empty");
  const auto slash = text.find('/');
  const std::string num_part = text.substr(0, slash);
  if (num_part.empty() || num_part.find_first_not_of("0123456789") != std::string::npos)
    bad("numerator must be a non-negative integer");
  BigInt p(num_part);
  BigInt q(1);
  if (slash != std::string::npos) {
    const std::string den_part = text.substr(slash + 1);
    if (den_part.empty() || den_part.find_first_not_of("0123456789") != std::string::npos)
      bad("denominator must be a positive integer");
    q = BigInt(den_part);
    if (q == 0) bad("denominator is zero");
  }
  return Rational(p, q);
}

/// Canonical text form: reduced "p/q", with "/1" omitted.
inline std::string format_rational(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += '/';
    s += denominator(r).str();
  }
  return s;
}

}  // namespace medbid
