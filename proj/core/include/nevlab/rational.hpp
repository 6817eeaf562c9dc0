#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "nevlab/errors.hpp"

namespace nevlab {

/// Exact rational scalar for the weight machinery. Arbitrary precision, so
/// pivoting never overflows.
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) {
  return r.str();  // "p/q" (or "p" when the denominator is 1)
}

inline Rational parse_rational(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw Error("parse_rational: malformed rational '" + s + "'");
  }
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r);
}

/// floor(r) as a rational-free integer.
inline long long floor_to_int(const Rational& r) {
  boost::multiprecision::cpp_int num = boost::multiprecision::numerator(r);
  boost::multiprecision::cpp_int den = boost::multiprecision::denominator(r);
  boost::multiprecision::cpp_int q = num / den;
  if (num < 0 && q * den != num) --q;
  return static_cast<long long>(q);
}

}  // namespace nevlab
