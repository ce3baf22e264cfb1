#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hardy {

/// Arbitrary-precision rational scalar for the exact solver paths.
using Rational = boost::multiprecision::cpp_rational;

/// Exact conversion: every finite double is a dyadic rational.
inline Rational exact_rational(double x) { return Rational(x); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

/// Parses "num/den" or plain integer strings.
inline Rational parse_rational(const std::string& text) {
  Rational r;
  std::istringstream is(text);
  if (!(is >> r) || !is.eof()) throw std::invalid_argument("not a rational: " + text);
  return r;
}

}  // namespace hardy
