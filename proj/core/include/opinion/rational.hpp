#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace opinion {

using Rational = boost::rational<long long>;

// Parses "7" or "7/2". Throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& s);

std::string to_string(const Rational& r);

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline bool is_integer(const Rational& r) { return r.denominator() == 1; }

}  // namespace opinion
