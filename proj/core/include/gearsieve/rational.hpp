#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace gearsieve {

// Exact arithmetic for the correlation identities. All tau/R quantities stay
// rational until a report boundary converts them.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den) {
  return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace gearsieve
