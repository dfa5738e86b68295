#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace l2est {

// Exact rational scalar used for kernel construction and the derived norms.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rat(long long num, long long den = 1) { return Rational(num, den); }

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Rational rat_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace l2est
