#pragma once

#include <gmpxx.h>

#include <string>

namespace intertwine {

using Rational = mpq_class;

// Exact conversion; every finite double is a dyadic rational.
inline Rational to_rational(double x) { return Rational(x); }

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace intertwine
