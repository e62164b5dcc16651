#pragma once

#include <gmpxx.h>

#include <string>

namespace psmp {

// Exact rational scalar. All expansion coefficients and bound constants use
// this type; floating point never enters coefficient arithmetic.
using Rational = mpq_class;

namespace rat {

// x^e for integer e; requires x != 0 when e < 0.
Rational pow_int(const Rational& x, long e);

// Directed bounds on x^e for x > 0 and rational e. Results are exact when e
// is an integer; otherwise the n-th root is rounded outward with absolute
// precision 2^-64 (tightened further if the value itself is smaller).
Rational pow_up(const Rational& x, const Rational& e);
Rational pow_down(const Rational& x, const Rational& e);

// lhs <= base^e, decided exactly (all arguments positive, e rational).
bool le_pow(const Rational& lhs, const Rational& base, const Rational& e);

long floor_long(const Rational& x);
bool is_integer(const Rational& x);

// "p/q" (or plain "p") with canonical sign; inverse of to_string.
Rational parse(const std::string& text);
std::string to_string(const Rational& x);
double to_double(const Rational& x);

}  // namespace rat

}  // namespace psmp
