#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace firstpat {

// All probabilities in this library are exact rationals; floating point only
// appears at the display/statistics boundary.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// n!, n >= 0.
Integer factorial(int n);

// n (n-1) ... (n-k+1), k factors; k = 0 is the empty product 1.
Integer falling_factorial(const Integer& n, int k);

// C(n,k) with the convention C(n,k) = 0 whenever k < 0 or k > n.
Integer binomial(long long n, long long k);

// C(2n,n) / (n+1).
Integer catalan(int n);

// H_m = 1 + 1/2 + ... + 1/m; H_0 = 0.
Rational harmonic(int m);

// Fixed-point decimal rendering with round-half-even, e.g. 1/6 -> "0.1667".
// Display only; never used in computations.
std::string decimal_string(const Rational& value, int places = 4);

} // namespace firstpat
