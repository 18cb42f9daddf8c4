// Special functions needed by the closed-form solutions: rising factorials,
// odd double factorials, the (non-normalized) incomplete beta function, the
// confluent hypergeometric series 1F1, and the terminating Gauss series 2F1.
// All functions are pure; domain violations throw std::domain_error.
#pragma once

namespace jcloss {

// Rising factorial (x)_n = x (x+1) ... (x+n-1); (x)_0 = 1.
double pochhammer(double x, int n);

// log (x)_n for x > 0, safe for large n.
double ln_pochhammer(double x, int n);

// (2n-1)!! for n >= 0, with the empty product (-1)!! = 1.
double odd_double_factorial(int n);

// log (2n-1)!!, n >= 0.
double ln_odd_double_factorial(int n);

// log n!
double ln_factorial(int n);

// Non-normalized incomplete beta B(a,b;z) = int_0^z x^(a-1) (1-x)^(b-1) dx,
// a > 0, b > 0, z in [0,1]. Power series about z = 0; for z > 0.7 the
// complement B(a,b) - B(b,a;1-z) keeps the series argument small.
double incomplete_beta(double a, double b, double z);

// Complete beta B(a,b) = Gamma(a) Gamma(b) / Gamma(a+b).
double complete_beta(double a, double b);

// Kummer 1F1(a;b;z) by direct series with compensated summation.
// b must not be a non-positive integer. Relative tolerance 1e-15,
// iteration cap 10000; non-convergence throws std::runtime_error.
double hyp1f1(double a, double b, double z);

// Terminating Gauss series 2F1(a, b; c; z) for integer b <= 0. The sum is
// exact after |b|+1 terms; c must not hit a non-positive integer first.
double hyp2f1_terminating(double a, int b, double c, double z);

} // namespace jcloss
