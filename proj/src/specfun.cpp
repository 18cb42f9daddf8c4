#include "jcloss/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace jcloss {

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kRelTol = 1e-15;

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// Series B(a,b;z) = z^a sum_k (1-b)_k / (k! (a+k)) z^k, |z| < 1.
// All terms share the sign pattern of (1-b)_k; for b in (0,1] they are
// non-negative, so no cancellation occurs.
double incomplete_beta_series(double a, double b, double z) {
    if (z == 0.0) return 0.0;
    double coeff = 1.0; // (1-b)_k z^k / k!
    double sum = 1.0 / a;
    double comp = 0.0;
    for (int k = 1; k <= kMaxIterations; ++k) {
        coeff *= (k - b) * z / k;
        if (coeff == 0.0) break; // terminating case: b a positive integer
        const double term = coeff / (a + k);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (std::abs(term) <= kRelTol * std::abs(sum)) {
            return std::pow(z, a) * sum;
        }
    }
    if (coeff == 0.0) return std::pow(z, a) * sum;
    throw std::runtime_error("incomplete_beta: series did not converge");
}

} // namespace

double pochhammer(double x, int n) {
    if (n < 0) throw std::domain_error("pochhammer: n must be >= 0");
    double p = 1.0;
    for (int k = 0; k < n; ++k) p *= x + k;
    return p;
}

double ln_pochhammer(double x, int n) {
    if (n < 0) throw std::domain_error("ln_pochhammer: n must be >= 0");
    if (x <= 0.0) throw std::domain_error("ln_pochhammer: x must be > 0");
    return std::lgamma(x + n) - std::lgamma(x);
}

double odd_double_factorial(int n) {
    if (n < 0) throw std::domain_error("odd_double_factorial: n must be >= 0");
    if (n > 150) return std::exp(ln_odd_double_factorial(n));
    double p = 1.0;
    for (int k = 1; k <= n; ++k) p *= 2 * k - 1;
    return p;
}

double ln_odd_double_factorial(int n) {
    if (n < 0) throw std::domain_error("ln_odd_double_factorial: n must be >= 0");
    // (2n-1)!! = (2n)! / (2^n n!)
    return std::lgamma(2.0 * n + 1.0) - n * std::log(2.0) - std::lgamma(n + 1.0);
}

double ln_factorial(int n) {
    if (n < 0) throw std::domain_error("ln_factorial: n must be >= 0");
    return std::lgamma(n + 1.0);
}

double complete_beta(double a, double b) {
    if (a <= 0.0 || b <= 0.0) throw std::domain_error("complete_beta: a, b must be > 0");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double incomplete_beta(double a, double b, double z) {
    if (a <= 0.0 || b <= 0.0) throw std::domain_error("incomplete_beta: a, b must be > 0");
    if (z < 0.0 || z > 1.0) throw std::domain_error("incomplete_beta: z must be in [0,1]");
    if (z <= 0.7) return incomplete_beta_series(a, b, z);
    return complete_beta(a, b) - incomplete_beta_series(b, a, 1.0 - z);
}

double hyp1f1(double a, double b, double z) {
    if (is_nonpositive_integer(b)) {
        throw std::domain_error("hyp1f1: b must not be a non-positive integer");
    }
    double term = 1.0;
    double sum = 1.0;
    double comp = 0.0;
    for (int k = 0; k < kMaxIterations; ++k) {
        term *= (a + k) / (b + k) * z / (k + 1);
        if (term == 0.0) return sum;
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (std::abs(term) <= kRelTol * std::abs(sum)) return sum;
    }
    throw std::runtime_error("hyp1f1: series did not converge within 10000 terms");
}

double hyp2f1_terminating(double a, int b, double c, double z) {
    if (b > 0) throw std::domain_error("hyp2f1_terminating: b must be <= 0");
    const int m = -b;
    if (is_nonpositive_integer(c) && c > -static_cast<double>(m)) {
        throw std::domain_error("hyp2f1_terminating: c hits a non-positive integer");
    }
    double term = 1.0;
    double sum = 1.0;
    double comp = 0.0;
    for (int k = 0; k < m; ++k) {
        term *= (a + k) * (b + k) / (c + k) * z / (k + 1);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace jcloss
