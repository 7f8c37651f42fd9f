#include "firstpat/rational.hpp"

#include <stdexcept>

namespace firstpat {

Integer factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial: n must be >= 0");
    Integer result = 1;
    for (int i = 2; i <= n; ++i) result *= i;
    return result;
}

Integer falling_factorial(const Integer& n, int k) {
    if (k < 0) throw std::invalid_argument("falling_factorial: k must be >= 0");
    Integer result = 1;
    for (int i = 0; i < k; ++i) result *= n - i;
    return result;
}

Integer binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Integer result = 1;
    // Exact at every step: the partial product after i factors is C(n-k+i, i) * ...
    for (long long i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

Integer catalan(int n) {
    if (n < 0) throw std::invalid_argument("catalan: n must be >= 0");
    return binomial(2LL * n, n) / (n + 1);
}

Rational harmonic(int m) {
    if (m < 0) throw std::invalid_argument("harmonic: m must be >= 0");
    Rational sum = 0;
    for (int i = 1; i <= m; ++i) sum += Rational(1, i);
    return sum;
}

std::string decimal_string(const Rational& value, int places) {
    if (places < 0) throw std::invalid_argument("decimal_string: places must be >= 0");
    Integer num = numerator(value);
    Integer den = denominator(value);
    const bool negative = num < 0;
    if (negative) num = -num;

    Integer scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;

    Integer scaled = num * scale;
    Integer quotient = scaled / den;
    const Integer remainder = scaled % den;
    const Integer twice = remainder * 2;
    if (twice > den || (twice == den && (quotient & 1) != 0)) ++quotient;

    const Integer int_part = quotient / scale;
    const Integer frac_part = quotient % scale;

    std::string out;
    if (negative && (int_part != 0 || frac_part != 0)) out += '-';
    out += int_part.str();
    if (places > 0) {
        std::string frac = frac_part.str();
        out += '.';
        out += std::string(static_cast<std::size_t>(places) - frac.size(), '0');
        out += frac;
    }
    return out;
}

} // namespace firstpat
