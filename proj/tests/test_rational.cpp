#include "firstpat/rational.hpp"

#include <doctest.h>

using namespace firstpat;

TEST_CASE("factorial") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(1) == 1);
    CHECK(factorial(6) == 720);
    CHECK(factorial(20) == Integer("2432902008176640000"));
    CHECK_THROWS_AS(factorial(-1), std::invalid_argument);
}

TEST_CASE("falling factorial, empty product is 1") {
    CHECK(falling_factorial(6, 0) == 1);
    CHECK(falling_factorial(6, 1) == 6);
    CHECK(falling_factorial(6, 3) == 6 * 5 * 4);
    CHECK(falling_factorial(0, 0) == 1);
}

TEST_CASE("binomial with the zero convention") {
    CHECK(binomial(6, 3) == 20);
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(5, 5) == 1);
    CHECK(binomial(5, -1) == 0);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(12, 6) == 924);
    // large argument exactness spot check: C(40,20) = 137846528820
    CHECK(binomial(40, 20) == Integer("137846528820"));
}

TEST_CASE("catalan numbers") {
    const long long expected[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862};
    for (int n = 0; n < 10; ++n) CHECK(catalan(n) == expected[n]);
}

TEST_CASE("harmonic numbers") {
    CHECK(harmonic(0) == 0);
    CHECK(harmonic(1) == 1);
    CHECK(harmonic(4) == Rational(25, 12));
}

TEST_CASE("decimal rendering rounds half to even") {
    CHECK(decimal_string(Rational(1, 6)) == "0.1667");
    CHECK(decimal_string(Rational(1, 40)) == "0.0250");
    CHECK(decimal_string(Rational(1, 32)) == "0.0312");   // 0.03125, half, 2 is even
    CHECK(decimal_string(Rational(3, 32)) == "0.0938");   // 0.09375, half, 7 is odd
    CHECK(decimal_string(Rational(-1, 32)) == "-0.0312");
    CHECK(decimal_string(Rational(11, 360)) == "0.0306");
    CHECK(decimal_string(Rational(132, 720)) == "0.1833");
    CHECK(decimal_string(Rational(1, 2), 0) == "0");
    CHECK(decimal_string(Rational(3, 2), 0) == "2");
    CHECK(decimal_string(Rational(1, 3), 8) == "0.33333333");
    CHECK(decimal_string(Rational(0), 4) == "0.0000");
    CHECK(decimal_string(Rational(1), 4) == "1.0000");
}
