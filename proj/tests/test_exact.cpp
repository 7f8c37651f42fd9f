#include "firstpat/exact.hpp"

#include "firstpat/oracle.hpp"

#include <doctest.h>

using namespace firstpat;

TEST_CASE("size spec") {
    CHECK(SizeSpec::finite(3).is_finite());
    CHECK(SizeSpec::finite(6).n() == 6);
    CHECK(SizeSpec::infinite().is_infinite());
    CHECK_THROWS_AS(SizeSpec::finite(2), std::invalid_argument);
    CHECK_THROWS_AS(SizeSpec::infinite().n(), std::logic_error);
    CHECK(SizeSpec::finite(6) == SizeSpec::finite(6));
    CHECK(SizeSpec::finite(6) != SizeSpec::infinite());
}

TEST_CASE("p_12r") {
    CHECK(p_12r(3) == Rational(1, 6));
    CHECK(p_12r(4) == Rational(1, 12));
    CHECK(p_12r(6) == Rational(1, 30));
    CHECK_THROWS_AS(p_12r(2), std::invalid_argument);
}

TEST_CASE("p_1sr_infinite") {
    CHECK(p_1sr_infinite(2, 3) == Rational(1, 6));
    CHECK(p_1sr_infinite(2, 3) == p_12r(3));
    CHECK(p_1sr_infinite(3, 4) == Rational(1, 24));
    CHECK(p_1sr_infinite(4, 6) == Rational(1, 90));
    CHECK_THROWS_AS(p_1sr_infinite(1, 3), std::invalid_argument);
    CHECK_THROWS_AS(p_1sr_infinite(3, 3), std::invalid_argument);
}

TEST_CASE("p_1sr_finite matches the frozen n = 6 values") {
    CHECK(p_1sr_finite(6, 3, 4) == Rational(50, 720));
    CHECK(p_1sr_finite(6, 3, 5) == Rational(28, 720));
    CHECK(p_1sr_finite(6, 2, 4) == Rational(60, 720));
    CHECK(p_1sr_finite(6, 4, 6) == Rational(16, 720));
    CHECK(p_1sr_finite(6, 4, 5) == Rational(26, 720));
    CHECK(p_1sr_finite(6, 5, 6) == Rational(16, 720));
    CHECK_THROWS_AS(p_1sr_finite(6, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(p_1sr_finite(6, 4, 4), std::invalid_argument);
    CHECK_THROWS_AS(p_1sr_finite(6, 2, 7), std::invalid_argument);
}

TEST_CASE("s = 2 reduces to p_12r") {
    for (int n = 3; n <= 20; ++n)
        for (int r = 3; r <= n; ++r) CHECK(p_1sr_finite(n, 2, r) == p_12r(r));
}

TEST_CASE("two-term p_13r form equals the general closed-form sum") {
    CHECK(p_13r_finite(6, 4) == Rational(50, 720));
    CHECK(p_13r_finite(6, 6) == Rational(18, 720));
    for (int n = 4; n <= 20; ++n)
        for (int r = 4; r <= n; ++r) CHECK(p_13r_finite(n, r) == p_1sr_finite(n, 3, r));
    CHECK_THROWS_AS(p_13r_finite(6, 3), std::invalid_argument);
    CHECK_THROWS_AS(p_13r_finite(6, 7), std::invalid_argument);
}

TEST_CASE("telescoping sums") {
    for (int n = 4; n <= 30; ++n) {
        Rational sum_12 = 0;
        for (int r = 3; r <= n; ++r) sum_12 += p_12r(r);
        CHECK(sum_12 == Rational(1, 2) - Rational(1, n));

        Rational sum_13 = 0;
        for (int r = 4; r <= n; ++r) sum_13 += p_1sr_finite(n, 3, r);
        CHECK(sum_13 == Rational(1, 6) - Rational(1, Integer(n) * (n - 1)));
    }
}

TEST_CASE("p_x_ge_234_exact") {
    CHECK(p_x_ge_234_exact(3) == Rational(5, 6));
    CHECK(p_x_ge_234_exact(6) == Rational(326, 720));
    const double scaled = Rational(p_x_ge_234_exact(1000) * 1000).convert_to<double>();
    CHECK(std::abs(scaled - 2.718281828459045) < 1e-3);
    CHECK_THROWS_AS(p_x_ge_234_exact(2), std::invalid_argument);
}

TEST_CASE("the a=1 total mass complements p_x_ge_234_exact for n up to 30") {
    for (int n = 3; n <= 30; ++n) {
        Rational a1_mass = 0;
        for (int s = 2; s < n; ++s)
            for (int r = s + 1; r <= n; ++r) a1_mass += p_1sr_finite(n, s, r);
        CHECK(Rational(1) - a1_mass == p_x_ge_234_exact(n));
    }
}

TEST_CASE("avoidance probability") {
    CHECK(avoid_probability(1) == 1);
    CHECK(avoid_probability(3) == Rational(5, 6));
    CHECK(avoid_probability(6) == Rational(132, 720));
    for (int n = 1; n <= 12; ++n)
        CHECK(avoid_probability(n) == Rational(catalan(n), factorial(n)));
    CHECK_THROWS_AS(avoid_probability(0), std::invalid_argument);
}

TEST_CASE("prefix length law") {
    CHECK(prefix_first_k_probability(3) == Rational(1, 6));
    CHECK(prefix_first_k_probability(4) == Rational(1, 4));
    CHECK(prefix_first_k_probability(5) == Rational(7, 30));
    CHECK_THROWS_AS(prefix_first_k_probability(2), std::invalid_argument);
    // partial sums: sum_{k=3}^{K} = 1 - C(2K,K)/(K+1)!
    for (int K = 3; K <= 40; ++K) {
        Rational sum = 0;
        for (int k = 3; k <= K; ++k) sum += prefix_first_k_probability(k);
        CHECK(sum == Rational(1) - avoid_probability(K));
    }
}

TEST_CASE("analytic tails") {
    CHECK(tail_beyond_r(2, 3) == Rational(1, 3));
    CHECK(tail_beyond_s(2) == Rational(1, 2));
    CHECK(infinite_tail_mass(5, 10) == Rational(49, 120));
    CHECK_THROWS_AS(infinite_tail_mass(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(tail_beyond_r(2, 1), std::invalid_argument);

    // entries + tail = 1 exactly, several boxes
    const std::pair<int, int> boxes[] = {{2, 3}, {3, 4}, {5, 10}, {50, 200}};
    for (const auto& [s_max, r_max] : boxes) {
        Rational entries = 0;
        for (int s = 2; s <= s_max; ++s)
            for (int r = s + 1; r <= r_max; ++r) entries += p_1sr_infinite(s, r);
        CHECK(entries + infinite_tail_mass(s_max, r_max) == 1);
    }
}

TEST_CASE("finite probabilities approach the infinite ones at rate 1/n") {
    // Empirical constant from n = 10, then verified at larger n: the k >= 1
    // terms each carry at least one 1/n factor.
    Rational constant = 0;
    for (int s = 2; s < 8; ++s)
        for (int r = s + 1; r <= 8; ++r) {
            const Rational diff = p_1sr_finite(10, s, r) - p_1sr_infinite(s, r);
            CHECK(diff >= 0);
            constant = std::max(constant, Rational(diff * 10));
        }
    CHECK(constant > 0);
    for (const int n : {100, 1000, 10000})
        for (int s = 2; s < 8; ++s)
            for (int r = s + 1; r <= 8; ++r) {
                const Rational diff = p_1sr_finite(n, s, r) - p_1sr_infinite(s, r);
                CHECK(Rational(diff * n) <= constant);
            }
}

TEST_CASE("infinite distribution table") {
    const DistributionTable table =
        distribution_table(SizeSpec::infinite(), Triple(1, 5, 10));
    CHECK(table.size.is_infinite());
    CHECK(table.entries.size() == 26);
    CHECK(table.never_mass == 0);
    CHECK(table.tail_mass == Rational(49, 120));
    CHECK(table.total_mass() == 1);
    CHECK(table.find(Triple(1, 3, 4)) != nullptr);
    CHECK(table.find(Triple(1, 3, 4))->probability == Rational(1, 24));
    CHECK(table.find(Triple(1, 6, 7)) == nullptr);
    for (std::size_t i = 1; i < table.entries.size(); ++i)
        CHECK(table.entries[i - 1].triple < table.entries[i].triple);

    const DistributionTable wide = distribution_table(SizeSpec::infinite(), kDefaultTruncation);
    CHECK(wide.total_mass() == 1);

    CHECK_THROWS_AS(distribution_table(SizeSpec::infinite()), std::invalid_argument);
    CHECK_THROWS_AS(distribution_table(SizeSpec::infinite(), Triple(2, 3, 4)),
                    std::invalid_argument);
}

TEST_CASE("finite distribution table") {
    const DistributionTable table = distribution_table(SizeSpec::finite(4));
    CHECK(table.entries.size() == 4);
    CHECK(table.total_mass() == 1);
    CHECK(table.find(Triple(1, 2, 3))->probability == Rational(4, 24));
    CHECK(table.find(Triple(1, 2, 4))->probability == Rational(2, 24));
    CHECK(table.find(Triple(1, 3, 4))->probability == Rational(2, 24));
    CHECK(table.find(Triple(2, 3, 4))->probability == Rational(2, 24));
    CHECK(table.never_mass == Rational(14, 24));
    CHECK(table.find(Triple(1, 2, 3))->provenance == Provenance::formula);
    CHECK(table.find(Triple(2, 3, 4))->provenance == Provenance::oracle);

    CHECK_THROWS_AS(distribution_table(SizeSpec::finite(4), Triple(1, 2, 3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(distribution_table(SizeSpec::finite(12)), CensusCapError);
}

TEST_CASE("every table probability is in [0,1] and denominators divide n!") {
    for (const int n : {3, 5, 8}) {
        const DistributionTable table = distribution_table(SizeSpec::finite(n));
        const Integer total = factorial(n);
        for (const auto& entry : table.entries) {
            CHECK(entry.probability >= 0);
            CHECK(entry.probability <= 1);
            CHECK(total % denominator(entry.probability) == 0);
        }
        CHECK(total % denominator(table.never_mass) == 0);
    }
}

TEST_CASE("medians") {
    CHECK(median(SizeSpec::infinite()) == FirstOccurrence(Triple(1, 3, 4)));
    CHECK(median(SizeSpec::finite(6)) == FirstOccurrence(Triple(1, 4, 5)));
    // small n: the never mass exceeds 1/2, so the never side is the median
    CHECK(median(SizeSpec::finite(3)) == std::nullopt);
    CHECK(median(SizeSpec::finite(4)) == std::nullopt);
    CHECK(median(SizeSpec::finite(5)) == FirstOccurrence(Triple(2, 3, 4)));
    CHECK(median(SizeSpec::finite(7)) == FirstOccurrence(Triple(1, 3, 7)));
    CHECK_THROWS_AS(median(SizeSpec::finite(12)), CensusCapError);
}

TEST_CASE("median satisfies its defining inequalities against the table") {
    for (const int n : {5, 6, 7, 8}) {
        const FirstOccurrence m = median(SizeSpec::finite(n));
        REQUIRE(m.has_value());
        const DistributionTable table = distribution_table(SizeSpec::finite(n));
        Rational at_or_below = 0;
        Rational strictly_below = 0;
        for (const auto& entry : table.entries) {
            if (entry.triple <= *m) at_or_below += entry.probability;
            if (entry.triple < *m) strictly_below += entry.probability;
        }
        CHECK(at_or_below >= Rational(1, 2));
        CHECK(Rational(1) - strictly_below >= Rational(1, 2));
    }
}
