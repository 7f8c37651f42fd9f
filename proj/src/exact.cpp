#include "firstpat/exact.hpp"

#include "firstpat/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace firstpat {

SizeSpec SizeSpec::finite(int n) {
    if (n < 3) throw std::invalid_argument("SizeSpec: finite n must be >= 3");
    return SizeSpec(n);
}

int SizeSpec::n() const {
    if (!n_) throw std::logic_error("SizeSpec: n() on the infinite case");
    return *n_;
}

Rational p_12r(int r) {
    if (r < 3) throw std::invalid_argument("p_12r: r must be >= 3");
    return Rational(1, Integer(r - 1) * r);
}

Rational p_1sr_infinite(int s, int r) {
    if (s < 2 || r <= s) throw std::invalid_argument("p_1sr_infinite: need 2 <= s < r");
    return Rational(1, Integer(s - 1) * (r - 1) * r);
}

Rational p_1sr_finite(int n, int s, int r) {
    if (s < 2 || r <= s || r > n)
        throw std::invalid_argument("p_1sr_finite: need 2 <= s < r <= n");
    Rational sum = 0;
    for (int k = 0; k <= s - 2; ++k) {
        const Integer numerator = binomial(s - 2, k) * binomial(r - k - 2, s - k - 1) *
                                  factorial(s - k - 2) * factorial(r - s - 1);
        if (numerator == 0) continue;
        const Integer denominator = falling_factorial(n, k) * factorial(r - k);
        sum += Rational(numerator, denominator);
    }
    return sum;
}

Rational p_13r_finite(int n, int r) {
    if (r < 4 || r > n) throw std::invalid_argument("p_13r_finite: need 4 <= r <= n");
    const Rational increasing_first = Rational(1, r - 1) - Rational(1, r);
    const Rational blocked_second = Rational(1, r - 2) - Rational(1, r - 1);
    return increasing_first / 2 + blocked_second / n;
}

Rational p_x_ge_234_exact(int n) {
    if (n < 3) throw std::invalid_argument("p_x_ge_234_exact: n must be >= 3");
    Rational term = 1;  // 1/m! for m = 0
    Rational sum = 1;
    for (int m = 1; m < n; ++m) {
        term /= m;
        sum += term;
    }
    return sum / n;
}

Rational avoid_probability(int n) {
    if (n < 1) throw std::invalid_argument("avoid_probability: n must be >= 1");
    return Rational(binomial(2LL * n, n), factorial(n + 1));
}

Rational prefix_first_k_probability(int k) {
    if (k < 3) throw std::invalid_argument("prefix_first_k_probability: k must be >= 3");
    return Rational(binomial(2LL * k - 2, k - 1), factorial(k)) -
           Rational(binomial(2LL * k, k), factorial(k + 1));
}

Rational tail_beyond_r(int s, int r_max) {
    if (s < 2 || r_max < s) throw std::invalid_argument("tail_beyond_r: need s >= 2, r_max >= s");
    return Rational(1, Integer(s - 1) * r_max);
}

Rational tail_beyond_s(int s_max) {
    if (s_max < 2) throw std::invalid_argument("tail_beyond_s: s_max must be >= 2");
    return Rational(1, s_max);
}

Rational infinite_tail_mass(int s_max, int r_max) {
    if (s_max < 2 || r_max <= s_max)
        throw std::invalid_argument("infinite_tail_mass: need 2 <= s_max < r_max");
    Rational tail = tail_beyond_s(s_max);
    for (int s = 2; s <= s_max; ++s) tail += tail_beyond_r(s, r_max);
    return tail;
}

const char* to_string(Provenance provenance) {
    return provenance == Provenance::formula ? "formula" : "oracle";
}

Rational DistributionTable::total_mass() const {
    Rational total = never_mass + tail_mass;
    for (const auto& entry : entries) total += entry.probability;
    return total;
}

const TableEntry* DistributionTable::find(const Triple& t) const {
    const auto it = std::lower_bound(
        entries.begin(), entries.end(), t,
        [](const TableEntry& entry, const Triple& key) { return entry.triple < key; });
    return (it != entries.end() && it->triple == t) ? &*it : nullptr;
}

namespace {

DistributionTable finite_table(int n, int threads) {
    const CensusResult result = census(n, threads);
    DistributionTable table;
    table.size = SizeSpec::finite(n);
    table.entries.reserve(triple_count(n));
    for (std::uint64_t rank = 0; rank < triple_count(n); ++rank) {
        const Triple t = lex_unrank(rank, n);
        TableEntry entry;
        entry.triple = t;
        if (t.a == 1) {
            entry.probability = p_1sr_finite(n, static_cast<int>(t.b), static_cast<int>(t.c));
            entry.provenance = Provenance::formula;
            if (entry.probability != result.fraction_of(t))
                throw std::logic_error("distribution_table: closed form disagrees with census");
        } else {
            entry.probability = result.fraction_of(t);
            entry.provenance = Provenance::oracle;
        }
        table.entries.push_back(std::move(entry));
    }
    table.never_mass = avoid_probability(n);
    if (table.never_mass != result.never_fraction())
        throw std::logic_error("distribution_table: avoidance formula disagrees with census");
    return table;
}

DistributionTable infinite_table(const Triple& truncation) {
    if (truncation.a != 1)
        throw std::invalid_argument("distribution_table: truncation must be {1, s_max, r_max}");
    const int s_max = static_cast<int>(truncation.b);
    const int r_max = static_cast<int>(truncation.c);
    DistributionTable table;
    table.size = SizeSpec::infinite();
    table.truncation = truncation;
    for (int s = 2; s <= s_max; ++s)
        for (int r = s + 1; r <= r_max; ++r)
            table.entries.push_back({Triple(1, s, r), p_1sr_infinite(s, r), Provenance::formula});
    std::sort(table.entries.begin(), table.entries.end(),
              [](const TableEntry& lhs, const TableEntry& rhs) { return lhs.triple < rhs.triple; });
    table.tail_mass = infinite_tail_mass(s_max, r_max);
    table.never_mass = 0;
    return table;
}

} // namespace

DistributionTable distribution_table(const SizeSpec& size, std::optional<Triple> truncation,
                                     int threads) {
    if (size.is_finite()) {
        if (truncation)
            throw std::invalid_argument("distribution_table: finite tables take no truncation");
        return finite_table(size.n(), threads);
    }
    if (!truncation)
        throw std::invalid_argument("distribution_table: infinite tables require a truncation");
    return infinite_table(*truncation);
}

namespace {

FirstOccurrence infinite_median() {
    const Rational half(1, 2);
    Rational cumulative = 0;
    for (int s = 2;; ++s) {
        // Whole-block mass for this s telescopes to 1/((s-1)s); skipping a
        // block outright is what makes the walk terminate (the s = 2 block
        // alone reaches 1/2 only in the limit, at no finite r).
        const Rational block = Rational(1, Integer(s - 1) * s);
        if (cumulative + block <= half) {
            cumulative += block;
            continue;
        }
        for (int r = s + 1;; ++r) {
            const Rational below = cumulative;
            cumulative += p_1sr_infinite(s, r);
            if (cumulative >= half && Rational(1) - below >= half) return Triple(1, s, r);
        }
    }
}

FirstOccurrence finite_median(int n, int threads) {
    const DistributionTable table = distribution_table(SizeSpec::finite(n), std::nullopt, threads);
    const Rational half(1, 2);
    Rational cumulative = 0;
    for (const auto& entry : table.entries) {
        const Rational below = cumulative;
        cumulative += entry.probability;
        if (cumulative >= half && Rational(1) - below >= half) return entry.triple;
    }
    // No triple qualifies; the never side carries at least half the mass.
    if (table.never_mass < half) throw std::logic_error("median: no median found");
    return std::nullopt;
}

} // namespace

FirstOccurrence median(const SizeSpec& size) {
    return size.is_infinite() ? infinite_median() : finite_median(size.n(), 1);
}

} // namespace firstpat
