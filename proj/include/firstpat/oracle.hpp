#pragma once

#include "firstpat/core.hpp"
#include "firstpat/rational.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace firstpat {

/// Enumeration above this size is refused unless forced: 11! permutations
/// is desk-scale minutes; each further factor of n is not.
inline constexpr int kCensusCap = 11;

struct CensusCapError : std::runtime_error {
    CensusCapError(int n_, double estimated_seconds_);
    int n;
    double estimated_seconds;
};

/// Exact tally of first-occurrence outcomes over all n! permutations.
struct CensusResult {
    int n = 0;
    std::vector<std::uint64_t> counts;  ///< by lex_rank, size C(n,3)
    std::uint64_t never_count = 0;
    Integer total = 0;  ///< n!

    std::uint64_t count_of(const Triple& t) const;
    Rational fraction_of(const Triple& t) const;
    Rational never_fraction() const;
};

/// Visits all n! permutations, in blocks fixed by the value of pi(1); blocks
/// merge by summation, so the result is identical for every thread count.
CensusResult census(int n, int threads = 1, bool force = false);

/// Tally of the lex-least increasing triple within the k-prefix, over the
/// permutations whose first pattern-containing prefix has length exactly k.
/// Every tallied triple has c = k (an increasing triple with c < k inside
/// the prefix would contradict the minimality of k); this is asserted.
struct ConditionalCensus {
    int n = 0;
    int k = 0;
    std::vector<std::pair<Triple, std::uint64_t>> counts;  ///< all triples with c = k, lex order
    std::uint64_t total_matching = 0;
};

ConditionalCensus conditional_first_triple(int n, int k, int threads = 1, bool force = false);

/// counts[k] = number of permutations of [n] whose first pattern-containing
/// prefix has length exactly k (k = 3..n); the rest avoid 123.
struct PrefixCensus {
    int n = 0;
    std::vector<std::uint64_t> counts;  ///< index by k, size n+1
    std::uint64_t never_count = 0;
};

PrefixCensus prefix_census(int n, int threads = 1, bool force = false);

/// One row per leading pair (a,b): the counts for c = b+1..n, whether they
/// strictly decrease, and whether the segment starts no lower than the
/// previous segment ended. Observation tool only; asserts nothing.
struct SegmentReport {
    int a = 0;
    int b = 0;
    std::vector<std::uint64_t> counts;
    bool strictly_decreasing = false;
    bool boundary_jump_ok = false;
};

std::vector<SegmentReport> segment_shape_report(const CensusResult& result);

/// Cost model behind the cap refusal message.
double estimated_census_seconds(int n);

} // namespace firstpat
