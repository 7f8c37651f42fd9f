#include "firstpat/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace firstpat {

namespace {

constexpr int kAbsoluteEnumerationLimit = 20;  // 20! barely fits uint64; beyond is hopeless anyway

void check_enumeration_size(int n, bool force) {
    if (n < 3) throw std::invalid_argument("census: n must be >= 3");
    if (n > kAbsoluteEnumerationLimit)
        throw std::invalid_argument("census: n! does not fit in 64 bits");
    if (n > kCensusCap && !force) throw CensusCapError(n, estimated_census_seconds(n));
}

// rank {a,b,c} = pair_base[a][b] + (c - b - 1); avoids per-permutation
// closed-form arithmetic in the tally loop.
std::vector<std::vector<std::uint64_t>> make_pair_base(int n) {
    std::vector<std::vector<std::uint64_t>> base(static_cast<std::size_t>(n) + 1);
    std::uint64_t rank = 0;
    for (int a = 1; a + 2 <= n; ++a) {
        base[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(n) + 1, 0);
        for (int b = a + 1; b + 1 <= n; ++b) {
            base[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = rank;
            rank += static_cast<std::uint64_t>(n - b);
        }
    }
    return base;
}

// Runs `visit(state, values)` over every permutation of [n], partitioned into
// n blocks by the value of pi(1). Workers claim whole blocks; per-block
// states merge by summation afterwards, so any thread count and any
// scheduling produce the same result.
template <typename State, typename Visit>
std::vector<State> enumerate_blocked(int n, int threads, Visit visit) {
    std::vector<State> states(static_cast<std::size_t>(n));
    std::atomic<int> next_block{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        try {
            std::vector<int> values(static_cast<std::size_t>(n));
            for (;;) {
                const int block = next_block.fetch_add(1);
                if (block >= n) return;
                const int first = block + 1;
                values[0] = first;
                int fill = 1;
                for (int v = 1; v <= n; ++v)
                    if (v != first) values[static_cast<std::size_t>(fill++)] = v;
                State& state = states[static_cast<std::size_t>(block)];
                do {
                    visit(state, std::span<const int>(values));
                } while (std::next_permutation(values.begin() + 1, values.end()));
            }
        } catch (...) {
            const std::scoped_lock lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next_block.store(n);  // drain remaining blocks
        }
    };
    threads = std::clamp(threads, 1, n);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return states;
}

} // namespace

CensusCapError::CensusCapError(int n_, double estimated_seconds_)
    : std::runtime_error([&] {
          std::ostringstream message;
          message << "census: n = " << n_ << " exceeds the cap " << kCensusCap << " (" << n_
                  << "! permutations, roughly " << estimated_seconds_
                  << " s); pass force to run anyway";
          return message.str();
      }()),
      n(n_),
      estimated_seconds(estimated_seconds_) {}

double estimated_census_seconds(int n) {
    double permutations = 1.0;
    for (int i = 2; i <= n; ++i) permutations *= i;
    return permutations * n * 2e-9;
}

std::uint64_t CensusResult::count_of(const Triple& t) const {
    return counts[lex_rank(t, n)];
}

Rational CensusResult::fraction_of(const Triple& t) const {
    return Rational(count_of(t), total);
}

Rational CensusResult::never_fraction() const {
    return Rational(never_count, total);
}

CensusResult census(int n, int threads, bool force) {
    check_enumeration_size(n, force);
    const auto pair_base = make_pair_base(n);
    const std::uint64_t ranks = triple_count(n);

    struct Tally {
        std::vector<std::uint64_t> counts;
        std::uint64_t never = 0;
        detail::FirstPatternDetector detector;
    };
    auto states = enumerate_blocked<Tally>(n, threads, [&](Tally& tally, std::span<const int> values) {
        if (tally.counts.empty()) tally.counts.assign(ranks, 0);
        if (const FirstOccurrence occurrence = tally.detector(values)) {
            const auto& t = *occurrence;
            ++tally.counts[pair_base[static_cast<std::size_t>(t.a)][static_cast<std::size_t>(t.b)] +
                           static_cast<std::uint64_t>(t.c - t.b - 1)];
        } else {
            ++tally.never;
        }
    });

    CensusResult result;
    result.n = n;
    result.counts.assign(ranks, 0);
    result.total = factorial(n);
    for (const auto& tally : states) {
        result.never_count += tally.never;
        if (tally.counts.empty()) continue;
        for (std::uint64_t i = 0; i < ranks; ++i) result.counts[i] += tally.counts[i];
    }
    return result;
}

ConditionalCensus conditional_first_triple(int n, int k, int threads, bool force) {
    check_enumeration_size(n, force);
    if (k < 3 || k > n)
        throw std::invalid_argument("conditional_first_triple: need 3 <= k <= n");
    const auto pair_base = make_pair_base(n);
    const std::uint64_t ranks = triple_count(n);

    struct Tally {
        std::vector<std::uint64_t> counts;
        std::uint64_t matching = 0;
        detail::FirstPatternDetector detector;
    };
    auto states = enumerate_blocked<Tally>(n, threads, [&](Tally& tally, std::span<const int> values) {
        const std::optional<int> prefix = first_prefix_k(values);
        if (prefix != k) return;
        if (tally.counts.empty()) tally.counts.assign(ranks, 0);
        ++tally.matching;
        // The causing subset: lex-least increasing triple within the k-prefix.
        const FirstOccurrence occurrence = tally.detector(values.first(static_cast<std::size_t>(k)));
        if (!occurrence || occurrence->c != k)
            throw std::logic_error("conditional_first_triple: causing triple must end at k");
        const auto& t = *occurrence;
        ++tally.counts[pair_base[static_cast<std::size_t>(t.a)][static_cast<std::size_t>(t.b)] +
                       static_cast<std::uint64_t>(t.c - t.b - 1)];
    });

    ConditionalCensus result;
    result.n = n;
    result.k = k;
    std::vector<std::uint64_t> merged(ranks, 0);
    for (const auto& tally : states) {
        result.total_matching += tally.matching;
        if (!tally.counts.empty())
            for (std::uint64_t i = 0; i < ranks; ++i) merged[i] += tally.counts[i];
    }
    for (int a = 1; a <= k - 2; ++a)
        for (int b = a + 1; b <= k - 1; ++b) {
            const Triple t(a, b, k);
            result.counts.emplace_back(t, merged[lex_rank(t, n)]);
        }
    return result;
}

PrefixCensus prefix_census(int n, int threads, bool force) {
    check_enumeration_size(n, force);

    struct Tally {
        std::vector<std::uint64_t> by_k;
        std::uint64_t never = 0;
    };
    auto states = enumerate_blocked<Tally>(n, threads, [&](Tally& tally, std::span<const int> values) {
        if (tally.by_k.empty()) tally.by_k.assign(static_cast<std::size_t>(n) + 1, 0);
        if (const std::optional<int> k = first_prefix_k(values))
            ++tally.by_k[static_cast<std::size_t>(*k)];
        else
            ++tally.never;
    });

    PrefixCensus result;
    result.n = n;
    result.counts.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& tally : states) {
        result.never_count += tally.never;
        if (!tally.by_k.empty())
            for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k)
                result.counts[k] += tally.by_k[k];
    }
    return result;
}

std::vector<SegmentReport> segment_shape_report(const CensusResult& result) {
    std::vector<SegmentReport> report;
    const int n = result.n;
    for (int a = 1; a + 2 <= n; ++a)
        for (int b = a + 1; b + 1 <= n; ++b) {
            SegmentReport segment;
            segment.a = a;
            segment.b = b;
            for (int c = b + 1; c <= n; ++c)
                segment.counts.push_back(result.count_of(Triple(a, b, c)));
            segment.strictly_decreasing =
                std::adjacent_find(segment.counts.begin(), segment.counts.end(),
                                   [](std::uint64_t lhs, std::uint64_t rhs) { return lhs <= rhs; }) ==
                segment.counts.end();
            segment.boundary_jump_ok =
                report.empty() || segment.counts.front() >= report.back().counts.back();
            report.push_back(std::move(segment));
        }
    return report;
}

} // namespace firstpat
