#include "firstpat/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace firstpat {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// Chunk-parallel driver: RunChunk(state, chunk_index, chunk_trials) tallies
// into a per-chunk state; states merge by summation in chunk order.
template <typename State, typename RunChunk>
std::vector<State> run_chunks(std::uint64_t trials, int threads, RunChunk run_chunk) {
    const std::uint64_t chunk_count = (trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
    std::vector<State> states(static_cast<std::size_t>(chunk_count));
    std::atomic<std::uint64_t> next_chunk{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        try {
            for (;;) {
                const std::uint64_t chunk = next_chunk.fetch_add(1);
                if (chunk >= chunk_count) return;
                const std::uint64_t begin = chunk * kTrialsPerChunk;
                const std::uint64_t count = std::min(kTrialsPerChunk, trials - begin);
                run_chunk(states[static_cast<std::size_t>(chunk)], chunk, count);
            }
        } catch (...) {
            const std::scoped_lock lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next_chunk.store(chunk_count);
        }
    };
    threads = std::max(threads, 1);
    if (static_cast<std::uint64_t>(threads) > chunk_count) threads = static_cast<int>(chunk_count);
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

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state += kGolden);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 expander{seed};
    for (auto& word : state_) word = expander.next();
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t Xoshiro256StarStar::next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

std::uint64_t Xoshiro256StarStar::next_below(std::uint64_t bound) {
    unsigned __int128 product = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = -bound % bound;
        while (low < threshold) {
            product = static_cast<unsigned __int128>(next()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

Xoshiro256StarStar make_stream(std::uint64_t seed, std::uint64_t index) {
    return Xoshiro256StarStar(seed + index * 4 * kGolden);
}

MCEstimate make_estimate(std::string event, std::uint64_t hits, std::uint64_t trials) {
    MCEstimate estimate;
    estimate.event = std::move(event);
    estimate.trials = trials;
    estimate.hits = hits;
    estimate.point = static_cast<double>(hits) / static_cast<double>(trials);
    estimate.stderr_value =
        std::sqrt(estimate.point * (1.0 - estimate.point) / static_cast<double>(trials));
    return estimate;
}

std::uint64_t SampleResult::hits_of(const Triple& t) const {
    const auto it = hits.find(t);
    return it == hits.end() ? 0 : it->second;
}

MCEstimate SampleResult::estimate(const Triple& t) const {
    return make_estimate(to_string(t), hits_of(t), trials);
}

MCEstimate SampleResult::never_estimate() const {
    return make_estimate("never", never_hits, trials);
}

std::vector<MCEstimate> SampleResult::estimates() const {
    std::vector<MCEstimate> rows;
    rows.reserve(hits.size() + 1);
    for (const auto& [triple, count] : hits) rows.push_back(make_estimate(to_string(triple), count, trials));
    rows.push_back(never_estimate());
    return rows;
}

HardCapExceeded::HardCapExceeded(std::uint64_t hard_cap_, std::uint64_t position_)
    : std::runtime_error([&] {
          std::ostringstream message;
          message << "sample_infinite: trial exceeded hard cap " << hard_cap_ << " at position "
                  << position_ << "; treated as a failure, not a censoring";
          return message.str();
      }()),
      hard_cap(hard_cap_),
      position(position_) {}

void fisher_yates(Xoshiro256StarStar& rng, std::span<int> values) {
    for (std::size_t i = values.size(); i > 1; --i)
        std::swap(values[i - 1], values[rng.next_below(i)]);
}

SampleResult sample_finite(int n, const RngSpec& rng, std::uint64_t trials, int threads) {
    if (n < 3) throw std::invalid_argument("sample_finite: n must be >= 3");
    if (trials == 0) throw std::invalid_argument("sample_finite: trials must be >= 1");
    const auto started = std::chrono::steady_clock::now();
    const std::uint64_t ranks = triple_count(n);

    struct Tally {
        std::vector<std::uint64_t> counts;
        std::uint64_t never = 0;
        detail::FirstPatternDetector detector;
        std::vector<int> values;
    };
    auto states = run_chunks<Tally>(
        trials, threads, [&](Tally& tally, std::uint64_t chunk, std::uint64_t count) {
            if (tally.counts.empty()) {
                tally.counts.assign(ranks, 0);
                tally.values.resize(static_cast<std::size_t>(n));
            }
            Xoshiro256StarStar stream = make_stream(rng.seed, chunk);
            for (std::uint64_t trial = 0; trial < count; ++trial) {
                std::iota(tally.values.begin(), tally.values.end(), 1);
                fisher_yates(stream, tally.values);
                if (const FirstOccurrence occurrence = tally.detector(tally.values))
                    ++tally.counts[lex_rank(*occurrence, n)];
                else
                    ++tally.never;
            }
        });

    SampleResult result;
    result.size = SizeSpec::finite(n);
    result.rng = rng;
    result.trials = trials;
    std::vector<std::uint64_t> merged(ranks, 0);
    for (const auto& tally : states) {
        result.never_hits += tally.never;
        if (tally.counts.empty()) continue;
        for (std::uint64_t i = 0; i < ranks; ++i) merged[i] += tally.counts[i];
    }
    for (std::uint64_t i = 0; i < ranks; ++i)
        if (merged[i] > 0) result.hits.emplace(lex_unrank(i, n), merged[i]);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

SampleResult sample_infinite(const RngSpec& rng, std::uint64_t trials, std::uint64_t hard_cap,
                             int threads) {
    if (trials == 0) throw std::invalid_argument("sample_infinite: trials must be >= 1");
    if (hard_cap < 3) throw std::invalid_argument("sample_infinite: hard_cap must be >= 3");
    const auto started = std::chrono::steady_clock::now();

    struct Tally {
        std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> counts;
        std::uint64_t max_stop = 0;
    };
    auto states = run_chunks<Tally>(
        trials, threads, [&](Tally& tally, std::uint64_t chunk, std::uint64_t count) {
            Xoshiro256StarStar stream = make_stream(rng.seed, chunk);
            for (std::uint64_t trial = 0; trial < count; ++trial) {
                const auto [s0, r0] =
                    detail::infinite_trial([&] { return stream.next_unit(); }, hard_cap);
                ++tally.counts[{s0, r0}];
                tally.max_stop = std::max(tally.max_stop, r0);
            }
        });

    SampleResult result;
    result.size = SizeSpec::infinite();
    result.rng = rng;
    result.trials = trials;
    for (const auto& tally : states) {
        result.max_stop_position = std::max(result.max_stop_position, tally.max_stop);
        for (const auto& [event, count] : tally.counts)
            result.hits[Triple(1, static_cast<std::int64_t>(event.first),
                               static_cast<std::int64_t>(event.second))] += count;
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

namespace {

ZScoreRow make_row(std::string event, const Rational& exact, std::uint64_t hits,
                   std::uint64_t trials) {
    ZScoreRow row;
    row.event = std::move(event);
    row.exact = exact;
    row.hits = hits;
    const MCEstimate estimate = make_estimate(row.event, hits, trials);
    row.point = estimate.point;
    row.stderr_value = estimate.stderr_value;
    if (row.stderr_value == 0.0) {
        row.excluded = true;
        row.note = "stderr 0 (hits in {0, trials}); excluded";
    } else {
        row.z = (row.point - exact.convert_to<double>()) / row.stderr_value;
        row.flagged = std::abs(row.z) > 4.0;
    }
    return row;
}

} // namespace

CompareReport compare_report(const DistributionTable& table, const SampleResult& sample) {
    if (table.size != sample.size)
        throw std::invalid_argument("compare_report: mismatched supports (size specs differ)");
    if (sample.trials == 0 || (sample.hits.empty() && sample.never_hits == 0))
        throw std::invalid_argument("compare_report: empty estimate set");

    CompareReport report;
    std::uint64_t covered_hits = 0;
    for (const auto& entry : table.entries) {
        const std::uint64_t hits = sample.hits_of(entry.triple);
        covered_hits += hits;
        report.rows.push_back(
            make_row(to_string(entry.triple), entry.probability, hits, sample.trials));
    }
    if (table.size.is_infinite()) {
        // Everything the sampler saw beyond the truncation box, against the
        // exact analytic tail.
        const std::uint64_t tail_hits = sample.trials - covered_hits - sample.never_hits;
        report.rows.push_back(make_row("tail", table.tail_mass, tail_hits, sample.trials));
    } else {
        for (const auto& [triple, count] : sample.hits)
            if (!table.find(triple))
                throw std::invalid_argument("compare_report: mismatched supports (event " +
                                            to_string(triple) + " absent from table)");
    }
    report.rows.push_back(make_row("never", table.never_mass, sample.never_hits, sample.trials));

    for (const auto& row : report.rows) {
        if (row.excluded) continue;
        report.max_abs_z = std::max(report.max_abs_z, std::abs(row.z));
        if (row.flagged) ++report.flagged_count;
    }
    return report;
}

} // namespace firstpat
