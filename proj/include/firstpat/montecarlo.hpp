#pragma once

#include "firstpat/core.hpp"
#include "firstpat/exact.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace firstpat {

/// splitmix64 (Steele/Lea/Flood); used only to expand seeds into states.
struct SplitMix64 {
    std::uint64_t state = 0;
    std::uint64_t next();
};

/// xoshiro256** 1.0 (Blackman/Vigna). Pinned here rather than <random> so
/// that estimates are bit-reproducible independent of the standard library.
class Xoshiro256StarStar {
public:
    explicit Xoshiro256StarStar(std::uint64_t seed);

    std::uint64_t next();
    /// Uniform in [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    /// Unbiased uniform in [0, bound); Lemire rejection.
    std::uint64_t next_below(std::uint64_t bound);

private:
    std::uint64_t state_[4];
};

inline constexpr const char* kRngAlgorithm = "xoshiro256**";

/// Stream `index` seeds from splitmix64 words 4*index .. 4*index+3 of the
/// base sequence, so streams never share seed material.
Xoshiro256StarStar make_stream(std::uint64_t seed, std::uint64_t index);

/// Trials are tallied in fixed-size chunks, one RNG stream per chunk; the
/// chunk->stream map depends only on the seed, never on the thread count,
/// so merged tallies are identical under any parallelism.
inline constexpr std::uint64_t kTrialsPerChunk = 1u << 16;

/// An infinite-case trial stopping beyond this many revealed positions
/// aborts the run. The stopping position R is heavy-tailed, with
/// P(R > C) = (H_{C-1}+1)/C exactly, so the cap must sit far above any
/// single trial's typical range for a breach to mean "bug" rather than
/// "unlucky tail"; see README.
inline constexpr std::uint64_t kDefaultHardCap = 10'000'000'000ULL;

struct RngSpec {
    std::uint64_t seed = 1;
    std::string algorithm = kRngAlgorithm;
};

struct MCEstimate {
    std::string event;  ///< "a,b,c" or "never"
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double point = 0.0;
    double stderr_value = 0.0;
};

MCEstimate make_estimate(std::string event, std::uint64_t hits, std::uint64_t trials);

struct SampleResult {
    SizeSpec size = SizeSpec::infinite();
    RngSpec rng;
    std::uint64_t trials = 0;
    std::map<Triple, std::uint64_t> hits;  ///< observed events only, lex order
    std::uint64_t never_hits = 0;
    std::uint64_t max_stop_position = 0;  ///< infinite case: largest r seen
    double wall_seconds = 0.0;

    std::uint64_t hits_of(const Triple& t) const;
    MCEstimate estimate(const Triple& t) const;
    MCEstimate never_estimate() const;
    /// Observed events in lex order, never last.
    std::vector<MCEstimate> estimates() const;
};

struct HardCapExceeded : std::runtime_error {
    HardCapExceeded(std::uint64_t hard_cap_, std::uint64_t position_);
    std::uint64_t hard_cap;
    std::uint64_t position;
};

/// Uniform permutations of [n] via unbiased Fisher-Yates; tallies the first
/// 123 occurrence per trial.
SampleResult sample_finite(int n, const RngSpec& rng, std::uint64_t trials, int threads = 1);

/// Reveals i.i.d. Uniform(0,1) surrogate values one position at a time and
/// stops at the first certifiable occurrence {1, s0, r0}: s0 = first position
/// whose value exceeds f(1), r0 = first later position whose value exceeds
/// f(s0). Ties (probability 0) resolve toward the earlier position. A trial
/// passing hard_cap positions throws HardCapExceeded — a failure, never a
/// censoring.
SampleResult sample_infinite(const RngSpec& rng, std::uint64_t trials,
                             std::uint64_t hard_cap = kDefaultHardCap, int threads = 1);

struct ZScoreRow {
    std::string event;
    Rational exact = 0;
    std::uint64_t hits = 0;
    double point = 0.0;
    double stderr_value = 0.0;
    double z = 0.0;
    bool flagged = false;   ///< |z| > 4
    bool excluded = false;  ///< stderr = 0: hits in {0, trials}
    std::string note;
};

struct CompareReport {
    std::vector<ZScoreRow> rows;
    double max_abs_z = 0.0;  ///< over included rows
    int flagged_count = 0;
};

/// Per-event z = (point - exact)/stderr against an exact table with the same
/// size spec; infinite tables additionally compare the aggregated mass beyond
/// the truncation box against the analytic tail. Rows with stderr 0 are
/// excluded with a note.
CompareReport compare_report(const DistributionTable& table, const SampleResult& sample);

/// Unbiased shuffle (used by sample_finite; exposed for the uniformity test).
void fisher_yates(Xoshiro256StarStar& rng, std::span<int> values);

namespace detail {

/// One infinite-case trial over any value source; returns (s0, r0). This is
/// the production detector — tests drive it from recorded streams and check
/// it against the naive full-scan reference.
template <typename NextUnit>
std::pair<std::uint64_t, std::uint64_t> infinite_trial(NextUnit&& next_unit,
                                                       std::uint64_t hard_cap) {
    const double first = next_unit();
    double pivot = first;
    std::uint64_t s0 = 0;
    for (std::uint64_t position = 2;; ++position) {
        if (position > hard_cap) throw HardCapExceeded(hard_cap, position);
        const double value = next_unit();
        if (value > pivot) {
            if (s0 == 0) {
                s0 = position;
                pivot = value;
            } else {
                return {s0, position};
            }
        }
    }
}

} // namespace detail

} // namespace firstpat
