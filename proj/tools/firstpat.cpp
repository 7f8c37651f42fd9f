// firstpat — exact, enumerated, and simulated first-occurrence distributions
// of the 123 pattern in uniform random permutations (and the infinite case).

#include "firstpat/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace firstpat;
using Json = nlohmann::ordered_json;

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kCapRefusal = 3,
    kVerifyFailed = 4,
    kHardCapBreach = 5,
};

struct GlobalOptions {
    std::string format = "pretty";
    std::string output;
    bool no_metadata = false;
    int threads = 1;
    bool force = false;
};

void emit(const GlobalOptions& global, const std::string& text) {
    if (global.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(global.output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file '" + global.output + "'");
    file << text;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("FIRSTPAT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw CLI::ValidationError("FIRSTPAT_SEED", "not an unsigned integer");
        }
    }
    return 1;
}

// --- exact ------------------------------------------------------------

struct ExactOptions {
    std::optional<int> n;
    bool infinite = false;
    bool full = false;
    bool a1 = false;
    std::string triple;
    bool ge_234 = false;
    bool avoid = false;
    std::optional<int> prefix_k;
    bool want_median = false;
    int max_s = kDefaultTruncationS;
    int max_r = kDefaultTruncationR;
    int places = 4;
};

int run_exact(const GlobalOptions& global, const ExactOptions& options) {
    const int selectors = int(options.full) + int(options.a1) + int(!options.triple.empty()) +
                          int(options.ge_234) + int(options.avoid) +
                          int(options.prefix_k.has_value()) + int(options.want_median);
    if (selectors != 1)
        throw CLI::ValidationError("exact", "choose exactly one of --full, --a1, --triple, "
                                            "--ge-234, --avoid, --prefix-k, --median");
    const OutputFormat format = parse_format(global.format);
    const SizeSpec size = options.infinite ? SizeSpec::infinite() : SizeSpec::finite(*options.n);

    if (options.want_median) {
        const FirstOccurrence m = median(size);
        if (format == OutputFormat::json) {
            Json doc;
            doc["median"] = to_string(m);
            emit(global, doc.dump(2) + "\n");
        } else {
            emit(global, to_string(m) + "\n");
        }
        return kOk;
    }

    if (options.a1 && size.is_finite()) {
        // a = 1 listing straight from the closed forms; works for any n.
        std::vector<ProbabilityRow> rows;
        const int n = size.n();
        for (int s = 2; s < n; ++s)
            for (int r = s + 1; r <= n; ++r)
                rows.push_back(
                    {to_string(Triple(1, s, r)), p_1sr_finite(n, s, r), Provenance::formula});
        emit(global, render_probability_rows(rows, format, options.places));
        return kOk;
    }
    if (options.full || options.a1) {
        // Infinite --full and --a1 coincide: all mass sits on a = 1.
        const DistributionTable table =
            size.is_finite()
                ? distribution_table(size, std::nullopt, global.threads)
                : distribution_table(size, Triple(1, options.max_s, options.max_r),
                                     global.threads);
        emit(global, render_table(table, format, options.places));
        return kOk;
    }

    ProbabilityRow row;
    if (!options.triple.empty()) {
        const Triple t = parse_triple(options.triple);
        row.label = to_string(t);
        if (size.is_finite()) {
            if (t.c > size.n()) throw CLI::ValidationError("--triple", "triple out of range for n");
            if (t.a == 1) {
                row.probability = p_1sr_finite(size.n(), static_cast<int>(t.b),
                                               static_cast<int>(t.c));
                row.provenance = Provenance::formula;
            } else {
                row.probability = census(size.n(), global.threads, global.force).fraction_of(t);
                row.provenance = Provenance::oracle;
            }
        } else {
            // Infinite case: all mass sits on a = 1 triples.
            row.probability = t.a == 1
                                  ? p_1sr_infinite(static_cast<int>(t.b), static_cast<int>(t.c))
                                  : Rational(0);
            row.provenance = Provenance::formula;
        }
    } else if (options.ge_234) {
        row.label = "ge-234";
        row.probability = size.is_finite() ? p_x_ge_234_exact(size.n()) : Rational(0);
        row.provenance = Provenance::formula;
    } else if (options.avoid) {
        row.label = "never";
        row.probability = size.is_finite() ? avoid_probability(size.n()) : Rational(0);
        row.provenance = Provenance::formula;
    } else {
        const int k = *options.prefix_k;
        if (size.is_finite() && k > size.n())
            throw CLI::ValidationError("--prefix-k", "k must be <= n");
        row.label = "k=" + std::to_string(k);
        row.probability = prefix_first_k_probability(k);
        row.provenance = Provenance::formula;
    }
    const std::vector<ProbabilityRow> rows{row};
    emit(global, render_probability_rows(rows, format, options.places));
    return kOk;
}

// --- enumerate ---------------------------------------------------------

struct EnumerateOptions {
    int n = 0;
    std::optional<int> given_prefix_k;
    bool segments = false;
};

int run_enumerate(const GlobalOptions& global, const EnumerateOptions& options) {
    const OutputFormat format = parse_format(global.format);
    if (global.force && options.n > kCensusCap)
        std::cerr << "forcing census for n = " << options.n << ": roughly "
                  << estimated_census_seconds(options.n) << " s of enumeration\n";
    if (options.given_prefix_k) {
        const ConditionalCensus result =
            conditional_first_triple(options.n, *options.given_prefix_k, global.threads,
                                     global.force);
        emit(global, render_conditional(result, format));
        return kOk;
    }
    const CensusResult result = census(options.n, global.threads, global.force);
    if (options.segments) {
        emit(global, render_segments(options.n, segment_shape_report(result), format));
        return kOk;
    }
    emit(global, render_census(result, format));
    return kOk;
}

// --- simulate ----------------------------------------------------------

struct SimulateOptions {
    std::optional<int> n;
    bool infinite = false;
    std::uint64_t trials = 0;
    std::optional<std::uint64_t> seed;
    std::uint64_t hard_cap = kDefaultHardCap;
};

int run_simulate(const GlobalOptions& global, const SimulateOptions& options) {
    const OutputFormat format = parse_format(global.format);
    RngSpec rng;
    rng.seed = options.seed ? *options.seed : default_seed();
    const SampleResult sample =
        options.infinite
            ? sample_infinite(rng, options.trials, options.hard_cap, global.threads)
            : sample_finite(*options.n, rng, options.trials, global.threads);

    Json metadata;
    metadata["seed"] = sample.rng.seed;
    metadata["algorithm"] = sample.rng.algorithm;
    metadata["trials"] = sample.trials;
    metadata["wall_seconds"] = sample.wall_seconds;
    if (options.infinite) metadata["max_stop_position"] = sample.max_stop_position;

    if (format == OutputFormat::json) {
        Json doc;
        if (!global.no_metadata) doc["metadata"] = metadata;
        doc["rows"] = Json::parse(render_estimates(sample, OutputFormat::json)).at("rows");
        emit(global, doc.dump(2) + "\n");
        return kOk;
    }
    if (!global.no_metadata) std::cerr << metadata.dump() << "\n";
    emit(global, render_estimates(sample, format));
    return kOk;
}

// --- verify ------------------------------------------------------------

struct VerifyOptions {
    std::string range;
    bool with_mc = false;
    std::uint64_t mc_trials = 100'000;
    std::optional<std::uint64_t> seed;
};

std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const int n = std::stoi(text);
            return {n, n};
        }
        const int lo = std::stoi(text.substr(0, dots));
        const int hi = std::stoi(text.substr(dots + 2));
        if (lo > hi) throw std::invalid_argument("empty range");
        return {lo, hi};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--n", "expected N or A..B with A <= B");
    }
}

// The full n = 6 law as counts over 720, frozen as a fixture.
constexpr std::uint64_t kN6Counts[20] = {120, 60, 36, 24, 50, 28, 18, 26, 16, 16,
                                         48,  22, 12, 24, 12, 14, 24, 10, 14, 14};
constexpr std::uint64_t kN6Never = 132;

int run_verify(const GlobalOptions& global, const VerifyOptions& options) {
    const OutputFormat format = parse_format(global.format);
    const auto [lo, hi] = parse_range(options.range);
    if (lo < 3) throw CLI::ValidationError("--n", "range must start at 3 or above");

    std::vector<VerifyRow> rows;
    const auto add = [&rows](std::string check, std::string scope, bool pass, std::string detail,
                             bool hard = true) {
        rows.push_back({std::move(check), std::move(scope), pass, hard, std::move(detail)});
    };

    // Global identities (independent of the range).
    {
        const DistributionTable small =
            distribution_table(SizeSpec::infinite(), Triple(1, 5, 10));
        add("infinite-mass-box", "s<=5,r<=10", small.total_mass() == 1,
            "entries + tail = " + decimal_string(small.total_mass(), 6));
        const DistributionTable wide = distribution_table(SizeSpec::infinite(), kDefaultTruncation);
        add("infinite-mass-box", "s<=50,r<=200", wide.total_mass() == 1,
            "entries + tail = " + decimal_string(wide.total_mass(), 6));
        const FirstOccurrence inf_median = median(SizeSpec::infinite());
        add("infinite-median", "global", inf_median == FirstOccurrence(Triple(1, 3, 4)),
            "median = " + to_string(inf_median));
        Rational prefix_sum = 0;
        for (int k = 3; k <= 40; ++k) prefix_sum += prefix_first_k_probability(k);
        const Rational expected = Rational(1) - avoid_probability(40);
        add("prefix-law-telescope", "k<=40", prefix_sum == expected, "partial sum matches 1 - avoidance(40)");
    }

    for (int n = lo; n <= hi; ++n) {
        const std::string scope = "n=" + std::to_string(n);

        {
            Rational sum = 0;
            for (int r = 3; r <= n; ++r) sum += p_12r(r);
            add("sum-12r", scope, sum == Rational(1, 2) - Rational(1, n), "sum = 1/2 - 1/n");
        }
        if (n >= 4) {
            Rational sum = 0;
            for (int r = 4; r <= n; ++r) sum += p_1sr_finite(n, 3, r);
            add("sum-13r", scope, sum == Rational(1, 6) - Rational(1, Integer(n) * (n - 1)),
                "sum = 1/6 - 1/(n(n-1))");
        }
        {
            bool ok = true;
            for (int r = 3; r <= n; ++r) ok = ok && p_1sr_finite(n, 2, r) == p_12r(r);
            add("reduction-s2", scope, ok, "p_1sr_finite(n,2,r) = p_12r(r)");
        }
        if (n >= 4) {
            bool ok = true;
            for (int r = 4; r <= n; ++r) ok = ok && p_13r_finite(n, r) == p_1sr_finite(n, 3, r);
            add("identity-13r", scope, ok, "two-term form = general closed-form sum");
        }

        const CensusResult result = census(n, global.threads, global.force);
        {
            bool ok = true;
            for (int s = 2; s < n; ++s)
                for (int r = s + 1; r <= n; ++r)
                    ok = ok && result.fraction_of(Triple(1, s, r)) == p_1sr_finite(n, s, r);
            add("closed-form-vs-census", scope, ok, "all a=1 census fractions match the closed form");
        }
        add("avoidance", scope, result.never_fraction() == avoid_probability(n),
            std::to_string(result.never_count) + "/" + result.total.str());
        {
            const PrefixCensus prefixes = prefix_census(n, global.threads, global.force);
            bool ok = prefixes.never_count == result.never_count;
            for (int k = 3; k <= n; ++k)
                ok = ok && Rational(prefixes.counts[static_cast<std::size_t>(k)], result.total) ==
                               prefix_first_k_probability(k);
            add("prefix-law", scope, ok, "per-k prefix counts match the closed form");
        }
        {
            Rational a1_mass = 0;
            for (int s = 2; s < n; ++s)
                for (int r = s + 1; r <= n; ++r) a1_mass += result.fraction_of(Triple(1, s, r));
            add("ge234-complement", scope, Rational(1) - a1_mass == p_x_ge_234_exact(n),
                "1 - sum(a=1) = (1/n) sum 1/m!");
        }
        if (n == 6) {
            bool ok = result.never_count == kN6Never;
            for (std::uint64_t rank = 0; rank < 20; ++rank)
                ok = ok && result.counts[rank] == kN6Counts[rank];
            add("table1-fixture", scope, ok, "counts over 720 match the frozen fixture");
            add("median-n6", scope, median(SizeSpec::finite(6)) == FirstOccurrence(Triple(1, 4, 5)),
                "median = " + to_string(median(SizeSpec::finite(6))));
        }

        if (options.with_mc) {
            RngSpec rng;
            rng.seed = options.seed ? *options.seed : default_seed();
            const SampleResult sample =
                sample_finite(n, rng, options.mc_trials, global.threads);
            const DistributionTable table =
                distribution_table(SizeSpec::finite(n), std::nullopt, global.threads);
            const CompareReport report = compare_report(table, sample);
            char detail[96];
            std::snprintf(detail, sizeof detail, "max|z| = %.2f over %zu events",
                          report.max_abs_z, report.rows.size());
            add("mc-finite-z", scope, report.flagged_count == 0, detail, /*hard=*/false);
        }
    }

    if (options.with_mc) {
        RngSpec rng;
        rng.seed = options.seed ? *options.seed : default_seed();
        const SampleResult sample =
            sample_infinite(rng, options.mc_trials, kDefaultHardCap, global.threads);
        const DistributionTable table = distribution_table(SizeSpec::infinite(), Triple(1, 5, 10));
        const CompareReport report = compare_report(table, sample);
        const bool zero_never = sample.never_hits == 0;
        char detail[96];
        std::snprintf(detail, sizeof detail,
                      "max|z| = %.2f over the s<=5,r<=10 box + tail; never hits = %llu",
                      report.max_abs_z, static_cast<unsigned long long>(sample.never_hits));
        add("mc-infinite-z", "global", report.flagged_count == 0 && zero_never, detail,
            /*hard=*/false);
    }

    emit(global, render_verify(rows, format));
    const bool failed = std::any_of(rows.begin(), rows.end(),
                                    [](const VerifyRow& row) { return row.hard && !row.pass; });
    return failed ? kVerifyFailed : kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"first-occurrence distribution of the 123 pattern in random permutations"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--format", global.format, "output format: csv, json, tsv, pretty")
        ->check(CLI::IsMember({"csv", "json", "tsv", "pretty"}));
    app.add_option("--output", global.output, "write output to a file instead of stdout");
    app.add_flag("--no-metadata", global.no_metadata, "suppress run metadata");
    app.add_option("--threads", global.threads, "worker threads (results are thread-count independent)")
        ->check(CLI::PositiveNumber);
    app.add_flag("--force", global.force, "run enumerations above the size cap");

    ExactOptions exact_options;
    CLI::App* cmd_exact = app.add_subcommand("exact", "closed-form and table probabilities");
    auto* exact_n = cmd_exact->add_option("--n", exact_options.n, "permutation size (>= 3)");
    auto* exact_inf = cmd_exact->add_flag("--infinite", exact_options.infinite, "the bijection-on-Z+ case");
    exact_n->excludes(exact_inf);
    cmd_exact->add_flag("--full", exact_options.full, "full distribution table");
    cmd_exact->add_flag("--a1", exact_options.a1, "all first-position-1 entries");
    cmd_exact->add_option("--triple", exact_options.triple, "one triple, \"a,b,c\" or \"abc\"");
    cmd_exact->add_flag("--ge-234", exact_options.ge_234, "mass at or beyond {2,3,4}, never included");
    cmd_exact->add_flag("--avoid", exact_options.avoid, "avoidance (never) probability");
    cmd_exact->add_option("--prefix-k", exact_options.prefix_k, "first pattern-containing prefix length law");
    cmd_exact->add_flag("--median", exact_options.want_median, "lex-least median of the law");
    cmd_exact->add_option("--max-s", exact_options.max_s, "infinite-table truncation: s bound")
        ->check(CLI::Range(2, 1 << 20));
    cmd_exact->add_option("--max-r", exact_options.max_r, "infinite-table truncation: r bound")
        ->check(CLI::Range(3, 1 << 20));
    cmd_exact->add_option("--places", exact_options.places, "decimal display places")
        ->check(CLI::Range(0, 50));

    EnumerateOptions enumerate_options;
    CLI::App* cmd_enumerate = app.add_subcommand("enumerate", "exhaustive census over all n! permutations");
    cmd_enumerate->add_option("--n", enumerate_options.n, "permutation size (>= 3)")->required();
    cmd_enumerate->add_option("--given-prefix-k", enumerate_options.given_prefix_k,
                              "conditional census given first prefix length k");
    cmd_enumerate->add_flag("--segments", enumerate_options.segments,
                            "per-(a,b) segment shape report");

    SimulateOptions simulate_options;
    CLI::App* cmd_simulate = app.add_subcommand("simulate", "seeded Monte Carlo estimates");
    auto* sim_n = cmd_simulate->add_option("--n", simulate_options.n, "permutation size (>= 3)");
    auto* sim_inf = cmd_simulate->add_flag("--infinite", simulate_options.infinite,
                                           "the bijection-on-Z+ case");
    sim_n->excludes(sim_inf);
    cmd_simulate->add_option("--trials", simulate_options.trials, "number of trials")->required();
    cmd_simulate->add_option("--seed", simulate_options.seed,
                             "RNG seed (default: FIRSTPAT_SEED or 1)");
    cmd_simulate->add_option("--hard-cap", simulate_options.hard_cap,
                             "infinite case: abort if a trial passes this many positions");

    VerifyOptions verify_options;
    CLI::App* cmd_verify = app.add_subcommand("verify", "cross-validate formulas, oracle, and simulation");
    cmd_verify->add_option("--n", verify_options.range, "size or range, e.g. 6 or 3..8")->required();
    cmd_verify->add_flag("--with-mc", verify_options.with_mc, "add Monte Carlo z-score rows");
    cmd_verify->add_option("--mc-trials", verify_options.mc_trials, "trials per z-score row");
    cmd_verify->add_option("--seed", verify_options.seed, "RNG seed for --with-mc");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (cmd_exact->parsed()) {
            if (!exact_options.n && !exact_options.infinite)
                throw CLI::ValidationError("exact", "one of --n or --infinite is required");
            return run_exact(global, exact_options);
        }
        if (cmd_enumerate->parsed()) {
            if (enumerate_options.given_prefix_k && enumerate_options.segments)
                throw CLI::ValidationError("enumerate",
                                           "--given-prefix-k and --segments are exclusive");
            return run_enumerate(global, enumerate_options);
        }
        if (cmd_simulate->parsed()) {
            if (!simulate_options.n && !simulate_options.infinite)
                throw CLI::ValidationError("simulate", "one of --n or --infinite is required");
            return run_simulate(global, simulate_options);
        }
        return run_verify(global, verify_options);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CensusCapError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kCapRefusal;
    } catch (const HardCapExceeded& e) {
        std::cerr << "aborted: " << e.what() << "\n";
        return kHardCapBreach;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
