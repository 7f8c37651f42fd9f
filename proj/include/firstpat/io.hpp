#pragma once

#include "firstpat/exact.hpp"
#include "firstpat/montecarlo.hpp"
#include "firstpat/oracle.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace firstpat {

/// csv and json are the stable machine contract; pretty is human rendering.
enum class OutputFormat { csv, json, tsv, pretty };

OutputFormat parse_format(const std::string& name);

/// One labelled exact probability ("1,3,4", "never", "tail", "ge-234", ...).
struct ProbabilityRow {
    std::string label;
    Rational probability = 0;
    std::optional<Provenance> provenance;
};

/// Schema: triple,probability_num,probability_den,decimal,provenance.
std::string render_probability_rows(std::span<const ProbabilityRow> rows, OutputFormat format,
                                    int places = 4, bool cumulative = false);

/// Full table: entries, then (infinite) the analytic tail, then never.
std::string render_table(const DistributionTable& table, OutputFormat format, int places = 4);

/// Schema: triple,count,total plus the final never row.
std::string render_census(const CensusResult& result, OutputFormat format);

/// Schema: triple,count,total with total = total_matching.
std::string render_conditional(const ConditionalCensus& result, OutputFormat format);

/// Schema: segment,strictly_decreasing,boundary_jump,counts.
std::string render_segments(int n, std::span<const SegmentReport> report, OutputFormat format);

/// Schema: event,hits,trials,point,stderr.
std::string render_estimates(const SampleResult& sample, OutputFormat format);

/// Schema: event,exact_num,exact_den,hits,point,stderr,z,flagged,note.
std::string render_compare(const CompareReport& report, OutputFormat format);

struct VerifyRow {
    std::string check;
    std::string scope;  ///< "n=6", "global", ...
    bool pass = false;
    bool hard = true;  ///< exact-equality checks; statistical rows are soft
    std::string detail;
};

/// Schema: check,scope,status,detail.
std::string render_verify(std::span<const VerifyRow> rows, OutputFormat format);

} // namespace firstpat
