#include "firstpat/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace firstpat {

namespace {

using Json = nlohmann::ordered_json;

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

std::string csv_field(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (const char ch : field) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

std::string delimited(const std::vector<std::vector<std::string>>& rows, char sep) {
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += sep;
            out += sep == ',' ? csv_field(row[i]) : row[i];
        }
        out += '\n';
    }
    return out;
}

std::string aligned(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += "  ";
            out += row[i];
            if (i + 1 < row.size()) out += std::string(widths[i] - row[i].size(), ' ');
        }
        out += '\n';
    }
    return out;
}

std::string tabular(const std::vector<std::vector<std::string>>& rows, OutputFormat format) {
    switch (format) {
        case OutputFormat::csv: return delimited(rows, ',');
        case OutputFormat::tsv: return delimited(rows, '\t');
        case OutputFormat::pretty: return aligned(rows);
        case OutputFormat::json: break;
    }
    throw std::logic_error("tabular: json handled separately");
}

std::string fraction_string(const Rational& value) {
    return numerator(value).str() + "/" + denominator(value).str();
}

} // namespace

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    if (name == "tsv") return OutputFormat::tsv;
    if (name == "pretty") return OutputFormat::pretty;
    throw std::invalid_argument("unknown format '" + name + "' (csv, json, tsv, pretty)");
}

std::string render_probability_rows(std::span<const ProbabilityRow> rows, OutputFormat format,
                                    int places, bool cumulative) {
    if (format == OutputFormat::json) {
        Json doc;
        doc["rows"] = Json::array();
        for (const auto& row : rows) {
            Json item;
            item["triple"] = row.label;
            item["probability_num"] = numerator(row.probability).str();
            item["probability_den"] = denominator(row.probability).str();
            item["decimal"] = decimal_string(row.probability, places);
            if (row.provenance) item["provenance"] = to_string(*row.provenance);
            doc["rows"].push_back(std::move(item));
        }
        return doc.dump(2) + "\n";
    }
    std::vector<std::vector<std::string>> table;
    if (format == OutputFormat::pretty) {
        std::vector<std::string> header{"triple", "probability", "decimal"};
        if (cumulative) header.push_back("cumulative");
        header.push_back("provenance");
        table.push_back(std::move(header));
        Rational running = 0;
        for (const auto& row : rows) {
            running += row.probability;
            std::vector<std::string> cells{row.label, fraction_string(row.probability),
                                           decimal_string(row.probability, places)};
            if (cumulative) cells.push_back(decimal_string(running, places));
            cells.push_back(row.provenance ? to_string(*row.provenance) : "");
            table.push_back(std::move(cells));
        }
    } else {
        table.push_back({"triple", "probability_num", "probability_den", "decimal", "provenance"});
        for (const auto& row : rows)
            table.push_back({row.label, numerator(row.probability).str(),
                             denominator(row.probability).str(),
                             decimal_string(row.probability, places),
                             row.provenance ? to_string(*row.provenance) : ""});
    }
    return tabular(table, format);
}

namespace {

// Compact "abc" labels whenever every position is a single digit; json
// always carries the canonical "a,b,c" form.
std::string census_label(const Triple& t, int n) {
    return n <= 9 ? compact_string(t) : to_string(t);
}

std::vector<ProbabilityRow> table_rows(const DistributionTable& table, bool compact) {
    std::vector<ProbabilityRow> rows;
    rows.reserve(table.entries.size() + 2);
    const bool use_compact = compact && table.size.is_finite() && table.size.n() <= 9;
    for (const auto& entry : table.entries)
        rows.push_back({use_compact ? compact_string(entry.triple) : to_string(entry.triple),
                        entry.probability, entry.provenance});
    if (table.size.is_infinite())
        rows.push_back({"tail", table.tail_mass, Provenance::formula});
    rows.push_back({"never", table.never_mass, Provenance::formula});
    return rows;
}

} // namespace

std::string render_table(const DistributionTable& table, OutputFormat format, int places) {
    if (format == OutputFormat::json) {
        const std::vector<ProbabilityRow> rows = table_rows(table, /*compact=*/false);
        Json doc;
        doc["size"] = table.size.is_finite() ? Json(table.size.n()) : Json("infinite");
        if (table.truncation) doc["truncation"] = to_string(*table.truncation);
        const Json body = Json::parse(render_probability_rows(rows, OutputFormat::json, places));
        doc["rows"] = body.at("rows");
        return doc.dump(2) + "\n";
    }
    const std::vector<ProbabilityRow> rows = table_rows(table, /*compact=*/true);
    return render_probability_rows(rows, format, places, /*cumulative=*/true);
}

std::string render_census(const CensusResult& result, OutputFormat format) {
    const std::string total = result.total.str();
    if (format == OutputFormat::json) {
        Json doc;
        doc["n"] = result.n;
        doc["total"] = total;
        doc["rows"] = Json::array();
        for (std::uint64_t rank = 0; rank < result.counts.size(); ++rank) {
            Json item;
            item["triple"] = to_string(lex_unrank(rank, result.n));
            item["count"] = result.counts[rank];
            doc["rows"].push_back(std::move(item));
        }
        doc["never"] = result.never_count;
        return doc.dump(2) + "\n";
    }
    std::vector<std::vector<std::string>> table;
    table.push_back({"triple", "count", "total"});
    for (std::uint64_t rank = 0; rank < result.counts.size(); ++rank) {
        const Triple t = lex_unrank(rank, result.n);
        table.push_back({census_label(t, result.n), std::to_string(result.counts[rank]), total});
    }
    table.push_back({"never", std::to_string(result.never_count), total});
    return tabular(table, format);
}

std::string render_conditional(const ConditionalCensus& result, OutputFormat format) {
    if (format == OutputFormat::json) {
        Json doc;
        doc["n"] = result.n;
        doc["k"] = result.k;
        doc["total_matching"] = result.total_matching;
        doc["rows"] = Json::array();
        for (const auto& [triple, count] : result.counts) {
            Json item;
            item["triple"] = to_string(triple);
            item["count"] = count;
            doc["rows"].push_back(std::move(item));
        }
        return doc.dump(2) + "\n";
    }
    std::vector<std::vector<std::string>> table;
    table.push_back({"triple", "count", "total"});
    for (const auto& [triple, count] : result.counts)
        table.push_back({census_label(triple, result.n), std::to_string(count),
                         std::to_string(result.total_matching)});
    return tabular(table, format);
}

std::string render_segments(int n, std::span<const SegmentReport> report, OutputFormat format) {
    const auto counts_string = [](const SegmentReport& segment) {
        std::string joined;
        for (std::size_t i = 0; i < segment.counts.size(); ++i) {
            if (i > 0) joined += ' ';
            joined += std::to_string(segment.counts[i]);
        }
        return joined;
    };
    if (format == OutputFormat::json) {
        Json doc;
        doc["n"] = n;
        doc["segments"] = Json::array();
        for (const auto& segment : report) {
            Json item;
            item["segment"] = std::to_string(segment.a) + "," + std::to_string(segment.b);
            item["strictly_decreasing"] = segment.strictly_decreasing;
            item["boundary_jump"] = segment.boundary_jump_ok;
            item["counts"] = segment.counts;
            doc["segments"].push_back(std::move(item));
        }
        return doc.dump(2) + "\n";
    }
    std::vector<std::vector<std::string>> table;
    table.push_back({"segment", "strictly_decreasing", "boundary_jump", "counts"});
    for (const auto& segment : report)
        table.push_back({std::to_string(segment.a) + "," + std::to_string(segment.b),
                         segment.strictly_decreasing ? "true" : "false",
                         segment.boundary_jump_ok ? "true" : "false", counts_string(segment)});
    return tabular(table, format);
}

std::string render_estimates(const SampleResult& sample, OutputFormat format) {
    const std::vector<MCEstimate> rows = sample.estimates();
    if (format == OutputFormat::json) {
        Json doc;
        doc["rows"] = Json::array();
        for (const auto& row : rows) {
            Json item;
            item["event"] = row.event;
            item["hits"] = row.hits;
            item["trials"] = row.trials;
            item["point"] = row.point;
            item["stderr"] = row.stderr_value;
            doc["rows"].push_back(std::move(item));
        }
        return doc.dump(2) + "\n";
    }
    std::vector<std::vector<std::string>> table;
    table.push_back({"event", "hits", "trials", "point", "stderr"});
    for (const auto& row : rows)
        table.push_back({row.event, std::to_string(row.hits), std::to_string(row.trials),
                         format_double(row.point), format_double(row.stderr_value)});
    return tabular(table, format);
}

std::string render_compare(const CompareReport& report, OutputFormat format) {
    if (format == OutputFormat::json) {
        Json doc;
        doc["rows"] = Json::array();
        for (const auto& row : report.rows) {
            Json item;
            item["event"] = row.event;
            item["exact_num"] = numerator(row.exact).str();
            item["exact_den"] = denominator(row.exact).str();
            item["hits"] = row.hits;
            item["point"] = row.point;
            item["stderr"] = row.stderr_value;
            if (row.excluded) {
                item["excluded"] = true;
                item["note"] = row.note;
            } else {
                item["z"] = row.z;
                item["flagged"] = row.flagged;
            }
            doc["rows"].push_back(std::move(item));
        }
        doc["max_abs_z"] = report.max_abs_z;
        doc["flagged_count"] = report.flagged_count;
        return doc.dump(2) + "\n";
    }
    std::vector<std::vector<std::string>> table;
    table.push_back({"event", "exact_num", "exact_den", "hits", "point", "stderr", "z", "flagged",
                     "note"});
    for (const auto& row : report.rows)
        table.push_back({row.event, numerator(row.exact).str(), denominator(row.exact).str(),
                         std::to_string(row.hits), format_double(row.point),
                         format_double(row.stderr_value),
                         row.excluded ? "" : format_double(row.z),
                         row.excluded ? "" : (row.flagged ? "true" : "false"), row.note});
    if (format == OutputFormat::pretty)
        table.push_back({"max|z|", format_double(report.max_abs_z), "", "", "", "", "", "", ""});
    return tabular(table, format);
}

std::string render_verify(std::span<const VerifyRow> rows, OutputFormat format) {
    if (format == OutputFormat::json) {
        Json doc;
        doc["rows"] = Json::array();
        for (const auto& row : rows) {
            Json item;
            item["check"] = row.check;
            item["scope"] = row.scope;
            item["status"] = row.pass ? "pass" : (row.hard ? "fail" : "flag");
            item["detail"] = row.detail;
            doc["rows"].push_back(std::move(item));
        }
        return doc.dump(2) + "\n";
    }
    std::vector<std::vector<std::string>> table;
    table.push_back({"check", "scope", "status", "detail"});
    for (const auto& row : rows)
        table.push_back(
            {row.check, row.scope, row.pass ? "pass" : (row.hard ? "fail" : "flag"), row.detail});
    return tabular(table, format);
}

} // namespace firstpat
