#pragma once

// Report rows and bit-stable emission. CSV numbers are written through
// std::to_chars at 17 significant digits with a '.' decimal separator, so the
// same rows always serialize to the same bytes regardless of locale.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sublaw/errors.hpp"

namespace sublaw {

struct ReportRow {
    std::string experiment;
    long long n = 0;
    std::string statistic;
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double bound = 0.0;
    bool pass = false;
    std::uint64_t seed = 0;
    std::string selector_id;
};

enum class ReportFormat { csv, json };

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string csv_quote(const std::string& field) {
    bool needs_quotes = false;
    for (char c : field)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') needs_quotes = true;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace detail

inline constexpr const char* kCsvHeader =
    "experiment,n,statistic,value,ci_low,ci_high,bound,pass,seed,selector_id";

inline void emit_csv(std::span<const ReportRow> rows, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const ReportRow& r : rows) {
        out << detail::csv_quote(r.experiment) << ',' << r.n << ','
            << detail::csv_quote(r.statistic) << ',' << detail::format_double(r.value) << ','
            << detail::format_double(r.ci_low) << ',' << detail::format_double(r.ci_high) << ','
            << detail::format_double(r.bound) << ',' << (r.pass ? "true" : "false") << ','
            << r.seed << ',' << detail::csv_quote(r.selector_id) << '\n';
    }
}

inline void emit_json(std::span<const ReportRow> rows, std::ostream& out) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const ReportRow& r : rows) {
        nlohmann::ordered_json row;
        row["experiment"] = r.experiment;
        row["n"] = r.n;
        row["statistic"] = r.statistic;
        row["value"] = r.value;
        row["ci_low"] = r.ci_low;
        row["ci_high"] = r.ci_high;
        row["bound"] = r.bound;
        row["pass"] = r.pass;
        row["seed"] = r.seed;
        row["selector_id"] = r.selector_id;
        doc.push_back(std::move(row));
    }
    out << doc.dump(2) << '\n';
}

inline void emit(std::span<const ReportRow> rows, ReportFormat format, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("emit: no rows");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot open " + path);
    if (format == ReportFormat::csv) emit_csv(rows, out);
    else emit_json(rows, out);
    if (!out) throw std::runtime_error("emit: write failed for " + path);
}

/// Parses rows back from our own CSV output (round-trip checks).
inline std::vector<ReportRow> parse_csv(std::istream& in) {
    std::vector<ReportRow> rows;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty csv");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string current;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    current += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(current);
                current.clear();
            } else {
                current += c;
            }
        }
        fields.push_back(current);
        if (fields.size() != 10)
            throw ParseError("csv row with " + std::to_string(fields.size()) + " fields");
        ReportRow r;
        r.experiment = fields[0];
        r.n = std::stoll(fields[1]);
        r.statistic = fields[2];
        r.value = std::stod(fields[3]);
        r.ci_low = std::stod(fields[4]);
        r.ci_high = std::stod(fields[5]);
        r.bound = std::stod(fields[6]);
        r.pass = fields[7] == "true";
        r.seed = std::stoull(fields[8]);
        r.selector_id = fields[9];
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace sublaw
