#ifndef POLYA_OUTPUT_HPP
#define POLYA_OUTPUT_HPP

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace polya::output {

// One row of a results table.
struct output_record
{
    int d = 0;
    std::string method;
    double value = 0;
    double error_estimate = 0;
    double elapsed_ms = 0;
    std::optional<double> max_rel_diff; // present in cross-method tables
};

enum class format
{
    csv,
    json
};

// 17 significant digits: enough to read back the same double. Non-finite
// values become null in JSON and nan/inf in CSV.
inline std::string number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string json_number(double v) { return std::isfinite(v) ? number(v) : "null"; }

inline std::string json_string(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out + "\"";
}

// A flat list of named fields, written as a CSV row or a JSON object with the
// keys in the given order.
using field = std::pair<std::string, std::string>; // name, already-encoded value

inline std::string csv_line(const std::vector<std::string>& cells)
{
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i)
        out += (i ? "," : "") + cells[i];
    return out;
}

inline std::string json_object(const std::vector<field>& fields)
{
    std::string out = "{";
    for (std::size_t i = 0; i < fields.size(); ++i)
        out += (i ? "," : "") + json_string(fields[i].first) + ":" + fields[i].second;
    return out + "}";
}

inline std::vector<std::string> record_columns(bool with_diff)
{
    std::vector<std::string> c{"d", "method", "value", "error_estimate", "elapsed_ms"};
    if (with_diff)
        c.push_back("max_rel_diff");
    return c;
}

inline std::string to_csv(const output_record& r, bool with_diff)
{
    std::vector<std::string> v{std::to_string(r.d), r.method, number(r.value), number(r.error_estimate),
                               number(r.elapsed_ms)};
    if (with_diff)
        v.push_back(r.max_rel_diff ? number(*r.max_rel_diff) : "");
    return csv_line(v);
}

inline std::string to_json(const output_record& r)
{
    std::vector<field> f{{"d", std::to_string(r.d)},
                         {"method", json_string(r.method)},
                         {"value", json_number(r.value)},
                         {"error_estimate", json_number(r.error_estimate)},
                         {"elapsed_ms", json_number(r.elapsed_ms)}};
    if (r.max_rel_diff)
        f.emplace_back("max_rel_diff", json_number(*r.max_rel_diff));
    return json_object(f);
}

// Writes records as CSV (header first) or JSON lines.
inline std::string render(const std::vector<output_record>& records, format fmt, bool with_diff)
{
    std::string out;
    if (fmt == format::csv) {
        out += csv_line(record_columns(with_diff)) + "\n";
        for (const auto& r : records)
            out += to_csv(r, with_diff) + "\n";
    } else {
        for (const auto& r : records)
            out += to_json(r) + "\n";
    }
    return out;
}

} // namespace polya::output

#endif
