#pragma once

// Suite reports and their CSV / JSON serialization.
// CSV columns: suite,anchor,case,inputs,lhs,rhs,gap,tolerance,pass
// JSON: {"schema", "suite", "anchor", "cases": [...same fields...], "metadata": {...}}

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace sgdefect::cli {

inline constexpr const char* report_schema = "sgdefect-report/1";

struct Case {
    std::string key;
    std::vector<std::pair<std::string, double>> inputs;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Report {
    std::string suite;
    std::string anchor;
    std::vector<Case> cases;
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
    double seconds = 0.0;  // wall time; kept out of the report files

    bool passed() const {
        for (const auto& c : cases)
            if (!c.pass) return false;
        return true;
    }

    void note(const std::string& s) { metadata["notes"].push_back(s); }

    /// Appends a case; pass iff gap <= tolerance (a NaN gap fails).
    Case& add(std::string key, std::vector<std::pair<std::string, double>> inputs, double lhs, double rhs, double gap,
              double tolerance) {
        cases.push_back({std::move(key), std::move(inputs), lhs, rhs, gap, tolerance, gap <= tolerance});
        return cases.back();
    }
};

namespace detail {

inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char c : s) {
        if (c == '"') r += '"';
        r += c;
    }
    return r + "\"";
}

inline std::string inputs_string(const Case& c) {
    std::string r;
    for (const auto& [k, v] : c.inputs) {
        if (!r.empty()) r += ';';
        r += k + "=" + fmt(v);
    }
    return r;
}

inline nlohmann::ordered_json number_json(double v) {
    if (std::isfinite(v)) return v;
    return fmt(v);
}

} // namespace detail

inline void write_csv(std::ostream& os, const Report& r) {
    os << "suite,anchor,case,inputs,lhs,rhs,gap,tolerance,pass\n";
    for (const auto& c : r.cases) {
        os << detail::csv_field(r.suite) << ',' << detail::csv_field(r.anchor) << ',' << detail::csv_field(c.key) << ','
           << detail::csv_field(detail::inputs_string(c)) << ',' << detail::fmt(c.lhs) << ',' << detail::fmt(c.rhs)
           << ',' << detail::fmt(c.gap) << ',' << detail::fmt(c.tolerance) << ',' << (c.pass ? "true" : "false")
           << '\n';
    }
}

inline nlohmann::ordered_json to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["schema"] = report_schema;
    j["suite"] = r.suite;
    j["anchor"] = r.anchor;
    j["pass"] = r.passed();
    j["cases"] = nlohmann::ordered_json::array();
    for (const auto& c : r.cases) {
        nlohmann::ordered_json cj;
        cj["case"] = c.key;
        cj["inputs"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : c.inputs) cj["inputs"][k] = detail::number_json(v);
        cj["lhs"] = detail::number_json(c.lhs);
        cj["rhs"] = detail::number_json(c.rhs);
        cj["gap"] = detail::number_json(c.gap);
        cj["tolerance"] = detail::number_json(c.tolerance);
        cj["pass"] = c.pass;
        j["cases"].push_back(std::move(cj));
    }
    j["metadata"] = r.metadata;
    return j;
}

inline void write_json(std::ostream& os, const Report& r) { os << to_json(r).dump(2) << '\n'; }

} // namespace sgdefect::cli
