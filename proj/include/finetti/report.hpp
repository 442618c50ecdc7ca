#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "finetti/bounds.hpp"

namespace finetti {

// Fixed 15-significant-digit scientific form; deterministic across runs.
inline std::string format_ld(long double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.14Le", v);
    return buf;
}

inline std::string format_bound_value(const BoundValue& v) {
    return v.is_rational ? rat_to_string(v.rat) : format_ld(v.fl.value);
}

inline std::string metric_name(Metric m) { return m == Metric::TV_L1 ? "tv_l1" : "kl"; }

// One report row: a computed divergence, optionally checked against a bound.
struct ReportRow {
    std::string subject_id;
    int c = 0;
    long n = 0;
    long k = 0;
    std::string metric;
    std::string value;        // exact rational string for TV, decimal for KL
    std::string bound_id;
    std::string bound_value;
    std::string convention = "L1";
    std::string valid;        // "true"/"false"/"" when no bound
    std::string pass;         // "pass"/"fail"/"skip"/""
    std::string slack;
    std::string error_bound;  // accumulated divergence + bound error
    std::string tight;        // "true"/"false"/""
    std::string reason;
};

inline const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols = {
        "subject_id", "c", "n", "k", "metric", "value", "bound_id", "bound_value",
        "convention", "valid", "pass", "slack", "error_bound", "tight", "reason"};
    return cols;
}

inline std::vector<std::string> row_fields(const ReportRow& r) {
    return {r.subject_id, std::to_string(r.c), std::to_string(r.n), std::to_string(r.k),
            r.metric, r.value, r.bound_id, r.bound_value, r.convention, r.valid,
            r.pass, r.slack, r.error_bound, r.tight, r.reason};
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

// CSV with a comment header recording the reproducibility inputs.
inline std::string rows_to_csv(const std::vector<ReportRow>& rows, int precision_bits,
                               const std::string& extra_meta = "") {
    std::ostringstream out;
    out << "# precision_bits=" << precision_bits;
    if (!extra_meta.empty()) out << " " << extra_meta;
    out << "\n";
    const auto& cols = report_columns();
    for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (const ReportRow& r : rows) {
        auto fields = row_fields(r);
        for (size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_escape(fields[i]);
        out << "\n";
    }
    return out.str();
}

inline std::string rows_to_json(const std::vector<ReportRow>& rows, int precision_bits,
                                const std::string& extra_meta = "") {
    nlohmann::json j;
    j["precision_bits"] = precision_bits;
    if (!extra_meta.empty()) j["meta"] = extra_meta;
    j["rows"] = nlohmann::json::array();
    for (const ReportRow& r : rows) {
        nlohmann::json row;
        const auto& cols = report_columns();
        auto fields = row_fields(r);
        for (size_t i = 0; i < cols.size(); ++i) row[cols[i]] = fields[i];
        j["rows"].push_back(row);
    }
    return j.dump(2) + "\n";
}

}  // namespace finetti
