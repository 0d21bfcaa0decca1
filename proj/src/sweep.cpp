// sweep.cpp

#include "evflow/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "evflow/correlate.hpp"

namespace evflow {

namespace {

void validate_axis(const std::vector<int64_t>& values, const char* name) {
    if (values.empty()) throw InputError(std::string(name) + " value list is empty");
    std::set<int64_t> seen;
    for (int64_t v : values) {
        if (v < 0)
            throw InputError(std::string(name) + " value must be non-negative");
        if (!seen.insert(v).second)
            throw InputError(std::string(name) + " values contain duplicates");
    }
}

// "(3, 0)" in seconds; fractional milliseconds render as a trimmed decimal.
std::string seconds_text(int64_t ms) {
    std::string out = std::to_string(ms / 1000);
    int64_t frac = ms % 1000;
    if (frac != 0) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "%03lld", static_cast<long long>(frac));
        std::string digits = buf;
        while (digits.back() == '0') digits.pop_back();
        out += "." + digits;
    }
    return out;
}

std::string error_text(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    std::string out = buf;
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
    return out;
}

nlohmann::json counters_json(const ClassifiedReport& r) {
    nlohmann::json j;
    j["single_events"] = r.single_events;
    j["single_flows"] = r.single_flows;
    j["correlated_events"] = r.correlated_events;
    j["correlated_flows"] = r.correlated_flows;
    j["polygamous_events"] = r.polygamous_events;
    return j;
}

}  // namespace

std::string window_label(const TimeWindow& window) {
    return "(" + seconds_text(window.earliness_ms) + ", " +
           seconds_text(window.lateness_ms) + ")";
}

SweepConfig SweepConfig::default_grid() {
    SweepConfig config;
    for (int64_t s = 0; s <= 5; ++s) {
        config.earliness_values_ms.push_back(s * 1000);
        config.lateness_values_ms.push_back(s * 1000);
    }
    return config;
}

double weighted_error(const ClassifiedReport& report, double weight_err1,
                      double weight_err2) {
    return weight_err1 *
               static_cast<double>(report.single_events + report.single_flows) +
           weight_err2 * static_cast<double>(report.polygamous_events);
}

SweepReport sweep_windows(const std::vector<NormalizedEvent>& events,
                          const std::vector<NormalizedFlow>& flows, Variant variant,
                          const SweepConfig& config) {
    validate_axis(config.earliness_values_ms, "earliness");
    validate_axis(config.lateness_values_ms, "lateness");
    if (config.weight_err1 < 0 || config.weight_err2 < 0)
        throw InputError("error weights must be non-negative");

    SweepReport report;
    report.rows.reserve(config.earliness_values_ms.size() *
                        config.lateness_values_ms.size());

    for (int64_t earliness : config.earliness_values_ms) {
        for (int64_t lateness : config.lateness_values_ms) {
            TimeWindow window{earliness, lateness};
            RelationSet relations = correlate(events, flows, variant, window);
            ClassifiedReport classified = classify_relations(relations, events, flows);
            double error = weighted_error(classified, config.weight_err1,
                                          config.weight_err2);
            report.rows.push_back({window, std::move(classified), error});
        }
    }

    const SweepRow* best = nullptr;
    for (const SweepRow& row : report.rows) {
        if (!best) {
            best = &row;
            continue;
        }
        if (row.weighted_error < best->weighted_error) {
            best = &row;
            continue;
        }
        if (row.weighted_error > best->weighted_error) continue;
        // Tie: prefer the tightest adequate window.
        int64_t row_sum = row.window.earliness_ms + row.window.lateness_ms;
        int64_t best_sum = best->window.earliness_ms + best->window.lateness_ms;
        if (row_sum < best_sum ||
            (row_sum == best_sum &&
             row.window.earliness_ms < best->window.earliness_ms)) {
            best = &row;
        }
    }
    report.chosen = best->window;

    if (config.include_unbounded) {
        RelationSet relations = correlate(events, flows, variant, std::nullopt);
        ClassifiedReport classified = classify_relations(relations, events, flows);
        double error =
            weighted_error(classified, config.weight_err1, config.weight_err2);
        report.unbounded = SweepRow{TimeWindow{0, 0}, std::move(classified), error};
    }
    return report;
}

std::string sweep_report_csv(const SweepReport& report) {
    std::string out =
        "Time-Window Size,Single Flows,Correlated Flows,Single Events,"
        "Correlated Events,Polygamous Events,Weighted Error\n";
    auto append_row = [&out](const std::string& label, const SweepRow& row) {
        out += "\"" + label + "\"," + std::to_string(row.report.single_flows) + ',' +
               std::to_string(row.report.correlated_flows) + ',' +
               std::to_string(row.report.single_events) + ',' +
               std::to_string(row.report.correlated_events) + ',' +
               std::to_string(row.report.polygamous_events) + ',' +
               error_text(row.weighted_error) + '\n';
    };
    for (const SweepRow& row : report.rows) append_row(window_label(row.window), row);
    if (report.unbounded) append_row("(NA, NA)", *report.unbounded);
    return out;
}

std::string sweep_report_json(const SweepReport& report) {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (const SweepRow& row : report.rows) {
        nlohmann::json r;
        r["earliness_ms"] = row.window.earliness_ms;
        r["lateness_ms"] = row.window.lateness_ms;
        r["label"] = window_label(row.window);
        r["counters"] = counters_json(row.report);
        r["weighted_error"] = row.weighted_error;
        j["rows"].push_back(std::move(r));
    }
    j["chosen"]["earliness_ms"] = report.chosen.earliness_ms;
    j["chosen"]["lateness_ms"] = report.chosen.lateness_ms;
    j["chosen"]["label"] = window_label(report.chosen);
    if (report.unbounded) {
        nlohmann::json r;
        r["label"] = "(NA, NA)";
        r["counters"] = counters_json(report.unbounded->report);
        r["weighted_error"] = report.unbounded->weighted_error;
        j["unbounded"] = std::move(r);
    }
    return j.dump(2) + "\n";
}

}  // namespace evflow
