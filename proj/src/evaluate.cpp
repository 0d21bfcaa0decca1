// evaluate.cpp

#include "evflow/evaluate.hpp"

#include <algorithm>
#include <cstdio>

#include "evflow/correlate.hpp"

namespace evflow {

RelationSet establish_ground_truth(const std::vector<NormalizedEvent>& events,
                                   const std::vector<NormalizedFlow>& flows,
                                   const TimeWindow& window) {
    return correlate(events, flows, Variant::AllParams, window);
}

MetricsReport evaluate_variant(const RelationSet& ground_truth,
                               const RelationSet& predicted, uint64_t universe_size) {
    MetricsReport m;
    for (const Relation& r : predicted) {
        if (ground_truth.contains(r))
            ++m.tp;
        else
            ++m.fp;
    }
    m.fn = ground_truth.size() - m.tp;

    uint64_t observed = m.tp + m.fp + m.fn;
    if (universe_size < observed) {
        throw ConsistencyError("universe size " + std::to_string(universe_size) +
                               " smaller than observed pair count " +
                               std::to_string(observed));
    }
    m.tn = universe_size - observed;

    if (m.tp + m.fp == 0) {
        m.precision = ground_truth.empty() ? 1.0 : 0.0;
        m.zero_division.push_back("precision");
    } else {
        m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
    }
    if (m.tp + m.fn == 0) {
        // Nothing to recover; vacuously recalled everything.
        m.recall = 1.0;
        m.zero_division.push_back("recall");
    } else {
        m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    }
    if (m.precision + m.recall > 0.0) {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
        m.f1 = 0.0;
        m.zero_division.push_back("f1");
    }
    if (universe_size == 0) {
        m.accuracy = 1.0;
        m.zero_division.push_back("accuracy");
    } else {
        m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(universe_size);
    }
    return m;
}

uint64_t candidate_universe(const std::vector<NormalizedEvent>& events,
                            const std::vector<NormalizedFlow>& flows,
                            const TimeWindow& max_window) {
    // The agreement key (server IP, server port, client IP) plus the time
    // bound is exactly the no-port-sni match rule.
    return correlate(events, flows, Variant::NoPortSni, max_window).size();
}

std::string format_metric(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    return buf;
}

std::string metrics_report_json(const MetricsReport& report) {
    // Assembled by hand so the metric literals keep their 4-decimal form.
    std::string out = "{\n";
    out += "  \"accuracy\": " + format_metric(report.accuracy) + ",\n";
    out += "  \"precision\": " + format_metric(report.precision) + ",\n";
    out += "  \"recall\": " + format_metric(report.recall) + ",\n";
    out += "  \"f1\": " + format_metric(report.f1) + ",\n";
    out += "  \"tp\": " + std::to_string(report.tp) + ",\n";
    out += "  \"fp\": " + std::to_string(report.fp) + ",\n";
    out += "  \"fn\": " + std::to_string(report.fn) + ",\n";
    out += "  \"tn\": " + std::to_string(report.tn) + ",\n";
    out += "  \"zero_division\": [";
    for (size_t i = 0; i < report.zero_division.size(); ++i) {
        if (i > 0) out += ", ";
        out += "\"" + report.zero_division[i] + "\"";
    }
    out += "]\n}\n";
    return out;
}

}  // namespace evflow
