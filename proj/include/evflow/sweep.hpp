// sweep.hpp
//
// Time-window grid search. Every combination of the configured earliness
// and lateness values is correlated and classified; the window minimizing
// the weighted error count
//     w_err1 * (single events + single flows) + w_err2 * polygamous events
// is chosen. Ties prefer the tightest window: smallest earliness+lateness
// sum first, then smallest earliness. An optional unbounded reference row
// correlates with no time constraint at all; it never participates in the
// argmin.

#pragma once

#include <optional>
#include <vector>

#include "evflow/model.hpp"

namespace evflow {

struct SweepConfig {
    std::vector<int64_t> earliness_values_ms;
    std::vector<int64_t> lateness_values_ms;
    double weight_err1 = 1.0;
    double weight_err2 = 2.0;
    bool include_unbounded = false;

    // {0..5} seconds on both axes, the 36-window default grid.
    static SweepConfig default_grid();
};

struct SweepRow {
    TimeWindow window;
    ClassifiedReport report;
    double weighted_error = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;  // grid order: earliness outer, lateness inner
    TimeWindow chosen;
    std::optional<SweepRow> unbounded;
};

double weighted_error(const ClassifiedReport& report, double weight_err1,
                      double weight_err2);

// Human-readable window label in seconds, e.g. "(3, 0)" or "(2.5, 0)".
std::string window_label(const TimeWindow& window);

// Runs the grid. Throws InputError on an invalid config (empty or
// duplicated value lists, negative values or weights).
SweepReport sweep_windows(const std::vector<NormalizedEvent>& events,
                          const std::vector<NormalizedFlow>& flows, Variant variant,
                          const SweepConfig& config);

// CSV rendering: one row per window with the classification counters and
// the weighted error; the unbounded reference row, when present, is
// labeled "(NA, NA)".
std::string sweep_report_csv(const SweepReport& report);

// JSON rendering with rows, the chosen window, and the optional unbounded
// reference row.
std::string sweep_report_json(const SweepReport& report);

}  // namespace evflow
