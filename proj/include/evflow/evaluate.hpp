// evaluate.hpp
//
// Scoring of correlation variants. Ground truth is the all-params relation
// set at a chosen time-window; any variant's relation set is then scored
// against it with accuracy, precision, recall, and F1 computed over
// (event, flow) pairs. True negatives are defined against a bounded
// candidate universe: the pairs that agree on server IP, server port, and
// client IP and lie within a maximum window.

#pragma once

#include <vector>

#include "evflow/model.hpp"

namespace evflow {

// correlate(events, flows, all-params, window). Inputs are expected to be
// normalized and filtered for all-params.
RelationSet establish_ground_truth(const std::vector<NormalizedEvent>& events,
                                   const std::vector<NormalizedFlow>& flows,
                                   const TimeWindow& window);

// Pair-level confusion counts and the derived metrics.
//   TP = |predicted ∩ truth|, FP = |predicted \ truth|, FN = |truth \ predicted|,
//   TN = universe - TP - FP - FN.
// Ratios that come out 0/0 are defined by convention (see zero_division in
// the result): precision and recall are 1.0 when both sets are empty;
// recall is 1.0 whenever there is nothing to recover; precision is 0.0
// when nothing was predicted but the truth is non-empty; accuracy over an
// empty universe is 1.0. Throws ConsistencyError when universe_size cannot
// hold the observed pairs.
MetricsReport evaluate_variant(const RelationSet& ground_truth,
                               const RelationSet& predicted, uint64_t universe_size);

// Size of the bounded pair universe for the given window.
uint64_t candidate_universe(const std::vector<NormalizedEvent>& events,
                            const std::vector<NormalizedFlow>& flows,
                            const TimeWindow& max_window);

// Fixed 4-decimal rendering used in reports ("0.6667", "1.0000").
std::string format_metric(double value);

// MetricsReport as JSON with 4-decimal metric literals plus raw counts.
std::string metrics_report_json(const MetricsReport& report);

}  // namespace evflow
