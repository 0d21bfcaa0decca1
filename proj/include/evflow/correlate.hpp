// correlate.hpp
//
// The event-flow correlation core. Two implementations produce the
// relation set for a feature variant and a time-window: a literal
// nested-loop reference kept deliberately simple for use as a test oracle,
// and an indexed implementation that buckets on the variant's exact-match
// key and probes flow intervals by time. Their outputs are set-equal by
// contract. Classification assigns each record the cardinality class of
// its relations (OK / ERR1 / ERR2).

#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "evflow/model.hpp"

namespace evflow {

// A missing window disables the time check entirely: records match on
// features alone, regardless of when they occurred.
using CorrelationWindow = std::optional<TimeWindow>;

// Reference implementation: every flow against every event. An event and
// a flow are related when every feature of the variant is equal on both
// and, given a window, flow start - earliness <= event time <= flow end +
// lateness (inclusive bounds).
RelationSet brute_force_correlate(const std::vector<NormalizedEvent>& events,
                                  const std::vector<NormalizedFlow>& flows,
                                  Variant variant, const CorrelationWindow& window);

// Indexed implementation; set-equal to brute_force_correlate on all inputs.
RelationSet correlate(const std::vector<NormalizedEvent>& events,
                      const std::vector<NormalizedFlow>& flows, Variant variant,
                      const CorrelationWindow& window);

// Cardinality classification:
//   event with no flow           -> ERR1 (single event)
//   flow with no event           -> ERR1 (single flow)
//   event with exactly one flow  -> OK
//   event with several flows     -> ERR2 (polygamous event)
//   flow with one or more events -> OK (many events per flow is correct)
// Throws ConsistencyError if a relation references an id that is not among
// the given records, or if record ids are not unique.
ClassifiedReport classify_relations(const RelationSet& relations,
                                    const std::vector<NormalizedEvent>& events,
                                    const std::vector<NormalizedFlow>& flows);

// Relation pairs as JSON-lines, one {"event_id", "flow_id"} object per
// line, in set order.
void write_relations_jsonl(std::ostream& out, const RelationSet& relations);
RelationSet parse_relations_jsonl(std::istream& in);

// The five classification counters as a single JSON object.
std::string classification_summary_json(const ClassifiedReport& report);

}  // namespace evflow
