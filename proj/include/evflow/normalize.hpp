// normalize.hpp
//
// Canonicalization of parsed records and the per-variant feature filter.
// Normalization is total on parsed records and idempotent; filtering keeps
// a record exactly when every feature the chosen variant checks is present
// on it.

#pragma once

#include <vector>

#include "evflow/model.hpp"

namespace evflow {

// Lowercases (ASCII) and strips trailing dots.
std::string canonical_hostname(std::string_view host);

// Event canonicalization: hostname case/dot cleanup; a client port of 0 is
// treated as missing (seen from exporters that use 0 as a null marker).
NormalizedEvent normalize_event(const EventRecord& e);
NormalizedEvent normalize_event(const NormalizedEvent& e);

// Flow canonicalization: nanosecond timestamps truncate to milliseconds,
// SNI gets the hostname cleanup, directions are renamed by role (the flow
// source is the client).
NormalizedFlow normalize_flow(const FlowRecord& f);
NormalizedFlow normalize_flow(const NormalizedFlow& f);

struct FilterRejection {
    enum class Kind { Event, Flow };
    Kind kind = Kind::Event;
    std::string id;
    Feature missing = Feature::ClientPort;
};

struct FilterResult {
    std::vector<NormalizedEvent> events;
    std::vector<NormalizedFlow> flows;
    std::vector<FilterRejection> rejections;
};

// Drops records lacking a feature the variant requires; each rejection
// names the first missing feature. kept + rejected = input.
FilterResult filter_dataset(std::vector<NormalizedEvent> events,
                            std::vector<NormalizedFlow> flows, Variant variant);

}  // namespace evflow
