// synth.hpp
//
// Deterministic generator of paired event/flow datasets with known ground
// truth. Each session produces one flow and one event that agree on every
// match feature; divergence is introduced only through explicit knobs:
// event lag and per-server clock drift, second-quantized event timestamps,
// record drops, crawler-style duplicate flows, and feature masking. Every
// imperfection is recorded in the labels, so tests can attribute each
// mismatch to the knob that caused it.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "evflow/model.hpp"

namespace evflow {

// Distribution of the event timestamp lag relative to flow start, in
// milliseconds. Negative values mean the event precedes the flow start.
struct LagSpec {
    enum class Kind { Constant, Uniform, Normal };

    Kind kind = Kind::Constant;
    double a = 0.0;  // constant value | uniform lower bound | normal mean
    double b = 0.0;  // uniform upper bound | normal standard deviation

    static LagSpec constant(double ms) { return {Kind::Constant, ms, 0.0}; }
    static LagSpec uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
    static LagSpec normal(double mean, double stddev) {
        return {Kind::Normal, mean, stddev};
    }

    bool operator==(const LagSpec&) const = default;
};

struct ServerSpec {
    Ipv4 ip;
    uint16_t port = 443;
    std::vector<std::string> hostnames;  // at least one

    bool operator==(const ServerSpec&) const = default;
};

struct SynthConfig {
    uint64_t session_count = 0;
    std::vector<ServerSpec> server_pool;
    uint32_t client_pool_size = 1;  // clients are 10.0.0.1, 10.0.0.2, ...
    LagSpec event_lag_ms;
    // Clock drift added to event timestamps, keyed by server IP text.
    std::map<std::string, int64_t> clock_drift_ms_per_source;
    double event_drop_rate = 0.0;
    double flow_drop_rate = 0.0;
    double crawler_duplicate_rate = 0.0;
    int64_t duplicate_gap_ms = 500;
    bool mask_sni = false;         // generate flows without SNI
    bool mask_client_port = false;  // generate events without client port
    // Events log whole seconds by default, like IIS.
    bool quantize_event_seconds = true;
    int64_t start_epoch_ms = 1'627'603'200'000;  // 2021-07-30 00:00:00 UTC
    int64_t time_span_ms = 3'600'000;
    int64_t flow_duration_min_ms = 100;
    int64_t flow_duration_max_ms = 2'000;
    uint64_t seed = 1;

    bool operator==(const SynthConfig&) const = default;
};

// The flows a crawler duplicate made share one event: the primary flow plus
// its clones.
struct DuplicateGroup {
    std::string event_id;
    std::set<std::string> flow_ids;

    bool operator==(const DuplicateGroup&) const = default;
};

struct GroundTruthLabels {
    // One (event, flow) pair per session — the primary flow only; duplicate
    // clones are listed in duplicate_groups instead. Pairs are kept even
    // when a drop removed one of their records.
    RelationSet intended_pairs;
    std::set<std::string> dropped_event_ids;
    std::set<std::string> dropped_flow_ids;
    std::vector<DuplicateGroup> duplicate_groups;

    bool operator==(const GroundTruthLabels&) const = default;
};

struct SynthDataset {
    std::vector<EventRecord> events;
    std::vector<FlowRecord> flows;
    GroundTruthLabels labels;
};

// Generates a dataset. Deterministic: identical config (seed included)
// yields identical records and labels. Session ids are "e<n>" / "f<n>" in
// generation order; a duplicate flow of session n is "f<n>d". Events are
// emitted sorted by (timestamp, id), flows by (start, id). Invalid
// configuration (probabilities outside [0,1], empty server pool or hostname
// list with sessions requested, uniform lag with lower > upper, negative
// stddev, negative durations or gap, min duration > max) throws InputError.
SynthDataset generate(const SynthConfig& config);

// Feature-availability profiles of the protocol mix: tls12 exposes
// everything; tls13 and quic hide the SNI on flows; no-client-port hides
// the client port on events.
enum class MaskProfile { Tls12, Tls13, Quic, NoClientPort };

std::string_view mask_profile_name(MaskProfile p);
std::optional<MaskProfile> parse_mask_profile(std::string_view name);

void mask_features(std::vector<EventRecord>& events,
                   std::vector<FlowRecord>& flows, MaskProfile profile);
void mask_features(std::vector<NormalizedEvent>& events,
                   std::vector<NormalizedFlow>& flows, MaskProfile profile);

// JSON plumbing used by the CLI: a config document and the labels file.
SynthConfig parse_synth_config_json(const std::string& text);
std::string synth_config_json(const SynthConfig& config);
std::string labels_json(const GroundTruthLabels& labels);
GroundTruthLabels parse_labels_json(const std::string& text);

}  // namespace evflow
