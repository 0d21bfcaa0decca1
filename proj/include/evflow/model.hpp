// model.hpp
//
// Domain types shared by every part of the toolkit: web-server log events,
// bidirectional flow records, correlation time-windows, feature-set variants,
// relation sets and their cardinality classification, and scoring reports.
// Pure value types, no I/O.

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evflow {

// Malformed user input: files, flags, configuration.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A violated internal contract, e.g. a relation referencing an unknown
// record id. Maps to a distinct process exit code in the CLI.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// IPv4 address in host byte order. Formatting always yields the canonical
// dotted quad, so a parsed address needs no further cleanup.
struct Ipv4 {
    uint32_t value = 0;

    // Accepts dotted-quad text, decimal octets, leading zeros allowed
    // ("198.051.100.007" parses as 198.51.100.7).
    static std::optional<Ipv4> parse(std::string_view text);

    std::string to_string() const;

    auto operator<=>(const Ipv4&) const = default;
};

inline constexpr uint16_t kPortMin = 1;
inline constexpr uint32_t kPortMax = 65535;

// Returns the port number if text is a decimal in 1..65535.
std::optional<uint16_t> parse_port(std::string_view text);

// One web-server log line in parsed (pre-normalization) form. Field roles
// follow IIS/W3C naming. Optional fields are absent when the log line
// carried the "-" marker or the column was not configured.
struct EventRecord {
    int64_t time_generated = 0;  // epoch milliseconds, UTC
    Ipv4 s_ip;                   // logging server address
    uint16_t s_port = 0;         // service port
    Ipv4 c_ip;                   // requesting client address
    std::optional<uint16_t> c_port;
    std::optional<std::string> cs_host;  // requested hostname
    std::optional<uint64_t> sc_bytes;    // bytes the server sent
    std::optional<uint64_t> cs_bytes;    // bytes the server received
    std::optional<std::string> cs_uri_stem;
    std::optional<std::string> cs_user_agent;
    std::string source_id;
    // Columns outside the known role set, preserved verbatim.
    std::map<std::string, std::string> extra_fields;

    bool operator==(const EventRecord&) const = default;
};

// One bidirectional flow record. The flow source is the client and the
// destination is the server; BYTES_A counts client-to-server payload,
// BYTES_B the reverse direction.
struct FlowRecord {
    int64_t start_ns = 0;  // epoch nanoseconds
    int64_t end_ns = 0;
    Ipv4 l3_ipv4_src;      // client
    Ipv4 l3_ipv4_dst;      // server
    uint16_t l4_port_src = 0;
    uint16_t l4_port_dst = 0;
    uint64_t bytes_a = 0;  // client -> server
    uint64_t bytes_b = 0;  // server -> client
    std::optional<std::string> http_request_host;  // SNI
    std::string source_id;

    bool operator==(const FlowRecord&) const = default;
};

// Canonical comparable form of an event. Hostname lowercased with trailing
// dots stripped, timestamp in epoch milliseconds UTC.
struct NormalizedEvent {
    int64_t time_ms = 0;
    Ipv4 server_ip;
    uint16_t server_port = 0;
    Ipv4 client_ip;
    std::optional<uint16_t> client_port;
    std::optional<std::string> host;
    std::optional<uint64_t> bytes_sent;
    std::optional<uint64_t> bytes_received;
    std::optional<std::string> uri_stem;
    std::optional<std::string> user_agent;
    std::string id;

    bool operator==(const NormalizedEvent&) const = default;
};

// Canonical comparable form of a flow. Timestamps truncated to epoch
// milliseconds, SNI canonicalized, directions named by role.
struct NormalizedFlow {
    int64_t start_ms = 0;
    int64_t end_ms = 0;
    Ipv4 client_ip;
    uint16_t client_port = 0;
    Ipv4 server_ip;
    uint16_t server_port = 0;
    uint64_t bytes_to_server = 0;
    uint64_t bytes_to_client = 0;
    std::optional<std::string> sni;
    std::string id;

    bool operator==(const NormalizedFlow&) const = default;
};

// Temporal matching tolerance. An event may precede the flow start by up
// to `earliness_ms` and follow the flow end by up to `lateness_ms` and
// still be considered related. Both bounds are inclusive.
struct TimeWindow {
    int64_t earliness_ms = 0;
    int64_t lateness_ms = 0;

    bool valid() const { return earliness_ms >= 0 && lateness_ms >= 0; }

    auto operator<=>(const TimeWindow&) const = default;
};

// Correlation feature sets. all-params is the full TLS 1.2 method;
// no-sni drops the hostname check (TLS 1.3 / QUIC traffic), no-port drops
// the client port (servers that cannot log it), no-port-sni drops both.
enum class Variant {
    AllParams,
    NoSni,
    NoPort,
    NoPortSni,
};

inline constexpr Variant kAllVariants[] = {Variant::AllParams, Variant::NoSni,
                                           Variant::NoPort, Variant::NoPortSni};

// Canonical hyphenated names: "all-params", "no-sni", "no-port", "no-port-sni".
std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

// Individual match features a variant may require.
enum class Feature {
    Time,
    ServerIp,
    ServerPort,
    ClientIp,
    ClientPort,
    Sni,
};

std::string_view feature_name(Feature f);

// The exact feature set checked by a variant. Every variant requires
// time, server IP, server port, and client IP.
std::set<Feature> required_features(Variant v);

// One event-flow match, identified by the record ids.
struct Relation {
    std::string event_id;
    std::string flow_id;

    auto operator<=>(const Relation&) const = default;
};

using RelationSet = std::set<Relation>;

// Correctness class of a record's relations: OK, ERR1 (no counterpart
// found), or ERR2 (an event related to several flows at once).
enum class RelationClass { Ok, Err1, Err2 };

std::string_view relation_class_name(RelationClass c);

// Cardinality classification of a relation set. Events and flows carry
// separate class maps since their id spaces are independent.
struct ClassifiedReport {
    uint64_t single_events = 0;
    uint64_t single_flows = 0;
    uint64_t correlated_events = 0;
    uint64_t correlated_flows = 0;
    uint64_t polygamous_events = 0;
    std::map<std::string, RelationClass> event_classes;
    std::map<std::string, RelationClass> flow_classes;
};

// Scores of a predicted relation set against a ground truth, computed over
// (event, flow) pairs. `zero_division` names any ratio that was defined by
// convention rather than arithmetic.
struct MetricsReport {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    uint64_t tp = 0;
    uint64_t fp = 0;
    uint64_t fn = 0;
    uint64_t tn = 0;
    std::vector<std::string> zero_division;
};

}  // namespace evflow
