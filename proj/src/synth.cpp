// synth.cpp

#include "evflow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <tuple>

#include <json.hpp>

namespace evflow {

namespace {

// Sampling primitives are hand-rolled on top of the mt19937_64 word stream:
// the engine's output is pinned by the standard, the library distributions
// are not, and byte-identical output across toolchains is a contract here.

uint64_t uniform_below(std::mt19937_64& rng, uint64_t n) {
    uint64_t limit = std::numeric_limits<uint64_t>::max() -
                     std::numeric_limits<uint64_t>::max() % n;
    uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

double sample_normal(std::mt19937_64& rng, double mean, double stddev) {
    double u1 = 1.0 - uniform_unit(rng);  // (0, 1]
    double u2 = uniform_unit(rng);
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(2.0 * std::numbers::pi * u2);
}

bool bernoulli(std::mt19937_64& rng, double p) { return uniform_unit(rng) < p; }

double sample_lag(std::mt19937_64& rng, const LagSpec& spec) {
    switch (spec.kind) {
        case LagSpec::Kind::Constant:
            return spec.a;
        case LagSpec::Kind::Uniform:
            return spec.a + uniform_unit(rng) * (spec.b - spec.a);
        case LagSpec::Kind::Normal:
            return sample_normal(rng, spec.a, spec.b);
    }
    return 0.0;
}

int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if (a % b != 0 && (a < 0) != (b < 0)) --q;
    return q;
}

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw InputError(std::string(name) + " must be in [0, 1]");
}

void validate(const SynthConfig& c) {
    check_probability(c.event_drop_rate, "event_drop_rate");
    check_probability(c.flow_drop_rate, "flow_drop_rate");
    check_probability(c.crawler_duplicate_rate, "crawler_duplicate_rate");
    if (c.duplicate_gap_ms < 0) throw InputError("duplicate_gap_ms must be >= 0");
    if (c.time_span_ms <= 0) throw InputError("time_span_ms must be positive");
    if (c.start_epoch_ms < 0) throw InputError("start_epoch_ms must be >= 0");
    if (c.flow_duration_min_ms < 0 ||
        c.flow_duration_max_ms < c.flow_duration_min_ms)
        throw InputError("flow duration bounds must satisfy 0 <= min <= max");
    if (c.event_lag_ms.kind == LagSpec::Kind::Uniform &&
        c.event_lag_ms.a > c.event_lag_ms.b)
        throw InputError("uniform lag bounds are inverted");
    if (c.event_lag_ms.kind == LagSpec::Kind::Normal && c.event_lag_ms.b < 0)
        throw InputError("normal lag stddev must be >= 0");
    if (c.session_count == 0) return;
    if (c.server_pool.empty())
        throw InputError("server_pool must not be empty when sessions are requested");
    for (const ServerSpec& s : c.server_pool) {
        if (s.hostnames.empty())
            throw InputError("every server needs at least one hostname");
        if (s.port < kPortMin) throw InputError("server port outside 1..65535");
    }
    if (c.client_pool_size == 0)
        throw InputError("client_pool_size must be >= 1 when sessions are requested");
}

constexpr std::string_view kUserAgents[] = {
    "Mozilla/5.0+(Windows+NT+10.0;+Win64)",
    "curl/7.88.1",
    "python-requests/2.31",
    "Wget/1.21",
};

}  // namespace

SynthDataset generate(const SynthConfig& config) {
    validate(config);

    SynthDataset out;
    std::mt19937_64 rng(config.seed);

    for (uint64_t i = 1; i <= config.session_count; ++i) {
        const ServerSpec& server =
            config.server_pool[uniform_below(rng, config.server_pool.size())];
        const std::string& hostname =
            server.hostnames[uniform_below(rng, server.hostnames.size())];
        Ipv4 client{0x0A000001u +
                    static_cast<uint32_t>(uniform_below(rng, config.client_pool_size))};
        auto client_port = static_cast<uint16_t>(1024 + uniform_below(rng, 64512));
        int64_t start =
            config.start_epoch_ms +
            static_cast<int64_t>(uniform_below(rng, config.time_span_ms));
        int64_t duration =
            config.flow_duration_min_ms +
            static_cast<int64_t>(uniform_below(
                rng, config.flow_duration_max_ms - config.flow_duration_min_ms + 1));
        auto start_sub = static_cast<int64_t>(uniform_below(rng, 1'000'000));
        auto end_sub = static_cast<int64_t>(uniform_below(rng, 1'000'000));
        if (duration == 0 && end_sub < start_sub) std::swap(start_sub, end_sub);
        uint64_t bytes_a = 64 + uniform_below(rng, 4096);
        uint64_t bytes_b = 512 + uniform_below(rng, 65536);
        uint64_t uri_index = uniform_below(rng, 500);
        uint64_t agent_index = uniform_below(rng, std::size(kUserAgents));
        double lag = sample_lag(rng, config.event_lag_ms);
        bool duplicate = bernoulli(rng, config.crawler_duplicate_rate);
        bool drop_event = bernoulli(rng, config.event_drop_rate);
        bool drop_flow = bernoulli(rng, config.flow_drop_rate);

        std::string event_id = "e" + std::to_string(i);
        std::string flow_id = "f" + std::to_string(i);

        int64_t drift = 0;
        auto drift_it = config.clock_drift_ms_per_source.find(server.ip.to_string());
        if (drift_it != config.clock_drift_ms_per_source.end())
            drift = drift_it->second;
        int64_t event_time = start + std::llround(lag) + drift;
        if (config.quantize_event_seconds)
            event_time = floor_div(event_time, 1000) * 1000;

        EventRecord event;
        event.time_generated = event_time;
        event.s_ip = server.ip;
        event.s_port = server.port;
        event.c_ip = client;
        if (!config.mask_client_port) event.c_port = client_port;
        event.cs_host = hostname;
        event.sc_bytes = bytes_b;
        event.cs_bytes = bytes_a;
        event.cs_uri_stem = "/page" + std::to_string(uri_index) + ".html";
        event.cs_user_agent = std::string(kUserAgents[agent_index]);
        event.source_id = event_id;

        FlowRecord flow;
        flow.start_ns = start * 1'000'000 + start_sub;
        flow.end_ns = (start + duration) * 1'000'000 + end_sub;
        flow.l3_ipv4_src = client;
        flow.l3_ipv4_dst = server.ip;
        flow.l4_port_src = client_port;
        flow.l4_port_dst = server.port;
        flow.bytes_a = bytes_a;
        flow.bytes_b = bytes_b;
        if (!config.mask_sni) flow.http_request_host = hostname;
        flow.source_id = flow_id;

        out.labels.intended_pairs.insert({event_id, flow_id});

        if (duplicate) {
            FlowRecord clone = flow;
            clone.start_ns += config.duplicate_gap_ms * 1'000'000;
            clone.end_ns += config.duplicate_gap_ms * 1'000'000;
            clone.source_id = flow_id + "d";
            out.labels.duplicate_groups.push_back(
                {event_id, {flow_id, clone.source_id}});
            out.flows.push_back(std::move(clone));
        }
        if (drop_event)
            out.labels.dropped_event_ids.insert(event_id);
        else
            out.events.push_back(std::move(event));
        if (drop_flow)
            out.labels.dropped_flow_ids.insert(flow_id);
        else
            out.flows.push_back(std::move(flow));
    }

    std::sort(out.events.begin(), out.events.end(),
              [](const EventRecord& a, const EventRecord& b) {
                  return std::tie(a.time_generated, a.source_id) <
                         std::tie(b.time_generated, b.source_id);
              });
    std::sort(out.flows.begin(), out.flows.end(),
              [](const FlowRecord& a, const FlowRecord& b) {
                  return std::tie(a.start_ns, a.source_id) <
                         std::tie(b.start_ns, b.source_id);
              });
    return out;
}

std::string_view mask_profile_name(MaskProfile p) {
    switch (p) {
        case MaskProfile::Tls12:
            return "tls12";
        case MaskProfile::Tls13:
            return "tls13";
        case MaskProfile::Quic:
            return "quic";
        case MaskProfile::NoClientPort:
            return "no-client-port";
    }
    return "";
}

std::optional<MaskProfile> parse_mask_profile(std::string_view name) {
    for (MaskProfile p : {MaskProfile::Tls12, MaskProfile::Tls13, MaskProfile::Quic,
                          MaskProfile::NoClientPort})
        if (name == mask_profile_name(p)) return p;
    return std::nullopt;
}

void mask_features(std::vector<EventRecord>& events,
                   std::vector<FlowRecord>& flows, MaskProfile profile) {
    switch (profile) {
        case MaskProfile::Tls12:
            return;
        case MaskProfile::Tls13:
        case MaskProfile::Quic:
            for (FlowRecord& f : flows) f.http_request_host.reset();
            return;
        case MaskProfile::NoClientPort:
            for (EventRecord& e : events) e.c_port.reset();
            return;
    }
}

void mask_features(std::vector<NormalizedEvent>& events,
                   std::vector<NormalizedFlow>& flows, MaskProfile profile) {
    switch (profile) {
        case MaskProfile::Tls12:
            return;
        case MaskProfile::Tls13:
        case MaskProfile::Quic:
            for (NormalizedFlow& f : flows) f.sni.reset();
            return;
        case MaskProfile::NoClientPort:
            for (NormalizedEvent& e : events) e.client_port.reset();
            return;
    }
}

namespace {

using nlohmann::json;

[[noreturn]] void bad_config(const std::string& what) {
    throw InputError("synth config: " + what);
}

double number_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) bad_config(std::string(key) + " must be a number");
    return j[key].get<double>();
}

LagSpec parse_lag_spec(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        bad_config("event_lag_ms needs a \"kind\" of constant|uniform|normal");
    std::string kind = j["kind"].get<std::string>();
    if (kind == "constant") {
        return LagSpec::constant(number_field(j, "value"));
    }
    if (kind == "uniform") {
        LagSpec spec = LagSpec::uniform(number_field(j, "min"), number_field(j, "max"));
        if (spec.a > spec.b) bad_config("uniform lag bounds are inverted");
        return spec;
    }
    if (kind == "normal") {
        LagSpec spec = LagSpec::normal(number_field(j, "mean"), number_field(j, "stddev"));
        if (spec.b < 0) bad_config("normal lag stddev must be >= 0");
        return spec;
    }
    bad_config("unknown lag kind \"" + kind + "\"");
}

json lag_spec_json(const LagSpec& spec) {
    json j;
    switch (spec.kind) {
        case LagSpec::Kind::Constant:
            j["kind"] = "constant";
            j["value"] = spec.a;
            break;
        case LagSpec::Kind::Uniform:
            j["kind"] = "uniform";
            j["min"] = spec.a;
            j["max"] = spec.b;
            break;
        case LagSpec::Kind::Normal:
            j["kind"] = "normal";
            j["mean"] = spec.a;
            j["stddev"] = spec.b;
            break;
    }
    return j;
}

}  // namespace

SynthConfig parse_synth_config_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (!j.is_object()) bad_config("document is not a JSON object");

    static const std::set<std::string> known = {
        "session_count", "server_pool", "client_pool_size", "event_lag_ms",
        "clock_drift_ms_per_source", "event_drop_rate", "flow_drop_rate",
        "crawler_duplicate_rate", "duplicate_gap_ms", "mask_sni",
        "mask_client_port", "quantize_event_seconds", "start_epoch_ms",
        "time_span_ms", "flow_duration_min_ms", "flow_duration_max_ms", "seed"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) bad_config("unknown key \"" + key + "\"");

    SynthConfig config;
    auto read_u64 = [&](const char* key, auto& dst) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_unsigned()) bad_config(std::string(key) + " must be a non-negative integer");
        dst = j[key].get<uint64_t>();
    };
    auto read_i64 = [&](const char* key, int64_t& dst) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_integer()) bad_config(std::string(key) + " must be an integer");
        dst = j[key].get<int64_t>();
    };
    auto read_prob = [&](const char* key, double& dst) {
        if (!j.contains(key)) return;
        if (!j[key].is_number()) bad_config(std::string(key) + " must be a number");
        dst = j[key].get<double>();
    };
    auto read_bool = [&](const char* key, bool& dst) {
        if (!j.contains(key)) return;
        if (!j[key].is_boolean()) bad_config(std::string(key) + " must be a boolean");
        dst = j[key].get<bool>();
    };

    read_u64("session_count", config.session_count);
    if (j.contains("server_pool")) {
        if (!j["server_pool"].is_array()) bad_config("server_pool must be an array");
        for (const json& entry : j["server_pool"]) {
            if (!entry.is_object() || !entry.contains("ip") ||
                !entry["ip"].is_string())
                bad_config("server_pool entries need an \"ip\" string");
            ServerSpec server;
            auto ip = Ipv4::parse(entry["ip"].get<std::string>());
            if (!ip) bad_config("bad server IP \"" + entry["ip"].get<std::string>() + "\"");
            server.ip = *ip;
            if (entry.contains("port")) {
                if (!entry["port"].is_number_unsigned())
                    bad_config("server port must be a positive integer");
                uint64_t port = entry["port"].get<uint64_t>();
                if (port < kPortMin || port > kPortMax)
                    bad_config("server port outside 1..65535");
                server.port = static_cast<uint16_t>(port);
            }
            if (!entry.contains("hostnames") || !entry["hostnames"].is_array() ||
                entry["hostnames"].empty())
                bad_config("every server needs a non-empty \"hostnames\" array");
            for (const json& h : entry["hostnames"]) {
                if (!h.is_string()) bad_config("hostnames must be strings");
                server.hostnames.push_back(h.get<std::string>());
            }
            config.server_pool.push_back(std::move(server));
        }
    }
    if (j.contains("client_pool_size")) {
        if (!j["client_pool_size"].is_number_unsigned())
            bad_config("client_pool_size must be a non-negative integer");
        config.client_pool_size = j["client_pool_size"].get<uint32_t>();
    }
    if (j.contains("event_lag_ms")) config.event_lag_ms = parse_lag_spec(j["event_lag_ms"]);
    if (j.contains("clock_drift_ms_per_source")) {
        const json& drift = j["clock_drift_ms_per_source"];
        if (!drift.is_object())
            bad_config("clock_drift_ms_per_source must be an object");
        for (const auto& [ip, value] : drift.items()) {
            if (!value.is_number_integer())
                bad_config("clock drift values must be integers");
            config.clock_drift_ms_per_source[ip] = value.get<int64_t>();
        }
    }
    read_prob("event_drop_rate", config.event_drop_rate);
    read_prob("flow_drop_rate", config.flow_drop_rate);
    read_prob("crawler_duplicate_rate", config.crawler_duplicate_rate);
    read_i64("duplicate_gap_ms", config.duplicate_gap_ms);
    read_bool("mask_sni", config.mask_sni);
    read_bool("mask_client_port", config.mask_client_port);
    read_bool("quantize_event_seconds", config.quantize_event_seconds);
    read_i64("start_epoch_ms", config.start_epoch_ms);
    read_i64("time_span_ms", config.time_span_ms);
    read_i64("flow_duration_min_ms", config.flow_duration_min_ms);
    read_i64("flow_duration_max_ms", config.flow_duration_max_ms);
    read_u64("seed", config.seed);
    validate(config);
    return config;
}

std::string synth_config_json(const SynthConfig& config) {
    json j;
    j["session_count"] = config.session_count;
    j["server_pool"] = json::array();
    for (const ServerSpec& server : config.server_pool) {
        json s;
        s["ip"] = server.ip.to_string();
        s["port"] = server.port;
        s["hostnames"] = server.hostnames;
        j["server_pool"].push_back(std::move(s));
    }
    j["client_pool_size"] = config.client_pool_size;
    j["event_lag_ms"] = lag_spec_json(config.event_lag_ms);
    j["clock_drift_ms_per_source"] = json::object();
    for (const auto& [ip, value] : config.clock_drift_ms_per_source)
        j["clock_drift_ms_per_source"][ip] = value;
    j["event_drop_rate"] = config.event_drop_rate;
    j["flow_drop_rate"] = config.flow_drop_rate;
    j["crawler_duplicate_rate"] = config.crawler_duplicate_rate;
    j["duplicate_gap_ms"] = config.duplicate_gap_ms;
    j["mask_sni"] = config.mask_sni;
    j["mask_client_port"] = config.mask_client_port;
    j["quantize_event_seconds"] = config.quantize_event_seconds;
    j["start_epoch_ms"] = config.start_epoch_ms;
    j["time_span_ms"] = config.time_span_ms;
    j["flow_duration_min_ms"] = config.flow_duration_min_ms;
    j["flow_duration_max_ms"] = config.flow_duration_max_ms;
    j["seed"] = config.seed;
    return j.dump(2) + "\n";
}

std::string labels_json(const GroundTruthLabels& labels) {
    json j;
    j["intended_pairs"] = json::array();
    for (const Relation& r : labels.intended_pairs) {
        json pair;
        pair["event_id"] = r.event_id;
        pair["flow_id"] = r.flow_id;
        j["intended_pairs"].push_back(std::move(pair));
    }
    j["dropped_event_ids"] = labels.dropped_event_ids;
    j["dropped_flow_ids"] = labels.dropped_flow_ids;
    j["duplicate_groups"] = json::array();
    for (const DuplicateGroup& group : labels.duplicate_groups) {
        json g;
        g["event_id"] = group.event_id;
        g["flow_ids"] = group.flow_ids;
        j["duplicate_groups"].push_back(std::move(g));
    }
    return j.dump(2) + "\n";
}

GroundTruthLabels parse_labels_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (!j.is_object()) throw InputError("labels file: document is not a JSON object");
    auto require_array = [&](const char* key) -> const json& {
        if (!j.contains(key) || !j[key].is_array())
            throw InputError(std::string("labels file: missing array \"") + key + "\"");
        return j[key];
    };

    GroundTruthLabels labels;
    for (const json& pair : require_array("intended_pairs")) {
        if (!pair.is_object() || !pair.contains("event_id") ||
            !pair["event_id"].is_string() || !pair.contains("flow_id") ||
            !pair["flow_id"].is_string())
            throw InputError("labels file: malformed intended pair");
        labels.intended_pairs.insert(
            {pair["event_id"].get<std::string>(), pair["flow_id"].get<std::string>()});
    }
    for (const json& id : require_array("dropped_event_ids")) {
        if (!id.is_string()) throw InputError("labels file: malformed event id");
        labels.dropped_event_ids.insert(id.get<std::string>());
    }
    for (const json& id : require_array("dropped_flow_ids")) {
        if (!id.is_string()) throw InputError("labels file: malformed flow id");
        labels.dropped_flow_ids.insert(id.get<std::string>());
    }
    for (const json& group : require_array("duplicate_groups")) {
        if (!group.is_object() || !group.contains("event_id") ||
            !group["event_id"].is_string() || !group.contains("flow_ids") ||
            !group["flow_ids"].is_array())
            throw InputError("labels file: malformed duplicate group");
        DuplicateGroup g;
        g.event_id = group["event_id"].get<std::string>();
        for (const json& id : group["flow_ids"]) {
            if (!id.is_string()) throw InputError("labels file: malformed flow id");
            g.flow_ids.insert(id.get<std::string>());
        }
        labels.duplicate_groups.push_back(std::move(g));
    }
    return labels;
}

}  // namespace evflow
