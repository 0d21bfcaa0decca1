// correlate.cpp

#include "evflow/correlate.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

namespace evflow {

namespace {

void check_window(const CorrelationWindow& window) {
    if (window && !window->valid())
        throw InputError("time window bounds must be non-negative");
}

}  // namespace

RelationSet brute_force_correlate(const std::vector<NormalizedEvent>& events,
                                  const std::vector<NormalizedFlow>& flows,
                                  Variant variant, const CorrelationWindow& window) {
    check_window(window);
    const std::set<Feature> features = required_features(variant);
    const bool check_port = features.contains(Feature::ClientPort);
    const bool check_sni = features.contains(Feature::Sni);

    RelationSet relations;
    for (const NormalizedFlow& flow : flows) {
        for (const NormalizedEvent& event : events) {
            if (flow.server_ip != event.server_ip) continue;
            if (flow.client_ip != event.client_ip) continue;
            if (flow.server_port != event.server_port) continue;
            if (check_port) {
                if (!event.client_port || flow.client_port != *event.client_port)
                    continue;
            }
            if (check_sni) {
                if (!event.host || !flow.sni || *flow.sni != *event.host) continue;
            }
            if (window) {
                if (flow.start_ms - window->earliness_ms > event.time_ms) continue;
                if (flow.end_ms + window->lateness_ms < event.time_ms) continue;
            }
            relations.insert({event.id, flow.id});
        }
    }
    return relations;
}

namespace {

// Exact-match bucket key. Fields a variant does not check stay at their
// neutral value so they never split buckets.
struct MatchKey {
    uint32_t server_ip = 0;
    uint32_t client_ip = 0;
    uint32_t server_port = 0;
    uint32_t client_port = 0;  // port + 1; 0 = not part of the key
    std::string sni;           // empty = not part of the key

    bool operator==(const MatchKey&) const = default;
};

struct MatchKeyHash {
    size_t operator()(const MatchKey& k) const {
        size_t h = std::hash<uint64_t>{}(
            (static_cast<uint64_t>(k.server_ip) << 32) | k.client_ip);
        h ^= std::hash<uint64_t>{}(
                 (static_cast<uint64_t>(k.server_port) << 32) | k.client_port) +
             0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<std::string>{}(k.sni) + 0x9e3779b97f4a7c15ULL + (h << 6) +
             (h >> 2);
        return h;
    }
};

struct FlowEntry {
    int64_t start_ms;
    int64_t end_ms;
    size_t index;
};

struct Bucket {
    std::vector<FlowEntry> flows;  // sorted by start_ms
    std::vector<int64_t> prefix_max_end;
};

}  // namespace

RelationSet correlate(const std::vector<NormalizedEvent>& events,
                      const std::vector<NormalizedFlow>& flows, Variant variant,
                      const CorrelationWindow& window) {
    check_window(window);
    const std::set<Feature> features = required_features(variant);
    const bool key_port = features.contains(Feature::ClientPort);
    const bool key_sni = features.contains(Feature::Sni);

    std::unordered_map<MatchKey, Bucket, MatchKeyHash> buckets;
    buckets.reserve(flows.size());
    for (size_t i = 0; i < flows.size(); ++i) {
        const NormalizedFlow& f = flows[i];
        if (key_sni && !f.sni) continue;  // cannot match any event on SNI
        MatchKey key{f.server_ip.value, f.client_ip.value, f.server_port,
                     key_port ? static_cast<uint32_t>(f.client_port) + 1 : 0,
                     key_sni ? *f.sni : std::string()};
        buckets[std::move(key)].flows.push_back({f.start_ms, f.end_ms, i});
    }
    for (auto& [key, bucket] : buckets) {
        std::sort(bucket.flows.begin(), bucket.flows.end(),
                  [](const FlowEntry& a, const FlowEntry& b) {
                      return a.start_ms < b.start_ms;
                  });
        bucket.prefix_max_end.resize(bucket.flows.size());
        int64_t running = INT64_MIN;
        for (size_t i = 0; i < bucket.flows.size(); ++i) {
            running = std::max(running, bucket.flows[i].end_ms);
            bucket.prefix_max_end[i] = running;
        }
    }

    RelationSet relations;
    for (const NormalizedEvent& e : events) {
        if (key_port && !e.client_port) continue;
        if (key_sni && !e.host) continue;
        MatchKey key{e.server_ip.value, e.client_ip.value, e.server_port,
                     key_port ? static_cast<uint32_t>(*e.client_port) + 1 : 0,
                     key_sni ? *e.host : std::string()};
        auto it = buckets.find(key);
        if (it == buckets.end()) continue;
        const Bucket& bucket = it->second;

        if (!window) {
            for (const FlowEntry& entry : bucket.flows)
                relations.insert({e.id, flows[entry.index].id});
            continue;
        }

        // Candidates must satisfy start <= t + earliness; walk that prefix
        // backwards and stop once even the largest end seen so far is too
        // early to reach t - lateness.
        const int64_t latest_start = e.time_ms + window->earliness_ms;
        const int64_t earliest_end = e.time_ms - window->lateness_ms;
        auto upper = std::upper_bound(
            bucket.flows.begin(), bucket.flows.end(), latest_start,
            [](int64_t value, const FlowEntry& entry) { return value < entry.start_ms; });
        for (auto rit = upper; rit != bucket.flows.begin();) {
            --rit;
            size_t pos = static_cast<size_t>(rit - bucket.flows.begin());
            if (bucket.prefix_max_end[pos] < earliest_end) break;
            if (rit->end_ms >= earliest_end)
                relations.insert({e.id, flows[rit->index].id});
        }
    }
    return relations;
}

ClassifiedReport classify_relations(const RelationSet& relations,
                                    const std::vector<NormalizedEvent>& events,
                                    const std::vector<NormalizedFlow>& flows) {
    std::unordered_map<std::string_view, uint64_t> event_degree;
    std::unordered_map<std::string_view, uint64_t> flow_degree;
    event_degree.reserve(events.size());
    flow_degree.reserve(flows.size());
    for (const NormalizedEvent& e : events) {
        if (!event_degree.emplace(e.id, 0).second)
            throw ConsistencyError("duplicate event id: " + e.id);
    }
    for (const NormalizedFlow& f : flows) {
        if (!flow_degree.emplace(f.id, 0).second)
            throw ConsistencyError("duplicate flow id: " + f.id);
    }

    for (const Relation& r : relations) {
        auto e = event_degree.find(r.event_id);
        if (e == event_degree.end())
            throw ConsistencyError("relation references unknown event id: " + r.event_id);
        auto f = flow_degree.find(r.flow_id);
        if (f == flow_degree.end())
            throw ConsistencyError("relation references unknown flow id: " + r.flow_id);
        ++e->second;
        ++f->second;
    }

    ClassifiedReport report;
    for (const NormalizedEvent& e : events) {
        uint64_t degree = event_degree[e.id];
        RelationClass cls;
        if (degree == 0) {
            cls = RelationClass::Err1;
            ++report.single_events;
        } else if (degree == 1) {
            cls = RelationClass::Ok;
            ++report.correlated_events;
        } else {
            cls = RelationClass::Err2;
            ++report.correlated_events;
            ++report.polygamous_events;
        }
        report.event_classes.emplace(e.id, cls);
    }
    for (const NormalizedFlow& f : flows) {
        uint64_t degree = flow_degree[f.id];
        // Several events on one flow is a correct state for the flow.
        RelationClass cls = degree == 0 ? RelationClass::Err1 : RelationClass::Ok;
        if (degree == 0)
            ++report.single_flows;
        else
            ++report.correlated_flows;
        report.flow_classes.emplace(f.id, cls);
    }
    return report;
}

void write_relations_jsonl(std::ostream& out, const RelationSet& relations) {
    for (const Relation& r : relations) {
        nlohmann::json j;
        j["event_id"] = r.event_id;
        j["flow_id"] = r.flow_id;
        out << j.dump() << '\n';
    }
}

RelationSet parse_relations_jsonl(std::istream& in) {
    RelationSet relations;
    std::string line;
    size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("event_id") ||
            !j.contains("flow_id") || !j["event_id"].is_string() ||
            !j["flow_id"].is_string()) {
            throw InputError("malformed relation on line " + std::to_string(line_number));
        }
        relations.insert({j["event_id"].get<std::string>(),
                          j["flow_id"].get<std::string>()});
    }
    if (in.bad()) throw InputError("I/O failure while reading relations");
    return relations;
}

std::string classification_summary_json(const ClassifiedReport& report) {
    nlohmann::json j;
    j["single_events"] = report.single_events;
    j["single_flows"] = report.single_flows;
    j["correlated_events"] = report.correlated_events;
    j["correlated_flows"] = report.correlated_flows;
    j["polygamous_events"] = report.polygamous_events;
    return j.dump(2) + "\n";
}

}  // namespace evflow
