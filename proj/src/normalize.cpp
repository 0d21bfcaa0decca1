// normalize.cpp

#include "evflow/normalize.hpp"

namespace evflow {

namespace {

int64_t floor_div_ns_to_ms(int64_t ns) {
    int64_t q = ns / 1'000'000;
    if (ns % 1'000'000 != 0 && ns < 0) --q;
    return q;
}

std::optional<std::string> canonical_opt_hostname(const std::optional<std::string>& host) {
    if (!host) return std::nullopt;
    return canonical_hostname(*host);
}

}  // namespace

std::string canonical_hostname(std::string_view host) {
    while (!host.empty() && host.back() == '.') host.remove_suffix(1);
    std::string out(host);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

NormalizedEvent normalize_event(const EventRecord& e) {
    NormalizedEvent n;
    n.time_ms = e.time_generated;
    n.server_ip = e.s_ip;
    n.server_port = e.s_port;
    n.client_ip = e.c_ip;
    if (e.c_port && *e.c_port != 0) n.client_port = *e.c_port;
    n.host = canonical_opt_hostname(e.cs_host);
    n.bytes_sent = e.sc_bytes;
    n.bytes_received = e.cs_bytes;
    n.uri_stem = e.cs_uri_stem;
    n.user_agent = e.cs_user_agent;
    n.id = e.source_id;
    return n;
}

NormalizedEvent normalize_event(const NormalizedEvent& e) {
    NormalizedEvent n = e;
    if (n.client_port && *n.client_port == 0) n.client_port.reset();
    n.host = canonical_opt_hostname(n.host);
    return n;
}

NormalizedFlow normalize_flow(const FlowRecord& f) {
    NormalizedFlow n;
    n.start_ms = floor_div_ns_to_ms(f.start_ns);
    n.end_ms = floor_div_ns_to_ms(f.end_ns);
    n.client_ip = f.l3_ipv4_src;
    n.client_port = f.l4_port_src;
    n.server_ip = f.l3_ipv4_dst;
    n.server_port = f.l4_port_dst;
    n.bytes_to_server = f.bytes_a;
    n.bytes_to_client = f.bytes_b;
    n.sni = canonical_opt_hostname(f.http_request_host);
    n.id = f.source_id;
    return n;
}

NormalizedFlow normalize_flow(const NormalizedFlow& f) {
    NormalizedFlow n = f;
    n.sni = canonical_opt_hostname(n.sni);
    return n;
}

FilterResult filter_dataset(std::vector<NormalizedEvent> events,
                            std::vector<NormalizedFlow> flows, Variant variant) {
    const std::set<Feature> features = required_features(variant);
    const bool need_port = features.contains(Feature::ClientPort);
    const bool need_sni = features.contains(Feature::Sni);

    FilterResult result;
    result.events.reserve(events.size());
    result.flows.reserve(flows.size());

    for (NormalizedEvent& e : events) {
        if (need_port && !e.client_port) {
            result.rejections.push_back(
                {FilterRejection::Kind::Event, e.id, Feature::ClientPort});
        } else if (need_sni && !e.host) {
            result.rejections.push_back(
                {FilterRejection::Kind::Event, e.id, Feature::Sni});
        } else {
            result.events.push_back(std::move(e));
        }
    }
    for (NormalizedFlow& f : flows) {
        // Flow records always carry time, addresses, and ports; the SNI is
        // the only feature that can be missing.
        if (need_sni && !f.sni) {
            result.rejections.push_back(
                {FilterRejection::Kind::Flow, f.id, Feature::Sni});
        } else {
            result.flows.push_back(std::move(f));
        }
    }
    return result;
}

}  // namespace evflow
