// model.cpp

#include "evflow/model.hpp"

#include <array>
#include <cstdio>

namespace evflow {

std::optional<Ipv4> Ipv4::parse(std::string_view text) {
    std::array<uint32_t, 4> octets{};
    size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        if (i > 0) {
            if (pos >= text.size() || text[pos] != '.') return std::nullopt;
            ++pos;
        }
        size_t digits = 0;
        uint32_t octet = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            octet = octet * 10 + static_cast<uint32_t>(text[pos] - '0');
            ++digits;
            ++pos;
            if (digits > 3) return std::nullopt;
        }
        if (digits == 0 || octet > 255) return std::nullopt;
        octets[static_cast<size_t>(i)] = octet;
    }
    if (pos != text.size()) return std::nullopt;
    return Ipv4{(octets[0] << 24) | (octets[1] << 16) | (octets[2] << 8) | octets[3]};
}

std::string Ipv4::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (value >> 24) & 0xff,
                  (value >> 16) & 0xff, (value >> 8) & 0xff, value & 0xff);
    return buf;
}

std::optional<uint16_t> parse_port(std::string_view text) {
    if (text.empty() || text.size() > 5) return std::nullopt;
    uint32_t port = 0;
    for (char c : text) {
        if (c < '0' || c > '9') return std::nullopt;
        port = port * 10 + static_cast<uint32_t>(c - '0');
    }
    if (port < kPortMin || port > kPortMax) return std::nullopt;
    return static_cast<uint16_t>(port);
}

std::string_view variant_name(Variant v) {
    switch (v) {
        case Variant::AllParams: return "all-params";
        case Variant::NoSni: return "no-sni";
        case Variant::NoPort: return "no-port";
        case Variant::NoPortSni: return "no-port-sni";
    }
    return "all-params";
}

std::optional<Variant> parse_variant(std::string_view name) {
    for (Variant v : kAllVariants) {
        if (name == variant_name(v)) return v;
    }
    return std::nullopt;
}

std::string_view feature_name(Feature f) {
    switch (f) {
        case Feature::Time: return "time";
        case Feature::ServerIp: return "server-ip";
        case Feature::ServerPort: return "server-port";
        case Feature::ClientIp: return "client-ip";
        case Feature::ClientPort: return "client-port";
        case Feature::Sni: return "sni";
    }
    return "time";
}

std::set<Feature> required_features(Variant v) {
    std::set<Feature> features{Feature::Time, Feature::ServerIp,
                               Feature::ServerPort, Feature::ClientIp};
    switch (v) {
        case Variant::AllParams:
            features.insert(Feature::ClientPort);
            features.insert(Feature::Sni);
            break;
        case Variant::NoSni:
            features.insert(Feature::ClientPort);
            break;
        case Variant::NoPort:
            features.insert(Feature::Sni);
            break;
        case Variant::NoPortSni:
            break;
    }
    return features;
}

std::string_view relation_class_name(RelationClass c) {
    switch (c) {
        case RelationClass::Ok: return "OK";
        case RelationClass::Err1: return "ERR1";
        case RelationClass::Err2: return "ERR2";
    }
    return "OK";
}

}  // namespace evflow
