// flowassembly.cpp

#include "evflow/flowassembly.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>

#include <json.hpp>

namespace evflow {

namespace {

struct OpenRecord {
    int64_t start_ms = 0;
    int64_t end_ms = 0;
    Ipv4 client_ip;
    uint16_t client_port = 0;
    Ipv4 server_ip;
    uint16_t server_port = 0;
    uint64_t bytes_to_server = 0;
    uint64_t bytes_to_client = 0;
    std::optional<std::string> sni;
    bool syn_from_client = false;
    bool syn_from_server = false;
};

struct Conversation {
    std::optional<OpenRecord> open;
    // Orientation survives record boundaries so that a timeout in the middle
    // of a connection does not flip client and server.
    bool oriented = false;
    Ipv4 sticky_client_ip;
    uint16_t sticky_client_port = 0;
};

using EndpointKey = std::tuple<uint32_t, uint16_t, uint32_t, uint16_t>;

EndpointKey conversation_key(const PacketSummary& p) {
    auto a = std::make_pair(p.src_ip.value, p.src_port);
    auto b = std::make_pair(p.dst_ip.value, p.dst_port);
    if (b < a) std::swap(a, b);
    return {a.first, a.second, b.first, b.second};
}

FlowRecord close_record(const OpenRecord& r) {
    FlowRecord flow;
    flow.start_ns = r.start_ms * 1'000'000;
    flow.end_ns = r.end_ms * 1'000'000;
    flow.l3_ipv4_src = r.client_ip;
    flow.l3_ipv4_dst = r.server_ip;
    flow.l4_port_src = r.client_port;
    flow.l4_port_dst = r.server_port;
    flow.bytes_a = r.bytes_to_server;
    flow.bytes_b = r.bytes_to_client;
    flow.http_request_host = r.sni;
    return flow;
}

template <typename T>
std::optional<T> parse_unsigned(std::string_view text) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::optional<int64_t> parse_timestamp_ms(std::string_view text) {
    auto v = parse_unsigned<int64_t>(text);
    if (!v || *v < 0) return std::nullopt;
    return v;
}

constexpr std::pair<uint8_t, std::string_view> kFlagNames[] = {
    {kTcpSyn, "SYN"},
    {kTcpAck, "ACK"},
    {kTcpFin, "FIN"},
    {kTcpRst, "RST"},
};

const char* const kPacketCsvHeader =
    "TIMESTAMP_MS,SRC_IP,DST_IP,SRC_PORT,DST_PORT,TCP_FLAGS,PAYLOAD_BYTES,SNI";

}  // namespace

std::vector<FlowRecord> assemble_flows(const std::vector<PacketSummary>& packets,
                                       const AssemblyConfig& config) {
    if (config.active_timeout_ms <= 0)
        throw InputError("active timeout must be positive");
    if (config.inactive_timeout_ms <= 0)
        throw InputError("inactive timeout must be positive");

    std::map<EndpointKey, Conversation> conversations;
    std::vector<FlowRecord> out;
    int64_t previous_ts = -1;

    for (const PacketSummary& p : packets) {
        if (p.timestamp_ms < 0) throw InputError("packet timestamp is negative");
        if (p.timestamp_ms < previous_ts)
            throw InputError("packet stream is not sorted by timestamp");
        previous_ts = p.timestamp_ms;
        if (p.src_port < kPortMin || p.dst_port < kPortMin)
            throw InputError("packet port outside 1..65535");

        Conversation& conv = conversations[conversation_key(p)];

        if (conv.open) {
            OpenRecord& r = *conv.open;
            bool from_client =
                p.src_ip == r.client_ip && p.src_port == r.client_port;
            bool close = false;
            if (p.timestamp_ms - r.end_ms > config.inactive_timeout_ms) {
                close = true;
            } else if (p.timestamp_ms > r.start_ms + config.active_timeout_ms) {
                close = true;
            } else if (config.syn_split && (p.tcp_flags & kTcpSyn) &&
                       (from_client ? r.syn_from_client : r.syn_from_server)) {
                close = true;
            }
            if (close) {
                out.push_back(close_record(r));
                conv.open.reset();
            }
        }

        if (!conv.open) {
            OpenRecord r;
            r.start_ms = r.end_ms = p.timestamp_ms;
            if (p.tcp_flags & kTcpSyn) {
                r.client_ip = p.src_ip;
                r.client_port = p.src_port;
            } else if (conv.oriented) {
                r.client_ip = conv.sticky_client_ip;
                r.client_port = conv.sticky_client_port;
            } else {
                r.client_ip = p.src_ip;
                r.client_port = p.src_port;
            }
            bool src_is_client =
                p.src_ip == r.client_ip && p.src_port == r.client_port;
            r.server_ip = src_is_client ? p.dst_ip : p.src_ip;
            r.server_port = src_is_client ? p.dst_port : p.src_port;
            conv.oriented = true;
            conv.sticky_client_ip = r.client_ip;
            conv.sticky_client_port = r.client_port;
            conv.open = r;
        }

        OpenRecord& r = *conv.open;
        bool from_client = p.src_ip == r.client_ip && p.src_port == r.client_port;
        r.end_ms = p.timestamp_ms;
        if (from_client)
            r.bytes_to_server += p.payload_bytes;
        else
            r.bytes_to_client += p.payload_bytes;
        if (p.tcp_flags & kTcpSyn) {
            if (from_client)
                r.syn_from_client = true;
            else
                r.syn_from_server = true;
        }
        if (p.sni && !r.sni) r.sni = p.sni;
    }

    for (auto& [key, conv] : conversations)
        if (conv.open) out.push_back(close_record(*conv.open));

    std::sort(out.begin(), out.end(), [](const FlowRecord& a, const FlowRecord& b) {
        return std::tie(a.start_ns, a.l3_ipv4_src.value, a.l4_port_src,
                        a.l3_ipv4_dst.value, a.l4_port_dst, a.end_ns) <
               std::tie(b.start_ns, b.l3_ipv4_src.value, b.l4_port_src,
                        b.l3_ipv4_dst.value, b.l4_port_dst, b.end_ns);
    });
    for (size_t i = 0; i < out.size(); ++i)
        out[i].source_id = "f" + std::to_string(i + 1);
    return out;
}

std::string tcp_flags_text(uint8_t flags) {
    std::string out;
    for (auto [bit, name] : kFlagNames) {
        if (!(flags & bit)) continue;
        if (!out.empty()) out += '|';
        out += name;
    }
    return out;
}

std::optional<uint8_t> parse_tcp_flags(std::string_view text) {
    if (text.empty() || text == "-") return uint8_t{0};
    uint8_t flags = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t bar = text.find('|', pos);
        std::string_view token = text.substr(
            pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos);
        bool known = false;
        for (auto [bit, name] : kFlagNames) {
            if (token == name) {
                flags |= bit;
                known = true;
                break;
            }
        }
        if (!known) return std::nullopt;
        if (bar == std::string_view::npos) break;
        pos = bar + 1;
    }
    return flags;
}

namespace {

void parse_packet_csv(std::istream& in, PacketParseResult& result) {
    std::string line;
    size_t line_number = 0;
    bool have_header = false;
    std::map<std::string, size_t> columns;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_row(line);
        if (!have_header) {
            for (size_t i = 0; i < fields.size(); ++i) columns[fields[i]] = i;
            have_header = true;
            continue;
        }
        auto field = [&](const char* name) -> const std::string* {
            auto it = columns.find(name);
            if (it == columns.end() || it->second >= fields.size()) return nullptr;
            return &fields[it->second];
        };
        auto fail = [&](ParseReason reason) {
            result.errors.push_back({line_number, reason, line});
        };

        const std::string* ts = field("TIMESTAMP_MS");
        const std::string* src_ip = field("SRC_IP");
        const std::string* dst_ip = field("DST_IP");
        const std::string* src_port = field("SRC_PORT");
        const std::string* dst_port = field("DST_PORT");
        const std::string* flags = field("TCP_FLAGS");
        const std::string* payload = field("PAYLOAD_BYTES");
        const std::string* sni = field("SNI");
        if (!ts || !src_ip || !dst_ip || !src_port || !dst_port || !flags ||
            !payload) {
            fail(ParseReason::MissingField);
            continue;
        }

        PacketSummary p;
        if (auto v = parse_timestamp_ms(*ts)) {
            p.timestamp_ms = *v;
        } else {
            fail(ParseReason::BadTimestamp);
            continue;
        }
        if (auto v = Ipv4::parse(*src_ip)) {
            p.src_ip = *v;
        } else {
            fail(ParseReason::BadIp);
            continue;
        }
        if (auto v = Ipv4::parse(*dst_ip)) {
            p.dst_ip = *v;
        } else {
            fail(ParseReason::BadIp);
            continue;
        }
        if (auto v = parse_port(*src_port)) {
            p.src_port = *v;
        } else {
            fail(ParseReason::BadPort);
            continue;
        }
        if (auto v = parse_port(*dst_port)) {
            p.dst_port = *v;
        } else {
            fail(ParseReason::BadPort);
            continue;
        }
        if (auto v = parse_tcp_flags(*flags)) {
            p.tcp_flags = *v;
        } else {
            fail(ParseReason::MissingField);
            continue;
        }
        if (auto v = parse_unsigned<uint64_t>(*payload)) {
            p.payload_bytes = *v;
        } else {
            fail(ParseReason::MissingField);
            continue;
        }
        if (sni && !sni->empty()) p.sni = *sni;
        result.packets.push_back(std::move(p));
    }
    if (in.bad()) throw InputError("I/O failure while reading packet summaries");
}

void parse_packet_jsonl(std::istream& in, PacketParseResult& result) {
    std::string line;
    size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fail = [&](ParseReason reason) {
            result.errors.push_back({line_number, reason, line});
        };
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (!j.is_object()) {
            fail(ParseReason::MissingField);
            continue;
        }

        PacketSummary p;
        if (!j.contains("timestamp_ms") || !j["timestamp_ms"].is_number_integer()) {
            fail(ParseReason::MissingField);
            continue;
        }
        p.timestamp_ms = j["timestamp_ms"].get<int64_t>();
        if (p.timestamp_ms < 0) {
            fail(ParseReason::BadTimestamp);
            continue;
        }

        auto read_ip = [&](const char* key, Ipv4& dst, ParseReason& why) {
            if (!j.contains(key) || !j[key].is_string()) {
                why = ParseReason::MissingField;
                return false;
            }
            auto v = Ipv4::parse(j[key].get<std::string>());
            if (!v) {
                why = ParseReason::BadIp;
                return false;
            }
            dst = *v;
            return true;
        };
        auto read_port = [&](const char* key, uint16_t& dst, ParseReason& why) {
            if (!j.contains(key) || !j[key].is_number_integer()) {
                why = ParseReason::MissingField;
                return false;
            }
            int64_t v = j[key].get<int64_t>();
            if (v < kPortMin || v > static_cast<int64_t>(kPortMax)) {
                why = ParseReason::BadPort;
                return false;
            }
            dst = static_cast<uint16_t>(v);
            return true;
        };

        ParseReason why = ParseReason::MissingField;
        if (!read_ip("src_ip", p.src_ip, why) || !read_ip("dst_ip", p.dst_ip, why)) {
            fail(why);
            continue;
        }
        if (!read_port("src_port", p.src_port, why) ||
            !read_port("dst_port", p.dst_port, why)) {
            fail(why);
            continue;
        }
        if (!j.contains("tcp_flags") || !j["tcp_flags"].is_array()) {
            fail(ParseReason::MissingField);
            continue;
        }
        bool bad_flag = false;
        for (const auto& item : j["tcp_flags"]) {
            if (!item.is_string()) {
                bad_flag = true;
                break;
            }
            auto v = parse_tcp_flags(item.get<std::string>());
            if (!v) {
                bad_flag = true;
                break;
            }
            p.tcp_flags |= *v;
        }
        if (bad_flag) {
            fail(ParseReason::MissingField);
            continue;
        }
        if (!j.contains("payload_bytes") ||
            !j["payload_bytes"].is_number_unsigned()) {
            fail(ParseReason::MissingField);
            continue;
        }
        p.payload_bytes = j["payload_bytes"].get<uint64_t>();
        if (j.contains("sni") && !j["sni"].is_null()) {
            if (!j["sni"].is_string()) {
                fail(ParseReason::MissingField);
                continue;
            }
            std::string sni = j["sni"].get<std::string>();
            if (!sni.empty()) p.sni = std::move(sni);
        }
        result.packets.push_back(std::move(p));
    }
    if (in.bad()) throw InputError("I/O failure while reading packet summaries");
}

}  // namespace

PacketParseResult parse_packet_summaries(std::istream& in, FlowFormat format) {
    PacketParseResult result;
    if (format == FlowFormat::Csv)
        parse_packet_csv(in, result);
    else
        parse_packet_jsonl(in, result);
    return result;
}

void write_packet_summaries(std::ostream& out,
                            const std::vector<PacketSummary>& packets,
                            FlowFormat format) {
    if (format == FlowFormat::Csv) {
        out << kPacketCsvHeader << '\n';
        for (const PacketSummary& p : packets) {
            out << p.timestamp_ms << ',' << p.src_ip.to_string() << ','
                << p.dst_ip.to_string() << ',' << p.src_port << ',' << p.dst_port
                << ',' << tcp_flags_text(p.tcp_flags) << ',' << p.payload_bytes
                << ',' << csv_escape(p.sni ? *p.sni : "") << '\n';
        }
        return;
    }
    for (const PacketSummary& p : packets) {
        nlohmann::json j;
        j["timestamp_ms"] = p.timestamp_ms;
        j["src_ip"] = p.src_ip.to_string();
        j["dst_ip"] = p.dst_ip.to_string();
        j["src_port"] = p.src_port;
        j["dst_port"] = p.dst_port;
        auto flags = nlohmann::json::array();
        for (auto [bit, name] : kFlagNames)
            if (p.tcp_flags & bit) flags.push_back(std::string(name));
        j["tcp_flags"] = std::move(flags);
        j["payload_bytes"] = p.payload_bytes;
        if (p.sni) j["sni"] = *p.sni;
        out << j.dump() << '\n';
    }
}

}  // namespace evflow
