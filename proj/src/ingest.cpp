// ingest.cpp

#include "evflow/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace evflow {

namespace {

using nlohmann::json;

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<uint64_t> parse_u64(std::string_view s) {
    if (!all_digits(s)) return std::nullopt;
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::optional<int64_t> parse_i64(std::string_view s) {
    if (s.empty()) return std::nullopt;
    int64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_whitespace(std::string_view line) {
    std::vector<std::string> tokens;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) tokens.emplace_back(line.substr(start, i - start));
    }
    return tokens;
}

// W3C values are single tokens; spaces inside a value would break the
// column layout, so they are written in the IIS convention ('+').
std::string w3c_token(std::string_view value) {
    std::string out(value);
    for (char& c : out) {
        if (c == ' ' || c == '\t') c = '+';
    }
    if (out.empty()) out = "-";
    return out;
}

constexpr int64_t kMsPerDay = 86'400'000;

int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

std::string_view parse_reason_name(ParseReason r) {
    switch (r) {
        case ParseReason::MissingField: return "missing-field";
        case ParseReason::BadTimestamp: return "bad-timestamp";
        case ParseReason::BadIp: return "bad-ip";
        case ParseReason::BadPort: return "bad-port";
        case ParseReason::BadDirective: return "bad-directive";
    }
    return "missing-field";
}

std::string_view flow_format_name(FlowFormat f) {
    return f == FlowFormat::Csv ? "csv" : "jsonl";
}

std::optional<FlowFormat> parse_flow_format(std::string_view name) {
    if (name == "csv") return FlowFormat::Csv;
    if (name == "jsonl") return FlowFormat::Jsonl;
    return std::nullopt;
}

std::optional<int64_t> parse_w3c_timestamp(std::string_view date, std::string_view time) {
    // date: YYYY-MM-DD
    if (date.size() != 10 || date[4] != '-' || date[7] != '-') return std::nullopt;
    auto year = parse_u64(date.substr(0, 4));
    auto month = parse_u64(date.substr(5, 2));
    auto day = parse_u64(date.substr(8, 2));
    if (!year || !month || !day) return std::nullopt;

    // time: HH:MM:SS with an optional .f/.ff/.fff fraction
    if (time.size() < 8 || time[2] != ':' || time[5] != ':') return std::nullopt;
    auto hour = parse_u64(time.substr(0, 2));
    auto minute = parse_u64(time.substr(3, 2));
    auto second = parse_u64(time.substr(6, 2));
    if (!hour || !minute || !second) return std::nullopt;
    if (*hour > 23 || *minute > 59 || *second > 59) return std::nullopt;
    int64_t millis = 0;
    if (time.size() > 8) {
        if (time[8] != '.' || time.size() > 12) return std::nullopt;
        std::string_view frac = time.substr(9);
        if (!all_digits(frac)) return std::nullopt;
        millis = static_cast<int64_t>(*parse_u64(frac));
        for (size_t i = frac.size(); i < 3; ++i) millis *= 10;
    }

    std::chrono::year_month_day ymd{
        std::chrono::year{static_cast<int>(*year)},
        std::chrono::month{static_cast<unsigned>(*month)},
        std::chrono::day{static_cast<unsigned>(*day)}};
    if (!ymd.ok()) return std::nullopt;
    int64_t days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return days * kMsPerDay +
           static_cast<int64_t>(*hour) * 3'600'000 +
           static_cast<int64_t>(*minute) * 60'000 +
           static_cast<int64_t>(*second) * 1'000 + millis;
}

std::string format_w3c_date(int64_t epoch_ms) {
    int64_t days = floor_div(epoch_ms, kMsPerDay);
    std::chrono::year_month_day ymd{
        std::chrono::sys_days{std::chrono::days{days}}};
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_w3c_time(int64_t epoch_ms) {
    int64_t ms_of_day = epoch_ms - floor_div(epoch_ms, kMsPerDay) * kMsPerDay;
    int64_t ms = ms_of_day % 1000;
    int64_t sec_of_day = ms_of_day / 1000;
    char buf[32];
    if (ms != 0) {
        std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld.%03lld",
                      static_cast<long long>(sec_of_day / 3600),
                      static_cast<long long>((sec_of_day / 60) % 60),
                      static_cast<long long>(sec_of_day % 60),
                      static_cast<long long>(ms));
    } else {
        std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld",
                      static_cast<long long>(sec_of_day / 3600),
                      static_cast<long long>((sec_of_day / 60) % 60),
                      static_cast<long long>(sec_of_day % 60));
    }
    return buf;
}

namespace {

// Field roles recognized in a #Fields: directive. Anything else lands in
// extra_fields verbatim.
enum class EventField {
    Date,
    Time,
    ServerIp,
    ServerPort,
    ClientIp,
    ClientPort,
    Host,
    BytesSent,
    BytesReceived,
    UriStem,
    UserAgent,
    SourceId,
    Other,
};

EventField event_field_role(std::string_view name) {
    if (name == "date") return EventField::Date;
    if (name == "time") return EventField::Time;
    if (name == "s-ip") return EventField::ServerIp;
    if (name == "s-port") return EventField::ServerPort;
    if (name == "c-ip") return EventField::ClientIp;
    if (name == "c-port") return EventField::ClientPort;
    if (name == "cs-host") return EventField::Host;
    if (name == "sc-bytes") return EventField::BytesSent;
    if (name == "cs-bytes") return EventField::BytesReceived;
    if (name == "cs-uri-stem") return EventField::UriStem;
    if (name == "cs-user-agent" || name == "cs(User-Agent)") return EventField::UserAgent;
    if (name == "x-source-id") return EventField::SourceId;
    return EventField::Other;
}

}  // namespace

EventParseResult parse_event_log(std::istream& in) {
    EventParseResult result;
    std::vector<std::string> fields;
    bool have_directive = false;
    std::string line;
    size_t line_number = 0;
    size_t data_ordinal = 0;

    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        if (line[0] == '#') {
            constexpr std::string_view kFieldsPrefix = "#Fields:";
            if (line.rfind(kFieldsPrefix, 0) == 0) {
                fields = split_whitespace(
                    std::string_view(line).substr(kFieldsPrefix.size()));
                have_directive = !fields.empty();
            }
            continue;
        }

        ++data_ordinal;
        auto fail = [&](ParseReason reason) {
            result.errors.push_back({line_number, reason, line});
        };

        if (!have_directive) {
            fail(ParseReason::BadDirective);
            continue;
        }

        std::vector<std::string> tokens = split_whitespace(line);
        if (tokens.size() != fields.size()) {
            fail(ParseReason::MissingField);
            continue;
        }

        std::string_view date_text, time_text;
        EventRecord record;
        bool have_date = false, have_time = false, have_sip = false,
             have_sport = false, have_cip = false;
        bool ok = true;
        ParseReason reason = ParseReason::MissingField;

        for (size_t i = 0; i < fields.size() && ok; ++i) {
            const std::string& token = tokens[i];
            bool absent = token == "-";
            switch (event_field_role(fields[i])) {
                case EventField::Date:
                    if (!absent) { date_text = token; have_date = true; }
                    break;
                case EventField::Time:
                    if (!absent) { time_text = token; have_time = true; }
                    break;
                case EventField::ServerIp: {
                    if (absent) break;
                    auto ip = Ipv4::parse(token);
                    if (!ip) { ok = false; reason = ParseReason::BadIp; break; }
                    record.s_ip = *ip;
                    have_sip = true;
                    break;
                }
                case EventField::ServerPort: {
                    if (absent) break;
                    auto port = parse_port(token);
                    if (!port) { ok = false; reason = ParseReason::BadPort; break; }
                    record.s_port = *port;
                    have_sport = true;
                    break;
                }
                case EventField::ClientIp: {
                    if (absent) break;
                    auto ip = Ipv4::parse(token);
                    if (!ip) { ok = false; reason = ParseReason::BadIp; break; }
                    record.c_ip = *ip;
                    have_cip = true;
                    break;
                }
                case EventField::ClientPort: {
                    // "0" appears in some exporters as a null marker and is
                    // treated the same as "-".
                    if (absent || token == "0") break;
                    auto port = parse_port(token);
                    if (!port) { ok = false; reason = ParseReason::BadPort; break; }
                    record.c_port = *port;
                    break;
                }
                case EventField::Host:
                    if (!absent) record.cs_host = token;
                    break;
                case EventField::BytesSent: {
                    if (absent) break;
                    auto bytes = parse_u64(token);
                    if (!bytes) { ok = false; reason = ParseReason::MissingField; break; }
                    record.sc_bytes = *bytes;
                    break;
                }
                case EventField::BytesReceived: {
                    if (absent) break;
                    auto bytes = parse_u64(token);
                    if (!bytes) { ok = false; reason = ParseReason::MissingField; break; }
                    record.cs_bytes = *bytes;
                    break;
                }
                case EventField::UriStem:
                    if (!absent) record.cs_uri_stem = token;
                    break;
                case EventField::UserAgent:
                    if (!absent) record.cs_user_agent = token;
                    break;
                case EventField::SourceId:
                    if (!absent) record.source_id = token;
                    break;
                case EventField::Other:
                    if (!absent) record.extra_fields[fields[i]] = token;
                    break;
            }
        }

        if (!ok) {
            fail(reason);
            continue;
        }
        if (!have_date || !have_time || !have_sip || !have_sport || !have_cip) {
            fail(ParseReason::MissingField);
            continue;
        }
        auto ts = parse_w3c_timestamp(date_text, time_text);
        if (!ts) {
            fail(ParseReason::BadTimestamp);
            continue;
        }
        record.time_generated = *ts;
        if (record.source_id.empty()) record.source_id = "e" + std::to_string(data_ordinal);
        result.records.push_back(std::move(record));
    }

    if (in.bad()) throw InputError("I/O failure while reading event log");
    return result;
}

void write_event_log(std::ostream& out, const std::vector<EventRecord>& events) {
    bool any_cport = false, any_host = false, any_sc = false, any_cs = false,
         any_uri = false, any_agent = false;
    std::map<std::string, bool> extra_names;
    for (const EventRecord& e : events) {
        any_cport |= e.c_port.has_value();
        any_host |= e.cs_host.has_value();
        any_sc |= e.sc_bytes.has_value();
        any_cs |= e.cs_bytes.has_value();
        any_uri |= e.cs_uri_stem.has_value();
        any_agent |= e.cs_user_agent.has_value();
        for (const auto& [name, value] : e.extra_fields) extra_names[name] = true;
    }

    out << "#Version: 1.0\n";
    out << "#Fields: date time s-ip s-port c-ip";
    if (any_cport) out << " c-port";
    if (any_host) out << " cs-host";
    if (any_sc) out << " sc-bytes";
    if (any_cs) out << " cs-bytes";
    if (any_uri) out << " cs-uri-stem";
    if (any_agent) out << " cs-user-agent";
    for (const auto& [name, used] : extra_names) out << ' ' << name;
    out << " x-source-id\n";

    for (const EventRecord& e : events) {
        out << format_w3c_date(e.time_generated) << ' '
            << format_w3c_time(e.time_generated) << ' ' << e.s_ip.to_string() << ' '
            << e.s_port << ' ' << e.c_ip.to_string();
        if (any_cport)
            out << ' ' << (e.c_port ? std::to_string(*e.c_port) : std::string("-"));
        if (any_host) out << ' ' << (e.cs_host ? w3c_token(*e.cs_host) : std::string("-"));
        if (any_sc)
            out << ' ' << (e.sc_bytes ? std::to_string(*e.sc_bytes) : std::string("-"));
        if (any_cs)
            out << ' ' << (e.cs_bytes ? std::to_string(*e.cs_bytes) : std::string("-"));
        if (any_uri)
            out << ' ' << (e.cs_uri_stem ? w3c_token(*e.cs_uri_stem) : std::string("-"));
        if (any_agent)
            out << ' '
                << (e.cs_user_agent ? w3c_token(*e.cs_user_agent) : std::string("-"));
        for (const auto& [name, used] : extra_names) {
            auto it = e.extra_fields.find(name);
            out << ' ' << (it != e.extra_fields.end() ? w3c_token(it->second)
                                                      : std::string("-"));
        }
        out << ' ' << w3c_token(e.source_id) << '\n';
    }
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

namespace {

struct FlowColumns {
    int start = -1, end = -1, src_ip = -1, dst_ip = -1, src_port = -1,
        dst_port = -1, bytes_a = -1, bytes_b = -1, host = -1, id = -1;

    bool complete() const {
        return start >= 0 && end >= 0 && src_ip >= 0 && dst_ip >= 0 &&
               src_port >= 0 && dst_port >= 0 && bytes_a >= 0 && bytes_b >= 0;
    }
};

FlowColumns map_flow_columns(const std::vector<std::string>& header) {
    FlowColumns cols;
    for (size_t i = 0; i < header.size(); ++i) {
        std::string_view name = trim(header[i]);
        int idx = static_cast<int>(i);
        if (name == "START_NSEC") cols.start = idx;
        else if (name == "END_NSEC") cols.end = idx;
        else if (name == "L3_IPV4_SRC") cols.src_ip = idx;
        else if (name == "L3_IPV4_DST") cols.dst_ip = idx;
        else if (name == "L4_PORT_SRC") cols.src_port = idx;
        else if (name == "L4_PORT_DST") cols.dst_port = idx;
        else if (name == "BYTES_A") cols.bytes_a = idx;
        else if (name == "BYTES_B") cols.bytes_b = idx;
        else if (name == "HTTP_REQUEST_HOST") cols.host = idx;
        else if (name == "ID") cols.id = idx;
    }
    return cols;
}

FlowParseResult parse_flow_csv(std::istream& in) {
    FlowParseResult result;
    std::string line;
    size_t line_number = 0;
    size_t data_ordinal = 0;
    bool have_header = false;
    FlowColumns cols;

    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        if (!have_header) {
            cols = map_flow_columns(split_csv_row(line));
            have_header = true;
            continue;
        }

        ++data_ordinal;
        auto fail = [&](ParseReason reason) {
            result.errors.push_back({line_number, reason, line});
        };
        if (!cols.complete()) {
            fail(ParseReason::MissingField);
            continue;
        }
        std::vector<std::string> row = split_csv_row(line);
        auto cell = [&](int idx) -> std::optional<std::string_view> {
            if (idx < 0 || static_cast<size_t>(idx) >= row.size()) return std::nullopt;
            return std::string_view(row[static_cast<size_t>(idx)]);
        };

        auto start_text = cell(cols.start);
        auto end_text = cell(cols.end);
        auto src_ip_text = cell(cols.src_ip);
        auto dst_ip_text = cell(cols.dst_ip);
        auto src_port_text = cell(cols.src_port);
        auto dst_port_text = cell(cols.dst_port);
        auto bytes_a_text = cell(cols.bytes_a);
        auto bytes_b_text = cell(cols.bytes_b);
        if (!start_text || !end_text || !src_ip_text || !dst_ip_text ||
            !src_port_text || !dst_port_text || !bytes_a_text || !bytes_b_text ||
            start_text->empty() || end_text->empty() || bytes_a_text->empty() ||
            bytes_b_text->empty()) {
            fail(ParseReason::MissingField);
            continue;
        }

        auto start = parse_i64(*start_text);
        auto end = parse_i64(*end_text);
        if (!start || !end) { fail(ParseReason::BadTimestamp); continue; }
        auto src_ip = Ipv4::parse(*src_ip_text);
        auto dst_ip = Ipv4::parse(*dst_ip_text);
        if (!src_ip || !dst_ip) { fail(ParseReason::BadIp); continue; }
        auto src_port = parse_port(*src_port_text);
        auto dst_port = parse_port(*dst_port_text);
        if (!src_port || !dst_port) { fail(ParseReason::BadPort); continue; }
        auto bytes_a = parse_u64(*bytes_a_text);
        auto bytes_b = parse_u64(*bytes_b_text);
        if (!bytes_a || !bytes_b) { fail(ParseReason::MissingField); continue; }
        if (*start > *end) { fail(ParseReason::BadTimestamp); continue; }

        FlowRecord record;
        record.start_ns = *start;
        record.end_ns = *end;
        record.l3_ipv4_src = *src_ip;
        record.l3_ipv4_dst = *dst_ip;
        record.l4_port_src = *src_port;
        record.l4_port_dst = *dst_port;
        record.bytes_a = *bytes_a;
        record.bytes_b = *bytes_b;
        if (auto host = cell(cols.host); host && !host->empty())
            record.http_request_host = std::string(*host);
        if (auto id = cell(cols.id); id && !id->empty())
            record.source_id = std::string(*id);
        else
            record.source_id = "f" + std::to_string(data_ordinal);
        result.records.push_back(std::move(record));
    }

    if (in.bad()) throw InputError("I/O failure while reading flow records");
    return result;
}

FlowParseResult parse_flow_jsonl(std::istream& in) {
    FlowParseResult result;
    std::string line;
    size_t line_number = 0;
    size_t data_ordinal = 0;

    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        ++data_ordinal;
        auto fail = [&](ParseReason reason) {
            result.errors.push_back({line_number, reason, line});
        };

        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            fail(ParseReason::MissingField);
            continue;
        }

        auto get_int = [&](const char* key) -> std::optional<int64_t> {
            auto it = j.find(key);
            if (it == j.end() || !it->is_number_integer()) return std::nullopt;
            return it->get<int64_t>();
        };
        auto get_uint = [&](const char* key) -> std::optional<uint64_t> {
            auto it = j.find(key);
            if (it == j.end()) return std::nullopt;
            if (!it->is_number_integer() && !it->is_number_unsigned()) return std::nullopt;
            if (it->is_number_integer() && it->get<int64_t>() < 0) return std::nullopt;
            return it->get<uint64_t>();
        };
        auto get_string = [&](const char* key) -> std::optional<std::string> {
            auto it = j.find(key);
            if (it == j.end() || !it->is_string()) return std::nullopt;
            return it->get<std::string>();
        };

        auto start = get_int("START_NSEC");
        auto end = get_int("END_NSEC");
        if (!start || !end) { fail(ParseReason::BadTimestamp); continue; }
        auto src_ip_text = get_string("L3_IPV4_SRC");
        auto dst_ip_text = get_string("L3_IPV4_DST");
        if (!src_ip_text || !dst_ip_text) { fail(ParseReason::BadIp); continue; }
        auto src_ip = Ipv4::parse(*src_ip_text);
        auto dst_ip = Ipv4::parse(*dst_ip_text);
        if (!src_ip || !dst_ip) { fail(ParseReason::BadIp); continue; }
        auto src_port_raw = get_uint("L4_PORT_SRC");
        auto dst_port_raw = get_uint("L4_PORT_DST");
        if (!src_port_raw || !dst_port_raw || *src_port_raw < kPortMin ||
            *src_port_raw > kPortMax || *dst_port_raw < kPortMin ||
            *dst_port_raw > kPortMax) {
            fail(ParseReason::BadPort);
            continue;
        }
        auto bytes_a = get_uint("BYTES_A");
        auto bytes_b = get_uint("BYTES_B");
        if (!bytes_a || !bytes_b) { fail(ParseReason::MissingField); continue; }
        if (*start > *end) { fail(ParseReason::BadTimestamp); continue; }

        FlowRecord record;
        record.start_ns = *start;
        record.end_ns = *end;
        record.l3_ipv4_src = *src_ip;
        record.l3_ipv4_dst = *dst_ip;
        record.l4_port_src = static_cast<uint16_t>(*src_port_raw);
        record.l4_port_dst = static_cast<uint16_t>(*dst_port_raw);
        record.bytes_a = *bytes_a;
        record.bytes_b = *bytes_b;
        if (auto host = get_string("HTTP_REQUEST_HOST"); host && !host->empty())
            record.http_request_host = *host;
        if (auto id = get_string("ID"); id && !id->empty())
            record.source_id = *id;
        else
            record.source_id = "f" + std::to_string(data_ordinal);
        result.records.push_back(std::move(record));
    }

    if (in.bad()) throw InputError("I/O failure while reading flow records");
    return result;
}

}  // namespace

FlowParseResult parse_flow_records(std::istream& in, FlowFormat format) {
    return format == FlowFormat::Csv ? parse_flow_csv(in) : parse_flow_jsonl(in);
}

void write_flow_records(std::ostream& out, const std::vector<FlowRecord>& flows,
                        FlowFormat format) {
    if (format == FlowFormat::Csv) {
        out << "START_NSEC,END_NSEC,L3_IPV4_SRC,L3_IPV4_DST,L4_PORT_SRC,"
               "L4_PORT_DST,BYTES_A,BYTES_B,HTTP_REQUEST_HOST,ID\n";
        for (const FlowRecord& f : flows) {
            out << f.start_ns << ',' << f.end_ns << ',' << f.l3_ipv4_src.to_string()
                << ',' << f.l3_ipv4_dst.to_string() << ',' << f.l4_port_src << ','
                << f.l4_port_dst << ',' << f.bytes_a << ',' << f.bytes_b << ','
                << (f.http_request_host ? csv_escape(*f.http_request_host)
                                        : std::string())
                << ',' << csv_escape(f.source_id) << '\n';
        }
        return;
    }
    for (const FlowRecord& f : flows) {
        json j;
        j["START_NSEC"] = f.start_ns;
        j["END_NSEC"] = f.end_ns;
        j["L3_IPV4_SRC"] = f.l3_ipv4_src.to_string();
        j["L3_IPV4_DST"] = f.l3_ipv4_dst.to_string();
        j["L4_PORT_SRC"] = f.l4_port_src;
        j["L4_PORT_DST"] = f.l4_port_dst;
        j["BYTES_A"] = f.bytes_a;
        j["BYTES_B"] = f.bytes_b;
        if (f.http_request_host) j["HTTP_REQUEST_HOST"] = *f.http_request_host;
        j["ID"] = f.source_id;
        out << j.dump() << '\n';
    }
}

}  // namespace evflow
