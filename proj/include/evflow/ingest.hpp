// ingest.hpp
//
// Parsers for the two input formats: web-server logs in W3C extended log
// format (the IIS dialect) and flow record files in CSV or JSON-lines
// framing. Parsing is line-oriented and never aborts on a malformed line;
// each data line yields either one record or one ParseError. The matching
// serializers round-trip every parsed record exactly.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "evflow/model.hpp"

namespace evflow {

enum class ParseReason {
    MissingField,
    BadTimestamp,
    BadIp,
    BadPort,
    BadDirective,
};

std::string_view parse_reason_name(ParseReason r);

struct ParseError {
    size_t line_number = 0;  // 1-based within the stream
    ParseReason reason = ParseReason::MissingField;
    std::string raw_line;

    bool operator==(const ParseError&) const = default;
};

struct EventParseResult {
    std::vector<EventRecord> records;
    std::vector<ParseError> errors;
};

// Parses a W3C extended log stream. Field order follows the most recent
// "#Fields:" directive; a new directive mid-stream replaces the previous
// one (IIS emits a fresh header block on restart). The literal "-" marks
// an absent optional value. "date" and "time" columns are UTC and combine
// into time_generated. Data lines seen before any directive produce
// ParseError(BadDirective). Records without an x-source-id column get a
// synthesized id "e<n>" from their data-line ordinal.
EventParseResult parse_event_log(std::istream& in);

// Serializes events back to W3C extended log format. Emits one directive
// covering the union of populated columns plus x-source-id, so that
// parsing the output reproduces the records exactly.
void write_event_log(std::ostream& out, const std::vector<EventRecord>& events);

enum class FlowFormat { Csv, Jsonl };

std::string_view flow_format_name(FlowFormat f);
std::optional<FlowFormat> parse_flow_format(std::string_view name);

struct FlowParseResult {
    std::vector<FlowRecord> records;
    std::vector<ParseError> errors;
};

// Parses flow records. CSV input needs a header row naming the columns
// START_NSEC, END_NSEC, L3_IPV4_SRC, L3_IPV4_DST, L4_PORT_SRC,
// L4_PORT_DST, BYTES_A, BYTES_B, HTTP_REQUEST_HOST and optionally ID;
// JSON-lines input uses the same keys, one object per line. An empty or
// missing HTTP_REQUEST_HOST means the SNI is absent. Rows with
// START_NSEC > END_NSEC are rejected as BadTimestamp. Records without an
// ID get a synthesized "f<n>" from their data-row ordinal.
FlowParseResult parse_flow_records(std::istream& in, FlowFormat format);

void write_flow_records(std::ostream& out, const std::vector<FlowRecord>& flows,
                        FlowFormat format);

// UTC calendar conversion used by the event parser and serializer.
// Returns epoch milliseconds for "YYYY-MM-DD" + "HH:MM:SS[.fff]".
std::optional<int64_t> parse_w3c_timestamp(std::string_view date, std::string_view time);
std::string format_w3c_date(int64_t epoch_ms);
std::string format_w3c_time(int64_t epoch_ms);

// Minimal CSV helpers shared by the flow and packet-summary framings.
std::vector<std::string> split_csv_row(const std::string& line);
std::string csv_escape(std::string_view field);

}  // namespace evflow
