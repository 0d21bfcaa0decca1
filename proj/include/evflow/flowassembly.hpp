// flowassembly.hpp
//
// Builds bidirectional flow records from a time-ordered stream of packet
// summaries. A summary is a pre-decoded sketch of one TCP packet: addresses,
// ports, flags, payload size, and the SNI when the packet carried one.
// Records end on an inactive gap, on the active timeout, or — when enabled —
// immediately upon a repeated SYN in one direction, which separates
// back-to-back connections that reuse a 5-tuple.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evflow/ingest.hpp"
#include "evflow/model.hpp"

namespace evflow {

// TCP flag bits carried by a PacketSummary.
enum TcpFlag : uint8_t {
    kTcpSyn = 1,
    kTcpAck = 2,
    kTcpFin = 4,
    kTcpRst = 8,
};

struct PacketSummary {
    int64_t timestamp_ms = 0;  // epoch milliseconds
    Ipv4 src_ip;
    Ipv4 dst_ip;
    uint16_t src_port = 0;
    uint16_t dst_port = 0;
    uint8_t tcp_flags = 0;  // OR of TcpFlag bits
    uint64_t payload_bytes = 0;
    std::optional<std::string> sni;

    bool operator==(const PacketSummary&) const = default;
};

struct AssemblyConfig {
    int64_t active_timeout_ms = 300'000;   // maximum record duration
    int64_t inactive_timeout_ms = 30'000;  // maximum idle gap inside a record
    bool syn_split = true;
};

// Aggregates packets into biflow records.
//
// Packets sharing an unordered endpoint pair {(src ip, src port),
// (dst ip, dst port)} belong to one conversation. Within it, a record is
// closed when
//   (a) the gap to the next packet exceeds inactive_timeout_ms,
//   (b) the next packet falls beyond start + active_timeout_ms (the record
//       keeps only packets at or before that limit), or
//   (c) syn_split is set and a SYN arrives in a direction that already
//       contributed a SYN to the record (a plain SYN-ACK reply never splits).
// Rules (a) and (b) close at the previous packet; so does (c), with the SYN
// opening the successor record. RST carries no special meaning.
//
// The SYN sender becomes the record's client; records opened by a non-SYN
// packet keep the conversation's previous orientation, or treat the packet's
// source as client if none is known. The record's SNI comes from the first
// packet in it that carries one. bytes_a accumulates client-to-server
// payload, bytes_b the reverse.
//
// Returned records are sorted by (start, endpoints) and numbered "f1",
// "f2", ... in that order. Input must be sorted by timestamp and each packet
// valid (ports 1..65535, timestamp >= 0, both timeouts positive), otherwise
// InputError.
std::vector<FlowRecord> assemble_flows(const std::vector<PacketSummary>& packets,
                                       const AssemblyConfig& config);

// "SYN|ACK" <-> flag bits. Formatting an empty set yields ""; parsing
// accepts "" and "-" as empty. Unknown tokens yield nullopt.
std::string tcp_flags_text(uint8_t flags);
std::optional<uint8_t> parse_tcp_flags(std::string_view text);

struct PacketParseResult {
    std::vector<PacketSummary> packets;
    std::vector<ParseError> errors;
};

// Packet-summary files use the same CSV / JSON-lines framing as flow
// records. CSV columns: TIMESTAMP_MS, SRC_IP, DST_IP, SRC_PORT, DST_PORT,
// TCP_FLAGS, PAYLOAD_BYTES, SNI (empty when absent). JSON-lines keys match
// the field names; "tcp_flags" is an array of flag names, "sni" is omitted
// when absent.
PacketParseResult parse_packet_summaries(std::istream& in, FlowFormat format);
void write_packet_summaries(std::ostream& out,
                            const std::vector<PacketSummary>& packets,
                            FlowFormat format);

}  // namespace evflow
