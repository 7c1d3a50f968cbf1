#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "proxnet/network.hpp"
#include "proxnet/time_grid.hpp"
#include "proxnet/types.hpp"

namespace proxnet {

// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& data);

// Salted one-way digest of a raw identifier (e.g. a MAC address).
// Separators are stripped and hex case folded before hashing, so
// "AA:BB:CC:DD:EE:FF" and "aabbccddeeff" map to the same DeviceId.
// ParseError on empty input.
DeviceId hash_id(const std::string& raw_identifier, const std::string& salt);

struct RejectedRow {
  std::size_t line_number;  // 1-based, header included
  std::string reason;
};

struct ParseReport {
  std::vector<ScanEvent> events;  // sorted by timestamp
  std::vector<RejectedRow> rejected;
  std::size_t duplicates = 0;  // identical rows collapsed
};

enum class LogFormat { csv, json_lines };

// Scan log columns: ts,source,kind,scanner,observed (ISO-8601 UTC ts).
// Malformed rows are reported with their line number, never dropped
// silently. ParseError only for an unreadable file.
ParseReport parse_scan_log(const std::string& path, Source source,
                           LogFormat format = LogFormat::csv);
ParseReport parse_scan_log_stream(std::istream& in, Source source, LogFormat format);

void write_scan_log(std::ostream& os, const std::vector<ScanEvent>& events);

// Roster CSV: participant,app_id,badge_id,platform.
std::vector<Participant> parse_roster(const std::string& path);

struct SurveyParseResult {
  DirectedSurveyNetwork network;
  std::size_t unresolved_nominees = 0;  // names missing from the resolution table
};

// Survey CSV: respondent,nominee1..nominee5 (blank cells allowed).
// name_to_participant resolves free-text names to roster labels; the
// respondent column is resolved through the same table. Unresolvable
// nominees are counted, not turned into edges. DataError for an unknown
// respondent or more than five nominees.
SurveyParseResult parse_survey(const std::string& path,
                               const std::vector<std::string>& roster,
                               const std::map<std::string, std::string>& name_to_participant);

// A bin is active iff it holds at least one own scan, one telemetry
// heartbeat, or one event in which a peer observed this device.
// gap_tolerance > 0 additionally activates bins lying between two
// evidence bins at most gap_tolerance bins apart.
ActivityTimeline compute_activity(const DeviceId& device,
                                  const std::vector<ScanEvent>& own_events,
                                  const TimeGrid& grid,
                                  const std::vector<ScanEvent>& peer_detections,
                                  std::size_t gap_tolerance = 0);

}  // namespace proxnet
