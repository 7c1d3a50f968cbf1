#include "proxnet/ingest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "nlohmann/json.hpp"
#include "proxnet/error.hpp"

namespace proxnet {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

DeviceId hash_id(const std::string& raw_identifier, const std::string& salt) {
  std::string norm;
  norm.reserve(raw_identifier.size());
  for (char c : raw_identifier) {
    if (c == ':' || c == '-' || c == '.' || std::isspace(static_cast<unsigned char>(c)))
      continue;
    norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (norm.empty()) throw ParseError("empty device identifier");
  return DeviceId{sha256_hex(salt + ":" + norm)};
}

Platform platform_from_string(const std::string& s) {
  if (s == "platform_A" || s == "A" || s == "android") return Platform::platform_A;
  if (s == "platform_B" || s == "B" || s == "ios") return Platform::platform_B;
  if (s == "badge") return Platform::badge;
  throw ParseError("unknown platform: '" + s + "'");
}

std::string platform_to_string(Platform p) {
  switch (p) {
    case Platform::platform_A: return "platform_A";
    case Platform::platform_B: return "platform_B";
    case Platform::badge: return "badge";
  }
  return "?";
}

Source source_from_string(const std::string& s) {
  if (s == "app") return Source::app;
  if (s == "badge") return Source::badge;
  throw ParseError("unknown source: '" + s + "'");
}

std::string source_to_string(Source s) { return s == Source::app ? "app" : "badge"; }

EventKind kind_from_string(const std::string& s) {
  if (s == "scan") return EventKind::scan;
  if (s == "detect") return EventKind::detect;
  if (s == "telemetry") return EventKind::telemetry;
  throw ParseError("unknown kind: '" + s + "'");
}

std::string kind_to_string(EventKind k) {
  switch (k) {
    case EventKind::scan: return "scan";
    case EventKind::detect: return "detect";
    case EventKind::telemetry: return "telemetry";
  }
  return "?";
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

// Builds one event from already-split fields; throws ParseError.
ScanEvent make_event(const std::string& ts, const std::string& src, const std::string& kind,
                     const std::string& scanner, const std::string& observed,
                     Source expected_source) {
  ScanEvent ev;
  ev.timestamp = parse_instant(ts);
  ev.source = source_from_string(src);
  if (ev.source != expected_source)
    throw ParseError("source mismatch: row says '" + src + "'");
  ev.kind = kind_from_string(kind);
  if (scanner.empty()) throw ParseError("empty scanner id");
  ev.scanner = DeviceId{scanner};
  if (ev.kind == EventKind::detect) {
    if (observed.empty()) throw ParseError("detect row without observed id");
    ev.observed = DeviceId{observed};
    if (*ev.observed == ev.scanner) throw ParseError("device observed itself");
  } else if (!observed.empty()) {
    throw ParseError("observed id on non-detect row");
  }
  return ev;
}

}  // namespace

ParseReport parse_scan_log_stream(std::istream& in, Source source, LogFormat format) {
  ParseReport report;
  std::set<ScanEvent> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header_done = format != LogFormat::csv;
  while (std::getline(in, line)) {
    ++line_no;
    if (!header_done) {
      header_done = true;  // first CSV line is the header
      continue;
    }
    if (line.empty() || line == "\r") continue;
    try {
      ScanEvent ev;
      if (format == LogFormat::csv) {
        auto cells = split_row(line);
        if (cells.size() != 5) throw ParseError("expected 5 columns, got " +
                                                std::to_string(cells.size()));
        ev = make_event(cells[0], cells[1], cells[2], cells[3], cells[4], source);
      } else {
        auto j = nlohmann::json::parse(line);
        ev = make_event(j.at("ts").get<std::string>(), j.at("source").get<std::string>(),
                        j.at("kind").get<std::string>(), j.at("scanner").get<std::string>(),
                        j.value("observed", ""), source);
      }
      if (!seen.insert(ev).second) {
        ++report.duplicates;
      } else {
        report.events.push_back(ev);
      }
    } catch (const std::exception& e) {
      report.rejected.push_back({line_no, e.what()});
    }
  }
  std::stable_sort(report.events.begin(), report.events.end(),
                   [](const ScanEvent& a, const ScanEvent& b) { return a.timestamp < b.timestamp; });
  return report;
}

ParseReport parse_scan_log(const std::string& path, Source source, LogFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open log file: " + path);
  return parse_scan_log_stream(in, source, format);
}

void write_scan_log(std::ostream& os, const std::vector<ScanEvent>& events) {
  os << "ts,source,kind,scanner,observed\n";
  for (const auto& ev : events) {
    os << format_instant(ev.timestamp) << ',' << source_to_string(ev.source) << ','
       << kind_to_string(ev.kind) << ',' << ev.scanner.value << ','
       << (ev.observed ? ev.observed->value : "") << "\n";
  }
}

std::vector<Participant> parse_roster(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open roster file: " + path);
  std::vector<Participant> roster;
  std::set<std::string> labels, device_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty() || line == "\r") continue;
    auto cells = split_row(line);
    if (cells.size() != 4)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 4 columns");
    Participant p;
    p.label = cells[0];
    p.app_id = DeviceId{cells[1]};
    p.badge_id = DeviceId{cells[2]};
    p.platform = platform_from_string(cells[3]);
    if (p.label.empty())
      throw ParseError(path + ":" + std::to_string(line_no) + ": empty participant label");
    if (!labels.insert(p.label).second)
      throw ParseError(path + ":" + std::to_string(line_no) + ": duplicate participant '" +
                       p.label + "'");
    for (const auto& id : {p.app_id.value, p.badge_id.value}) {
      if (!id.empty() && !device_ids.insert(id).second)
        throw DataError(path + ":" + std::to_string(line_no) + ": device id '" + id +
                        "' maps to two participants");
    }
    roster.push_back(std::move(p));
  }
  return roster;
}

SurveyParseResult parse_survey(const std::string& path,
                               const std::vector<std::string>& roster,
                               const std::map<std::string, std::string>& name_to_participant) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open survey file: " + path);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < roster.size(); ++i) index[roster[i]] = i;
  auto resolve = [&](const std::string& name) -> std::optional<std::size_t> {
    std::string label = name;
    if (auto it = name_to_participant.find(name); it != name_to_participant.end())
      label = it->second;
    if (auto it = index.find(label); it != index.end()) return it->second;
    return std::nullopt;
  };

  SurveyParseResult result{DirectedSurveyNetwork::empty(roster), 0};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty() || line == "\r") continue;
    auto cells = split_row(line);
    if (cells.empty() || cells.size() > 6)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected respondent plus up to 5 nominees");
    auto resp = resolve(cells[0]);
    if (!resp)
      throw DataError(path + ":" + std::to_string(line_no) + ": respondent '" + cells[0] +
                      "' not in roster");
    std::set<std::size_t> nominees;
    for (std::size_t k = 1; k < cells.size(); ++k) {
      if (cells[k].empty()) continue;
      auto nom = resolve(cells[k]);
      if (!nom) {
        ++result.unresolved_nominees;
        continue;
      }
      if (*nom == *resp)
        throw DataError(path + ":" + std::to_string(line_no) + ": self-nomination");
      nominees.insert(*nom);
    }
    for (std::size_t nom : nominees) result.network.add_nomination(*resp, nom);
  }
  return result;
}

ActivityTimeline compute_activity(const DeviceId& device,
                                  const std::vector<ScanEvent>& own_events,
                                  const TimeGrid& grid,
                                  const std::vector<ScanEvent>& peer_detections,
                                  std::size_t gap_tolerance) {
  ActivityTimeline tl;
  tl.device = device;
  tl.active.assign(grid.total_bins(), false);
  for (const auto& ev : own_events) {
    if (ev.scanner != device) continue;
    if (auto bin = grid.bin_of(ev.timestamp)) tl.active[*bin] = true;
  }
  for (const auto& ev : peer_detections) {
    if (ev.kind != EventKind::detect || !ev.observed || *ev.observed != device) continue;
    if (auto bin = grid.bin_of(ev.timestamp)) tl.active[*bin] = true;
  }
  if (gap_tolerance > 0) {
    std::vector<bool> bridged = tl.active;
    std::size_t last_active = tl.active.size();  // sentinel: none yet
    for (std::size_t b = 0; b < tl.active.size(); ++b) {
      if (!tl.active[b]) continue;
      if (last_active < b && b - last_active - 1 <= gap_tolerance &&
          b / grid.daily_bins() == last_active / grid.daily_bins()) {
        for (std::size_t k = last_active + 1; k < b; ++k) bridged[k] = true;
      }
      last_active = b;
    }
    tl.active = std::move(bridged);
  }
  return tl;
}

}  // namespace proxnet
