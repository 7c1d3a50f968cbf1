#include "proxnet/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "proxnet/error.hpp"
#include "proxnet/ingest.hpp"

namespace proxnet {

TimeGrid::Params grid_params_from_json(const nlohmann::json& j) {
  TimeGrid::Params p;
  auto date = [](const std::string& s, int& y, int& m, int& d) {
    if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
      throw ConfigError("bad date: '" + s + "'");
  };
  date(j.at("start_date").get<std::string>(), p.start_year, p.start_month, p.start_day);
  date(j.at("end_date").get<std::string>(), p.end_year, p.end_month, p.end_day);
  for (int d : j.at("days_of_week").get<std::vector<int>>()) p.days_of_week.insert(d);
  p.daily_start_sec = j.at("daily_start_hour").get<int>() * 3600;
  p.daily_end_sec = j.at("daily_end_hour").get<int>() * 3600;
  p.timezone = j.at("timezone").get<std::string>();
  p.bin_seconds = j.value("bin_seconds", 300);
  return p;
}

nlohmann::json grid_params_to_json(const TimeGrid::Params& p) {
  char buf[16];
  nlohmann::json j;
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", p.start_year, p.start_month, p.start_day);
  j["start_date"] = buf;
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", p.end_year, p.end_month, p.end_day);
  j["end_date"] = buf;
  j["days_of_week"] = std::vector<int>(p.days_of_week.begin(), p.days_of_week.end());
  j["daily_start_hour"] = p.daily_start_sec / 3600;
  j["daily_end_hour"] = p.daily_end_sec / 3600;
  j["timezone"] = p.timezone;
  j["bin_seconds"] = p.bin_seconds;
  return j;
}

TimeGrid load_grid(const std::string& path) {
  if (path.empty()) return TimeGrid::study_default();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad grid config " + path + ": " + e.what());
  }
  return TimeGrid(grid_params_from_json(j));
}

std::vector<ActivityTimeline> activity_timelines(const std::vector<ScanEvent>& events,
                                                 const TimeGrid& grid,
                                                 const std::vector<Participant>& participants,
                                                 Source source, std::size_t gap_tolerance) {
  std::vector<ActivityTimeline> out;
  out.reserve(participants.size());
  for (const auto& p : participants) {
    const DeviceId& id = source == Source::app ? p.app_id : p.badge_id;
    std::vector<ScanEvent> own, peer;
    for (const auto& ev : events) {
      if (ev.source != source) continue;
      if (ev.scanner == id) own.push_back(ev);
      else if (ev.observed && *ev.observed == id) peer.push_back(ev);
    }
    out.push_back(compute_activity(id, own, grid, peer, gap_tolerance));
  }
  return out;
}

std::string sha256_of_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open for digest: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write: " + tmp);
    out << content;
    if (!out) throw ConfigError("short write: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ConfigError("cannot move " + tmp + " to " + path);
}

nlohmann::json make_provenance(const std::vector<std::string>& input_paths,
                               const nlohmann::json& params) {
  nlohmann::json j;
  j["tool"] = "proxnet";
  j["version"] = "0.1.0";
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& p : input_paths) inputs[p] = sha256_of_file(p);
  j["inputs"] = inputs;
  j["params"] = params;
  return j;
}

}  // namespace proxnet
