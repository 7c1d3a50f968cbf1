#pragma once

#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "proxnet/estimate.hpp"
#include "proxnet/time_grid.hpp"
#include "proxnet/types.hpp"

namespace proxnet {

// Grid config JSON: start_date, end_date ("YYYY-MM-DD"), days_of_week
// (0=Sun..6=Sat), daily_start_hour, daily_end_hour, timezone, bin_seconds.
TimeGrid::Params grid_params_from_json(const nlohmann::json& j);
nlohmann::json grid_params_to_json(const TimeGrid::Params& p);
TimeGrid load_grid(const std::string& path_or_empty);  // empty -> study default

// One timeline per roster member, from that member's own events of the
// given source plus peer detections of it.
std::vector<ActivityTimeline> activity_timelines(const std::vector<ScanEvent>& events,
                                                 const TimeGrid& grid,
                                                 const std::vector<Participant>& participants,
                                                 Source source, std::size_t gap_tolerance = 0);

std::string sha256_of_file(const std::string& path);

// Write-then-rename so readers never observe partial output.
void atomic_write(const std::string& path, const std::string& content);

// Provenance document: tool version, input digests, seed, free-form params.
nlohmann::json make_provenance(const std::vector<std::string>& input_paths,
                               const nlohmann::json& params);

}  // namespace proxnet
