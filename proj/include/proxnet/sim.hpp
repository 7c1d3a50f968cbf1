#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "proxnet/network.hpp"
#include "proxnet/time_grid.hpp"
#include "proxnet/types.hpp"

namespace proxnet {

// Generator settings. Contact follows a two-state Markov chain per dyad;
// scanning is one scheduled attempt per device per bin, thinned by the
// platform's adherence probability.
struct SimConfig {
  std::size_t n_platform_A = 9;
  std::size_t n_platform_B = 12;
  TimeGrid::Params grid;

  double contact_on_rate_min = 0.005, contact_on_rate_max = 0.05;
  double contact_off_rate_min = 0.1, contact_off_rate_max = 0.5;

  double adherence_A = 1.0;  // probability a scheduled scan executes
  double adherence_B = 1.0;
  double q_det = 1.0;   // detection probability given contact
  double q_spur = 0.0;  // spurious detection probability on adjacent dyads
  double adjacency_fraction = 0.0;  // share of dyads marked room-neighbors

  double app_off_window_daily_prob = 0.0;  // chance of a daily inactivity window
  std::size_t app_off_window_bins = 0;     // its length

  double badge_wear_daily_prob = 1.0;
  double badge_adherence = 1.0;
  double badge_q_det = 1.0;

  std::string id_salt = "sim";
  std::uint64_t seed = 1;

  static SimConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;  // ConfigError on out-of-range probabilities
};

struct GroundTruth {
  std::vector<std::string> roster_labels;
  std::size_t n_bins = 0;
  std::vector<std::uint8_t> contact;  // dyad x bin (upper-triangle dyad order)
  // Per-device accounting for calibration checks.
  std::vector<std::size_t> executed_scans;   // app scans actually performed
  std::vector<std::size_t> app_active_bins;  // bins outside off-windows
  std::vector<std::size_t> badge_worn_bins;

  bool contact_at(std::size_t dyad, std::size_t bin) const {
    return contact[dyad * n_bins + bin] != 0;
  }
};

struct SimResult {
  std::vector<Participant> roster;
  std::vector<ScanEvent> app_log;
  std::vector<ScanEvent> badge_log;
  GroundTruth truth;
};

// Deterministic for a fixed config (including seed). Emitted logs are
// valid ingest streams; truth carries the per-bin contact record.
SimResult simulate(const SimConfig& config);

// Per-dyad contact fraction over all bins.
WeightedNetwork truth_network(const GroundTruth& truth);

}  // namespace proxnet
