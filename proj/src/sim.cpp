#include "proxnet/sim.hpp"

#include <algorithm>
#include <random>

#include "proxnet/error.hpp"
#include "proxnet/ingest.hpp"
#include "proxnet/pipeline.hpp"

namespace proxnet {

namespace {

void check_prob(double p, const char* name) {
  if (p < 0.0 || p > 1.0) throw ConfigError(std::string(name) + " must lie in [0,1]");
}

}  // namespace

SimConfig SimConfig::from_json(const nlohmann::json& j) {
  SimConfig c;
  c.n_platform_A = j.value("n_platform_A", c.n_platform_A);
  c.n_platform_B = j.value("n_platform_B", c.n_platform_B);
  c.grid = grid_params_from_json(j.at("grid"));
  c.contact_on_rate_min = j.value("contact_on_rate_min", c.contact_on_rate_min);
  c.contact_on_rate_max = j.value("contact_on_rate_max", c.contact_on_rate_max);
  c.contact_off_rate_min = j.value("contact_off_rate_min", c.contact_off_rate_min);
  c.contact_off_rate_max = j.value("contact_off_rate_max", c.contact_off_rate_max);
  c.adherence_A = j.value("adherence_A", c.adherence_A);
  c.adherence_B = j.value("adherence_B", c.adherence_B);
  c.q_det = j.value("q_det", c.q_det);
  c.q_spur = j.value("q_spur", c.q_spur);
  c.adjacency_fraction = j.value("adjacency_fraction", c.adjacency_fraction);
  c.app_off_window_daily_prob = j.value("app_off_window_daily_prob", 0.0);
  c.app_off_window_bins = j.value("app_off_window_bins", std::size_t{0});
  c.badge_wear_daily_prob = j.value("badge_wear_daily_prob", c.badge_wear_daily_prob);
  c.badge_adherence = j.value("badge_adherence", c.badge_adherence);
  c.badge_q_det = j.value("badge_q_det", c.badge_q_det);
  c.id_salt = j.value("id_salt", c.id_salt);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

nlohmann::json SimConfig::to_json() const {
  nlohmann::json j;
  j["n_platform_A"] = n_platform_A;
  j["n_platform_B"] = n_platform_B;
  j["grid"] = grid_params_to_json(grid);
  j["contact_on_rate_min"] = contact_on_rate_min;
  j["contact_on_rate_max"] = contact_on_rate_max;
  j["contact_off_rate_min"] = contact_off_rate_min;
  j["contact_off_rate_max"] = contact_off_rate_max;
  j["adherence_A"] = adherence_A;
  j["adherence_B"] = adherence_B;
  j["q_det"] = q_det;
  j["q_spur"] = q_spur;
  j["adjacency_fraction"] = adjacency_fraction;
  j["app_off_window_daily_prob"] = app_off_window_daily_prob;
  j["app_off_window_bins"] = app_off_window_bins;
  j["badge_wear_daily_prob"] = badge_wear_daily_prob;
  j["badge_adherence"] = badge_adherence;
  j["badge_q_det"] = badge_q_det;
  j["id_salt"] = id_salt;
  j["seed"] = seed;
  return j;
}

void SimConfig::validate() const {
  if (n_platform_A + n_platform_B < 2) throw ConfigError("need at least 2 participants");
  check_prob(adherence_A, "adherence_A");
  check_prob(adherence_B, "adherence_B");
  check_prob(q_det, "q_det");
  check_prob(q_spur, "q_spur");
  check_prob(adjacency_fraction, "adjacency_fraction");
  check_prob(app_off_window_daily_prob, "app_off_window_daily_prob");
  check_prob(badge_wear_daily_prob, "badge_wear_daily_prob");
  check_prob(badge_adherence, "badge_adherence");
  check_prob(badge_q_det, "badge_q_det");
  for (double r : {contact_on_rate_min, contact_on_rate_max, contact_off_rate_min,
                   contact_off_rate_max}) {
    check_prob(r, "contact rate");
  }
  if (contact_on_rate_min > contact_on_rate_max || contact_off_rate_min > contact_off_rate_max)
    throw ConfigError("contact rate range inverted");
}

SimResult simulate(const SimConfig& config) {
  config.validate();
  const TimeGrid grid(config.grid);
  const std::size_t n = config.n_platform_A + config.n_platform_B;
  const std::size_t n_bins = grid.total_bins();
  const std::size_t daily = grid.daily_bins();
  const std::size_t n_days = n_bins / daily;
  const std::size_t n_dyads = n * (n - 1) / 2;
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SimResult res;
  for (std::size_t i = 0; i < n; ++i) {
    Participant p;
    char label[16];
    std::snprintf(label, sizeof(label), "p%02u", static_cast<unsigned>(i + 1));
    p.label = label;
    char mac[32];
    std::snprintf(mac, sizeof(mac), "02:00:00:00:00:%02x", static_cast<unsigned>(i));
    p.app_id = hash_id(mac, config.id_salt);
    p.badge_id = hash_id(std::string("badge-") + label, config.id_salt);
    p.platform = i < config.n_platform_A ? Platform::platform_A : Platform::platform_B;
    res.roster.push_back(std::move(p));
  }

  auto dyad_index = [n](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  };

  // Per-dyad contact chains and room adjacency.
  std::vector<double> on_rate(n_dyads), off_rate(n_dyads);
  std::vector<std::uint8_t> in_contact(n_dyads), adjacent(n_dyads, 0);
  for (std::size_t d = 0; d < n_dyads; ++d) {
    on_rate[d] = config.contact_on_rate_min +
                 unit(rng) * (config.contact_on_rate_max - config.contact_on_rate_min);
    off_rate[d] = config.contact_off_rate_min +
                  unit(rng) * (config.contact_off_rate_max - config.contact_off_rate_min);
    const double p_on = on_rate[d] / (on_rate[d] + off_rate[d]);
    in_contact[d] = unit(rng) < p_on;
    adjacent[d] = unit(rng) < config.adjacency_fraction;
  }

  // Daily device states: app off-windows and badge wear.
  std::vector<std::uint8_t> app_off(n * n_bins, 0);  // device x bin
  std::vector<std::uint8_t> badge_worn_day(n * n_days, 0);
  for (std::size_t day = 0; day < n_days; ++day) {
    for (std::size_t i = 0; i < n; ++i) {
      if (config.app_off_window_bins > 0 && unit(rng) < config.app_off_window_daily_prob) {
        std::uniform_int_distribution<std::size_t> start(0, daily - 1);
        const std::size_t s = start(rng);
        for (std::size_t k = s; k < std::min(daily, s + config.app_off_window_bins); ++k)
          app_off[i * n_bins + day * daily + k] = 1;
      }
      badge_worn_day[i * n_days + day] = unit(rng) < config.badge_wear_daily_prob;
    }
  }

  GroundTruth& truth = res.truth;
  for (const auto& p : res.roster) truth.roster_labels.push_back(p.label);
  truth.n_bins = n_bins;
  truth.contact.assign(n_dyads * n_bins, 0);
  truth.executed_scans.assign(n, 0);
  truth.app_active_bins.assign(n, 0);
  truth.badge_worn_bins.assign(n, 0);

  for (std::size_t bin = 0; bin < n_bins; ++bin) {
    const std::size_t day = bin / daily;
    const Instant t0 = grid.bin_interval(bin).first;
    // Evolve contact chains.
    for (std::size_t d = 0; d < n_dyads; ++d) {
      if (in_contact[d]) {
        if (unit(rng) < off_rate[d]) in_contact[d] = 0;
      } else {
        if (unit(rng) < on_rate[d]) in_contact[d] = 1;
      }
      truth.contact[d * n_bins + bin] = in_contact[d];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const bool app_active = !app_off[i * n_bins + bin];
      if (app_active) {
        ++truth.app_active_bins[i];
        res.app_log.push_back({t0 + 1, Source::app, EventKind::telemetry,
                               res.roster[i].app_id, std::nullopt});
        const double adherence = res.roster[i].platform == Platform::platform_A
                                     ? config.adherence_A
                                     : config.adherence_B;
        if (unit(rng) < adherence) {
          ++truth.executed_scans[i];
          res.app_log.push_back({t0 + 2, Source::app, EventKind::scan, res.roster[i].app_id,
                                 std::nullopt});
          for (std::size_t j = 0; j < n; ++j) {
            if (j == i || app_off[j * n_bins + bin]) continue;
            const std::size_t d = dyad_index(i, j);
            const bool hit = in_contact[d] ? unit(rng) < config.q_det
                                           : (adjacent[d] && unit(rng) < config.q_spur);
            if (hit)
              res.app_log.push_back({t0 + 3, Source::app, EventKind::detect,
                                     res.roster[i].app_id, res.roster[j].app_id});
          }
        }
      }
      const bool worn = badge_worn_day[i * n_days + day];
      if (worn) {
        ++truth.badge_worn_bins[i];
        if (unit(rng) < config.badge_adherence) {
          for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !badge_worn_day[j * n_days + day]) continue;
            const std::size_t d = dyad_index(i, j);
            if (in_contact[d] && unit(rng) < config.badge_q_det)
              res.badge_log.push_back({t0 + 3, Source::badge, EventKind::detect,
                                       res.roster[i].badge_id, res.roster[j].badge_id});
          }
        }
      }
    }
  }
  return res;
}

WeightedNetwork truth_network(const GroundTruth& truth) {
  const std::size_t n = truth.roster_labels.size();
  std::vector<double> w(n * n, 0.0);
  std::size_t d = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++d) {
      std::size_t hits = 0;
      for (std::size_t bin = 0; bin < truth.n_bins; ++bin) hits += truth.contact_at(d, bin);
      const double frac =
          truth.n_bins == 0 ? 0.0 : double(hits) / double(truth.n_bins);
      w[i * n + j] = w[j * n + i] = frac;
    }
  }
  return WeightedNetwork(truth.roster_labels, std::move(w));
}

}  // namespace proxnet
