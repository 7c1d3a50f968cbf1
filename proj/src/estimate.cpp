#include "proxnet/estimate.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "proxnet/error.hpp"

namespace proxnet {

WeightMode weight_mode_from_string(const std::string& s) {
  if (s == "scan_normalized") return WeightMode::scan_normalized;
  if (s == "time_fraction") return WeightMode::time_fraction;
  throw ConfigError("unknown weight mode: '" + s + "'");
}

Universe universe_from_string(const std::string& s) {
  if (s == "all" || s == "all_office_bins") return Universe::all_office_bins;
  if (s == "coactive" || s == "coactive_bins") return Universe::coactive_bins;
  if (s == "sampled" || s == "sampled_bins") return Universe::sampled_bins;
  throw ConfigError("unknown universe: '" + s + "'");
}

DetectionGrid::DetectionGrid(Source source, std::vector<std::string> roster, std::size_t n_bins)
    : source_(source), roster_(std::move(roster)), n_bins_(n_bins),
      scan_counts_(roster_.size() * n_bins, 0),
      detected_(n_dyads() * n_bins, 0) {}

std::size_t DetectionGrid::dyad_index(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const std::size_t n = size();
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

bool DetectionGrid::detected(std::size_t i, std::size_t j, std::size_t bin) const {
  return detected_[dyad_index(i, j) * n_bins_ + bin] != 0;
}

std::uint32_t DetectionGrid::directed_count(std::size_t i, std::size_t j,
                                            std::size_t bin) const {
  auto it = directed_.find({i * size() + j, bin});
  return it == directed_.end() ? 0u : it->second;
}

std::size_t DetectionGrid::total_scans(std::size_t device) const {
  std::size_t total = 0;
  for (std::size_t b = 0; b < n_bins_; ++b) total += scans(device, b);
  return total;
}

void DetectionGrid::record_scan(std::size_t device, std::size_t bin) {
  ++scan_counts_[device * n_bins_ + bin];
}

void DetectionGrid::record_detection(std::size_t scanner, std::size_t observed,
                                     std::size_t bin) {
  if (scanner == observed) throw DataError("device detected itself");
  ++directed_[{scanner * size() + observed, bin}];
  detected_[dyad_index(scanner, observed) * n_bins_ + bin] = 1;
}

DetectionGrid build_detection_grid(const std::vector<ScanEvent>& events, const TimeGrid& grid,
                                   const std::vector<Participant>& participants,
                                   Source source) {
  std::vector<std::string> roster;
  std::map<std::string, std::size_t> by_device;
  for (std::size_t i = 0; i < participants.size(); ++i) {
    const auto& p = participants[i];
    roster.push_back(p.label);
    const DeviceId& id = source == Source::app ? p.app_id : p.badge_id;
    if (id.empty()) continue;
    if (!by_device.emplace(id.value, i).second)
      throw DataError("roster id collision on '" + id.value + "'");
  }
  DetectionGrid out(source, std::move(roster), grid.total_bins());
  for (const auto& ev : events) {
    if (ev.source != source) continue;
    auto bin = grid.bin_of(ev.timestamp);
    if (!bin) continue;
    auto si = by_device.find(ev.scanner.value);
    if (si == by_device.end()) continue;  // non-participant scanner
    if (ev.kind == EventKind::scan && source == Source::app) {
      out.record_scan(si->second, *bin);
    } else if (ev.kind == EventKind::detect) {
      auto oi = by_device.find(ev.observed->value);
      if (oi == by_device.end()) continue;  // non-participant observed
      out.record_detection(si->second, oi->second, *bin);
    }
  }
  if (source == Source::badge) {
    // Badges ship no scan log; approximate N_i by the bins carrying any
    // Bluetooth evidence for the device (detections given or received).
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t b = 0; b < out.n_bins(); ++b) {
        for (std::size_t j = 0; j < n && out.scans(i, b) == 0; ++j) {
          if (j != i && (out.directed_count(i, j, b) > 0 || out.directed_count(j, i, b) > 0))
            out.record_scan(i, b);
        }
      }
    }
  }
  return out;
}

double connection_strength_eq1(std::uint64_t n_ij, std::uint64_t n_ji, std::uint64_t n_i,
                               std::uint64_t n_j) {
  if (n_ij > n_i || n_ji > n_j)
    throw DataError("detection count exceeds scan count");
  if (n_i + n_j == 0) return 0.0;
  return static_cast<double>(n_ij + n_ji) / static_cast<double>(n_i + n_j);
}

std::vector<std::size_t> coactive_bins(const ActivityTimeline& a, const ActivityTimeline& b) {
  if (a.active.size() != b.active.size()) throw DataError("timeline length mismatch");
  std::vector<std::size_t> bins;
  for (std::size_t t = 0; t < a.active.size(); ++t)
    if (a.active[t] && b.active[t]) bins.push_back(t);
  return bins;
}

double simultaneous_activity_fraction(const ActivityTimeline& a, const ActivityTimeline& b) {
  if (a.active.empty()) return 0.0;
  return static_cast<double>(coactive_bins(a, b).size()) /
         static_cast<double>(a.active.size());
}

namespace {

// Universe bins for one dyad.
std::vector<std::size_t> universe_bins(const DetectionGrid& grid,
                                       const std::vector<ActivityTimeline>& timelines,
                                       Universe universe, std::size_t i, std::size_t j) {
  std::vector<std::size_t> bins;
  switch (universe) {
    case Universe::all_office_bins:
      bins.resize(grid.n_bins());
      for (std::size_t t = 0; t < grid.n_bins(); ++t) bins[t] = t;
      break;
    case Universe::coactive_bins:
      if (timelines.size() != grid.size())
        throw DataError("coactive universe needs one timeline per roster member");
      bins = coactive_bins(timelines[i], timelines[j]);
      break;
    case Universe::sampled_bins:
      for (std::size_t t = 0; t < grid.n_bins(); ++t)
        if (grid.scans(i, t) + grid.scans(j, t) > 0) bins.push_back(t);
      break;
  }
  return bins;
}

}  // namespace

WeightedNetwork weighted_network(const DetectionGrid& grid,
                                 const std::vector<ActivityTimeline>& timelines,
                                 WeightMode mode, Universe universe) {
  const std::size_t n = grid.size();
  if (n == 0) throw StatsError("empty roster");
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto bins = universe_bins(grid, timelines, universe, i, j);
      double weight = 0.0;
      if (mode == WeightMode::time_fraction) {
        if (!bins.empty()) {
          std::size_t hits = 0;
          for (std::size_t t : bins) hits += grid.detected(i, j, t);
          weight = static_cast<double>(hits) / static_cast<double>(bins.size());
        }
      } else {
        std::uint64_t n_ij = 0, n_ji = 0, n_i = 0, n_j = 0;
        for (std::size_t t : bins) {
          n_ij += grid.directed_count(i, j, t);
          n_ji += grid.directed_count(j, i, t);
          n_i += grid.scans(i, t);
          n_j += grid.scans(j, t);
        }
        weight = connection_strength_eq1(n_ij, n_ji, n_i, n_j);
      }
      w[i * n + j] = w[j * n + i] = weight;
    }
  }
  return WeightedNetwork(grid.roster(), std::move(w));
}

ResampledNetwork resample_network(const DetectionGrid& grid, std::size_t required_samples,
                                  std::uint64_t rng_seed) {
  if (required_samples == 0) throw ConfigError("required_samples must be >= 1");
  const std::size_t n = grid.size();
  std::vector<std::size_t> kept;           // indices into the full roster
  std::vector<std::vector<std::size_t>> drawn;  // sampled scan-bins per kept device
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> scan_bins;
    for (std::size_t t = 0; t < grid.n_bins(); ++t)
      if (grid.scans(i, t) > 0) scan_bins.push_back(t);
    if (scan_bins.size() < required_samples) continue;
    // Per-device RNG stream keyed by roster position: the draw for one
    // device does not depend on which other devices are retained.
    std::seed_seq seq{rng_seed, static_cast<std::uint64_t>(i)};
    std::mt19937_64 rng(seq);
    for (std::size_t k = 0; k < required_samples; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, scan_bins.size() - 1);
      std::swap(scan_bins[k], scan_bins[pick(rng)]);
    }
    scan_bins.resize(required_samples);
    std::sort(scan_bins.begin(), scan_bins.end());
    kept.push_back(i);
    drawn.push_back(std::move(scan_bins));
  }
  if (kept.empty())
    throw StatsError("required_samples exceeds every participant's scan-bin count");

  const std::size_t m = kept.size();
  std::vector<std::string> retained;
  for (std::size_t i : kept) retained.push_back(grid.roster()[i]);
  std::vector<double> w(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      std::vector<std::size_t> uni;
      std::set_union(drawn[a].begin(), drawn[a].end(), drawn[b].begin(), drawn[b].end(),
                     std::back_inserter(uni));
      std::size_t hits = 0;
      for (std::size_t t : uni) hits += grid.detected(kept[a], kept[b], t);
      const double weight =
          uni.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(uni.size());
      w[a * m + b] = w[b * m + a] = weight;
    }
  }
  return {WeightedNetwork(retained, std::move(w)), retained};
}

}  // namespace proxnet
