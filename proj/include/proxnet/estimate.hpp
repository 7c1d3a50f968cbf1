#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "proxnet/network.hpp"
#include "proxnet/time_grid.hpp"
#include "proxnet/types.hpp"

namespace proxnet {

enum class WeightMode {
  scan_normalized,  // (N_ij + N_ji) / (N_i + N_j)
  time_fraction,    // share of universe bins with a detection
};

enum class Universe {
  all_office_bins,
  coactive_bins,  // both members active
  sampled_bins,   // at least one member issued a scan
};

WeightMode weight_mode_from_string(const std::string& s);
Universe universe_from_string(const std::string& s);

// Per-source dyad x bin detection structure. Dyads are indexed by the
// upper-triangle (i<j) row-major order over the roster.
class DetectionGrid {
 public:
  DetectionGrid(Source source, std::vector<std::string> roster, std::size_t n_bins);

  Source source() const { return source_; }
  const std::vector<std::string>& roster() const { return roster_; }
  std::size_t size() const { return roster_.size(); }
  std::size_t n_bins() const { return n_bins_; }
  std::size_t n_dyads() const { return size() * (size() - 1) / 2; }

  std::size_t dyad_index(std::size_t i, std::size_t j) const;

  // Symmetric: true iff either member detected the other in the bin.
  bool detected(std::size_t i, std::size_t j, std::size_t bin) const;
  // Scan-level count of detections of j by i within the bin.
  std::uint32_t directed_count(std::size_t i, std::size_t j, std::size_t bin) const;
  std::uint32_t scans(std::size_t device, std::size_t bin) const {
    return scan_counts_[device * n_bins_ + bin];
  }
  std::size_t total_scans(std::size_t device) const;

  void record_scan(std::size_t device, std::size_t bin);
  void record_detection(std::size_t scanner, std::size_t observed, std::size_t bin);

 private:
  Source source_;
  std::vector<std::string> roster_;
  std::size_t n_bins_;
  std::vector<std::uint32_t> scan_counts_;  // device x bin
  std::vector<std::uint8_t> detected_;      // dyad x bin, symmetric OR of directions
  // directed counts stored sparsely: key = (ordered pair index, bin)
  std::map<std::pair<std::size_t, std::size_t>, std::uint32_t> directed_;
};

// Quantizes parsed events onto the grid. Only events between roster
// devices of the matching source contribute; detections from or to
// non-participants are excluded. For the badge source every detect event
// also counts as a scan by the scanner (badges report no scan log).
DetectionGrid build_detection_grid(const std::vector<ScanEvent>& events, const TimeGrid& grid,
                                   const std::vector<Participant>& participants, Source source);

// Average connection strength (N_ij + N_ji) / (N_i + N_j); zero when
// neither device scanned. DataError if a detection count exceeds its
// scan count.
double connection_strength_eq1(std::uint64_t n_ij, std::uint64_t n_ji, std::uint64_t n_i,
                               std::uint64_t n_j);

// Bins where both devices were active, plus the simultaneous-activity
// fraction |coactive| / total_bins.
std::vector<std::size_t> coactive_bins(const ActivityTimeline& a, const ActivityTimeline& b);
double simultaneous_activity_fraction(const ActivityTimeline& a, const ActivityTimeline& b);

// Weighted proximity network under the chosen weighting and universe.
// Timelines are keyed by roster position and required for the coactive
// universe.
WeightedNetwork weighted_network(const DetectionGrid& grid,
                                 const std::vector<ActivityTimeline>& timelines,
                                 WeightMode mode, Universe universe);

struct ResampledNetwork {
  WeightedNetwork network;
  std::vector<std::string> retained;  // roster subset, original order
};

// Equal-evidence network: participants with fewer than `required_samples`
// scan-bins are dropped; each retained participant keeps exactly that
// many uniformly drawn scan-bins; weights are time-fractions over bins
// sampled by either member. Deterministic for a fixed seed regardless of
// evaluation order. StatsError when no participant has enough scan-bins.
ResampledNetwork resample_network(const DetectionGrid& grid, std::size_t required_samples,
                                  std::uint64_t rng_seed);

}  // namespace proxnet
