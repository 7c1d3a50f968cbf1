#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "proxnet/estimate.hpp"
#include "proxnet/network.hpp"
#include "proxnet/types.hpp"

namespace proxnet {

// Pooled 2x2 table over (dyad, bin) pairs: a = both sources hit,
// b = A only, c = B only, d = neither.
struct ContingencyTable {
  std::uint64_t a = 0, b = 0, c = 0, d = 0;
  std::uint64_t total() const { return a + b + c + d; }
};

struct TableStats {
  double phi;          // (ad - bc) / sqrt((a+b)(c+d)(a+c)(b+d))
  double chi2;         // total * phi^2
  double p_value;      // upper tail, chi-squared with 1 df
  double odds_A;       // (a+b)/(c+d), source-A hits over misses
  double odds_B;       // (a+c)/(b+d)
  double sensitivity;  // a/(a+c), A detecting given B detected
  double specificity;  // d/(b+d)
};

struct MantelResult {
  double rho;
  double p_value;
  std::size_t n_permutations;
  std::optional<double> ci_low, ci_high;
};

// Contingency coactivity rule: source descriptions are ambiguous between
// requiring both devices of both sources or only the compared pair.
enum class CoactiveRule {
  all_four,    // app i, app j, badge i, badge j all active
  two_device,  // per source: that source's two devices active
};

// Pools detection agreement between two sources over every (dyad, bin)
// of the chosen universe. For Universe::coactive_bins, timelines_A and
// timelines_B give per-roster-member activity for each source.
ContingencyTable contingency(const DetectionGrid& grid_A, const DetectionGrid& grid_B,
                             Universe universe,
                             const std::vector<ActivityTimeline>& timelines_A,
                             const std::vector<ActivityTimeline>& timelines_B,
                             CoactiveRule rule = CoactiveRule::all_four);

// StatsError when a margin is zero (phi undefined), naming the margin.
TableStats table_stats(const ContingencyTable& t);

// Spearman rank correlation (average ranks on ties).
// StatsError when either vector is constant.
double spearman(std::span<const double> x, std::span<const double> y);

// Upper-triangle vector of either network flavour.
std::vector<double> upper_triangle_of(const WeightedNetwork& w);
std::vector<double> upper_triangle_of(const BinaryNetwork& b);

// Mantel test: Spearman rho over upper triangles; significance from
// random simultaneous row/column relabelings of B. One-tailed
// (rho* >= rho), add-one smoothed. Deterministic for a fixed seed.
MantelResult mantel(const std::vector<double>& upper_A, const std::vector<double>& upper_B,
                    std::size_t n, std::size_t n_permutations, std::uint64_t rng_seed);

// All n! relabelings enumerated; p = #{rho* >= rho} / n!. Intended for
// small n (throws ConfigError above n = 8).
MantelResult mantel_exhaustive(const std::vector<double>& upper_A,
                               const std::vector<double>& upper_B, std::size_t n);

// Percentile bootstrap over upper-triangle dyads sampled with
// replacement. Constant resamples are redrawn (bounded retries).
std::pair<double, double> mantel_bootstrap_ci(const std::vector<double>& upper_A,
                                              const std::vector<double>& upper_B,
                                              std::size_t n_boot, double level,
                                              std::uint64_t rng_seed);

// matched = |edges(X) intersect edges(Y)|, total = |edges(Y)|.
std::pair<std::size_t, std::size_t> edge_match_count(const BinaryNetwork& X,
                                                     const BinaryNetwork& Y);

struct CurvePoint {
  std::size_t required_samples;
  std::size_t roster_size;
  bool computed;                  // false when the retained roster fell below 3
  std::vector<double> mean_rho;   // one per reference
  std::vector<double> band_low;   // empirical 0.5% quantile
  std::vector<double> band_high;  // empirical 99.5% quantile
};

struct ResamplingCurve {
  std::vector<CurvePoint> points;
  std::size_t repeats;
};

// Fixed-sample resampling-bias curve: for each S, resample the grid
// `repeats` times and correlate against each reference network
// (restricted to the retained roster). References share the grid roster.
ResamplingCurve resampling_curve(const DetectionGrid& grid,
                                 const std::vector<WeightedNetwork>& references,
                                 const std::vector<std::size_t>& sample_counts,
                                 std::size_t repeats, std::uint64_t rng_seed);

}  // namespace proxnet
