#include "proxnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "proxnet/error.hpp"

namespace proxnet {

namespace {

std::size_t ut_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

// Average ranks (1-based), ties share the mean rank.
std::vector<double> ranks_of(std::span<const double> x) {
  const std::size_t m = x.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(m);
  std::size_t k = 0;
  while (k < m) {
    std::size_t k2 = k;
    while (k2 + 1 < m && x[order[k2 + 1]] == x[order[k]]) ++k2;
    const double avg = 0.5 * (double(k) + double(k2)) + 1.0;
    for (std::size_t t = k; t <= k2; ++t) r[order[t]] = avg;
    k = k2 + 1;
  }
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < m; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= double(m);
  my /= double(m);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) throw StatsError("correlation undefined on constant input");
  return sxy / std::sqrt(sxx * syy);
}

// Type-7 empirical quantile.
double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * double(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= v.size()) return v.back();
  const double frac = pos - double(lo);
  return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (a + 1) + 0xbf58476d1ce4e5b9ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw StatsError("length mismatch");
  if (x.size() < 3) throw StatsError("need at least 3 observations");
  const auto rx = ranks_of(x);
  const auto ry = ranks_of(y);
  return pearson(rx, ry);
}

std::vector<double> upper_triangle_of(const WeightedNetwork& w) { return w.upper_triangle(); }
std::vector<double> upper_triangle_of(const BinaryNetwork& b) { return b.upper_triangle(); }

ContingencyTable contingency(const DetectionGrid& grid_A, const DetectionGrid& grid_B,
                             Universe universe,
                             const std::vector<ActivityTimeline>& timelines_A,
                             const std::vector<ActivityTimeline>& timelines_B,
                             CoactiveRule rule) {
  if (grid_A.roster() != grid_B.roster()) throw DataError("grids have different rosters");
  if (grid_A.n_bins() != grid_B.n_bins()) throw DataError("grids have different bin counts");
  const std::size_t n = grid_A.size();
  if (universe == Universe::coactive_bins &&
      (timelines_A.size() != n || timelines_B.size() != n))
    throw DataError("coactive universe needs one timeline per roster member and source");

  ContingencyTable t;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t bin = 0; bin < grid_A.n_bins(); ++bin) {
        bool in_universe = true;
        switch (universe) {
          case Universe::all_office_bins:
            break;
          case Universe::coactive_bins: {
            const bool app_ok = timelines_A[i].active[bin] && timelines_A[j].active[bin];
            const bool badge_ok = timelines_B[i].active[bin] && timelines_B[j].active[bin];
            in_universe = rule == CoactiveRule::all_four ? (app_ok && badge_ok)
                                                         : (app_ok || badge_ok);
            break;
          }
          case Universe::sampled_bins:
            in_universe = grid_A.scans(i, bin) + grid_A.scans(j, bin) > 0;
            break;
        }
        if (!in_universe) continue;
        const bool hit_A = grid_A.detected(i, j, bin);
        const bool hit_B = grid_B.detected(i, j, bin);
        if (hit_A && hit_B) ++t.a;
        else if (hit_A) ++t.b;
        else if (hit_B) ++t.c;
        else ++t.d;
      }
    }
  }
  return t;
}

TableStats table_stats(const ContingencyTable& t) {
  if (t.total() == 0) throw StatsError("empty contingency table");
  const double a = double(t.a), b = double(t.b), c = double(t.c), d = double(t.d);
  const double row_A_hit = a + b, row_A_miss = c + d;
  const double col_B_hit = a + c, col_B_miss = b + d;
  const char* margin = nullptr;
  if (row_A_hit == 0) margin = "a+b (A hits)";
  else if (row_A_miss == 0) margin = "c+d (A misses)";
  else if (col_B_hit == 0) margin = "a+c (B hits)";
  else if (col_B_miss == 0) margin = "b+d (B misses)";
  if (margin) throw StatsError(std::string("zero margin: ") + margin);

  TableStats s;
  s.phi = (a * d - b * c) / std::sqrt(row_A_hit * row_A_miss * col_B_hit * col_B_miss);
  s.chi2 = double(t.total()) * s.phi * s.phi;
  s.p_value = std::erfc(std::sqrt(s.chi2 / 2.0));  // chi-squared upper tail, 1 df
  s.odds_A = row_A_hit / row_A_miss;
  s.odds_B = col_B_hit / col_B_miss;
  s.sensitivity = a / col_B_hit;
  s.specificity = d / col_B_miss;
  return s;
}

namespace {

// Correlation of rank vectors where ry gets relabeled node order `perm`.
double permuted_rank_corr(const std::vector<double>& rx, const std::vector<double>& ry,
                          const std::vector<std::size_t>& perm, std::size_t n, double mean,
                          double sxx_x, double sxx_y, double my) {
  double sxy = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      sxy += (rx[k] - mean) * (ry[ut_index(perm[i], perm[j], n)] - my);
    }
  }
  return sxy / std::sqrt(sxx_x * sxx_y);
}

struct RankPrep {
  std::vector<double> rx, ry;
  double mean_x, mean_y, sxx, syy;
};

RankPrep prepare_ranks(const std::vector<double>& upper_A, const std::vector<double>& upper_B,
                       std::size_t n) {
  const std::size_t m = n * (n - 1) / 2;
  if (n < 3) throw StatsError("mantel needs at least 3 nodes");
  if (upper_A.size() != m || upper_B.size() != m)
    throw StatsError("upper-triangle length does not match roster size");
  RankPrep p;
  p.rx = ranks_of(upper_A);
  p.ry = ranks_of(upper_B);
  p.mean_x = p.mean_y = 0;
  for (double v : p.rx) p.mean_x += v;
  for (double v : p.ry) p.mean_y += v;
  p.mean_x /= double(m);
  p.mean_y /= double(m);
  p.sxx = p.syy = 0;
  for (double v : p.rx) p.sxx += (v - p.mean_x) * (v - p.mean_x);
  for (double v : p.ry) p.syy += (v - p.mean_y) * (v - p.mean_y);
  if (p.sxx <= 0 || p.syy <= 0) throw StatsError("mantel undefined on constant matrix");
  return p;
}

constexpr double kRhoTie = 1e-9;

}  // namespace

MantelResult mantel(const std::vector<double>& upper_A, const std::vector<double>& upper_B,
                    std::size_t n, std::size_t n_permutations, std::uint64_t rng_seed) {
  const RankPrep prep = prepare_ranks(upper_A, upper_B, n);
  std::vector<std::size_t> ident(n);
  std::iota(ident.begin(), ident.end(), 0);
  const double rho = permuted_rank_corr(prep.rx, prep.ry, ident, n, prep.mean_x, prep.sxx,
                                        prep.syy, prep.mean_y);
  std::mt19937_64 rng(rng_seed);
  std::size_t ge = 0;
  std::vector<std::size_t> perm = ident;
  for (std::size_t p = 0; p < n_permutations; ++p) {
    std::shuffle(perm.begin(), perm.end(), rng);
    const double r = permuted_rank_corr(prep.rx, prep.ry, perm, n, prep.mean_x, prep.sxx,
                                        prep.syy, prep.mean_y);
    if (r >= rho - kRhoTie) ++ge;
  }
  MantelResult res;
  res.rho = rho;
  res.n_permutations = n_permutations;
  res.p_value = double(1 + ge) / double(1 + n_permutations);
  return res;
}

MantelResult mantel_exhaustive(const std::vector<double>& upper_A,
                               const std::vector<double>& upper_B, std::size_t n) {
  if (n > 8) throw ConfigError("exhaustive mantel limited to n <= 8");
  const RankPrep prep = prepare_ranks(upper_A, upper_B, n);
  std::vector<std::size_t> ident(n);
  std::iota(ident.begin(), ident.end(), 0);
  const double rho = permuted_rank_corr(prep.rx, prep.ry, ident, n, prep.mean_x, prep.sxx,
                                        prep.syy, prep.mean_y);
  std::vector<std::size_t> perm = ident;
  std::size_t ge = 0, count = 0;
  do {
    const double r = permuted_rank_corr(prep.rx, prep.ry, perm, n, prep.mean_x, prep.sxx,
                                        prep.syy, prep.mean_y);
    if (r >= rho - kRhoTie) ++ge;
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  MantelResult res;
  res.rho = rho;
  res.n_permutations = count;
  res.p_value = double(ge) / double(count);
  return res;
}

std::pair<double, double> mantel_bootstrap_ci(const std::vector<double>& upper_A,
                                              const std::vector<double>& upper_B,
                                              std::size_t n_boot, double level,
                                              std::uint64_t rng_seed) {
  if (upper_A.size() != upper_B.size() || upper_A.size() < 3)
    throw StatsError("bootstrap needs matched vectors of at least 3 dyads");
  if (level <= 0.0 || level >= 1.0) throw ConfigError("CI level must be in (0,1)");
  const std::size_t m = upper_A.size();
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::vector<double> rhos;
  rhos.reserve(n_boot);
  std::vector<double> xa(m), xb(m);
  for (std::size_t b = 0; b < n_boot; ++b) {
    double rho = 0;
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t idx = pick(rng);
        xa[k] = upper_A[idx];
        xb[k] = upper_B[idx];
      }
      try {
        rho = spearman(xa, xb);
        ok = true;
      } catch (const StatsError&) {
        // constant resample, redraw
      }
    }
    if (!ok) throw StatsError("bootstrap could not draw a non-degenerate resample");
    rhos.push_back(rho);
  }
  const double alpha = 1.0 - level;
  return {quantile(rhos, alpha / 2.0), quantile(rhos, 1.0 - alpha / 2.0)};
}

std::pair<std::size_t, std::size_t> edge_match_count(const BinaryNetwork& X,
                                                     const BinaryNetwork& Y) {
  if (X.roster() != Y.roster()) throw DataError("edge match on different rosters");
  std::size_t matched = 0;
  for (const auto& [i, j] : Y.edges()) matched += X.at(i, j);
  return {matched, Y.edge_count()};
}

ResamplingCurve resampling_curve(const DetectionGrid& grid,
                                 const std::vector<WeightedNetwork>& references,
                                 const std::vector<std::size_t>& sample_counts,
                                 std::size_t repeats, std::uint64_t rng_seed) {
  if (!std::is_sorted(sample_counts.begin(), sample_counts.end()))
    throw ConfigError("sample counts must be sorted ascending");
  for (const auto& ref : references)
    if (ref.roster() != grid.roster())
      throw DataError("reference roster does not match detection grid");

  ResamplingCurve curve;
  curve.repeats = repeats;
  std::map<std::string, std::size_t> roster_pos;
  for (std::size_t i = 0; i < grid.size(); ++i) roster_pos[grid.roster()[i]] = i;

  for (std::size_t s_idx = 0; s_idx < sample_counts.size(); ++s_idx) {
    const std::size_t S = sample_counts[s_idx];
    CurvePoint pt;
    pt.required_samples = S;
    pt.roster_size = 0;
    pt.computed = false;
    std::vector<std::vector<double>> rhos(references.size());
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      ResampledNetwork rn = [&]() -> ResampledNetwork {
        try {
          return resample_network(grid, S, mix_seed(rng_seed, S, rep));
        } catch (const StatsError&) {
          return {WeightedNetwork({}, {}), {}};
        }
      }();
      pt.roster_size = rn.retained.size();
      if (rn.retained.size() < 3) continue;
      const auto est = rn.network.upper_triangle();
      for (std::size_t r = 0; r < references.size(); ++r) {
        // Restrict the reference to the retained roster.
        const auto& ref = references[r];
        const std::size_t m = rn.retained.size();
        std::vector<std::size_t> idx(m);
        for (std::size_t k = 0; k < m; ++k) idx[k] = roster_pos.at(rn.retained[k]);
        std::vector<double> ref_ut;
        ref_ut.reserve(m * (m - 1) / 2);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = i + 1; j < m; ++j) ref_ut.push_back(ref.at(idx[i], idx[j]));
        try {
          rhos[r].push_back(spearman(est, ref_ut));
        } catch (const StatsError&) {
          // degenerate draw, skip this replicate for this reference
        }
      }
    }
    pt.computed = !references.empty() && !rhos[0].empty();
    for (std::size_t r = 0; r < references.size(); ++r) {
      if (rhos[r].empty()) {
        pt.mean_rho.push_back(0);
        pt.band_low.push_back(0);
        pt.band_high.push_back(0);
        pt.computed = false;
        continue;
      }
      double mean = 0;
      for (double v : rhos[r]) mean += v;
      mean /= double(rhos[r].size());
      pt.mean_rho.push_back(mean);
      pt.band_low.push_back(quantile(rhos[r], 0.005));
      pt.band_high.push_back(quantile(rhos[r], 0.995));
    }
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

}  // namespace proxnet
