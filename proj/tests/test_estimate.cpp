#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "proxnet/error.hpp"
#include "proxnet/estimate.hpp"
#include "proxnet/pipeline.hpp"
#include "proxnet/sim.hpp"

using namespace proxnet;

namespace {

TimeGrid::Params small_grid_params(int days = 5) {
  TimeGrid::Params p;
  p.start_year = p.end_year = 2020;
  p.start_month = p.end_month = 1;
  p.start_day = 6;
  p.end_day = 5 + days;
  p.days_of_week = {1, 2, 3, 4, 5};
  p.daily_start_sec = 9 * 3600;
  p.daily_end_sec = 17 * 3600;
  p.timezone = "UTC";
  return p;
}

SimConfig small_config() {
  SimConfig c;
  c.n_platform_A = 4;
  c.n_platform_B = 4;
  c.grid = small_grid_params();
  c.seed = 42;
  return c;
}

void check_network_invariants(const WeightedNetwork& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(w.at(i, i) == 0.0);
    for (std::size_t j = 0; j < w.size(); ++j) {
      CHECK(w.at(i, j) == w.at(j, i));
      CHECK(w.at(i, j) >= 0.0);
      CHECK(w.at(i, j) <= 1.0);
    }
  }
}

}  // namespace

TEST_CASE("connection strength") {
  CHECK(connection_strength_eq1(0, 0, 10, 10) == 0.0);
  CHECK(connection_strength_eq1(10, 10, 10, 10) == 1.0);
  CHECK(connection_strength_eq1(3, 1, 10, 10) == doctest::Approx(0.2));
  CHECK(connection_strength_eq1(0, 0, 0, 0) == 0.0);
  CHECK_THROWS_AS(connection_strength_eq1(11, 0, 10, 10), DataError);

  // monotone in n_ij with the other counts fixed
  double prev = -1;
  for (std::uint64_t n_ij = 0; n_ij <= 10; ++n_ij) {
    const double w = connection_strength_eq1(n_ij, 2, 10, 10);
    CHECK(w >= prev);
    prev = w;
  }
}

TEST_CASE("detection grid basics") {
  const TimeGrid grid(small_grid_params(1));
  std::vector<Participant> roster = {{"p1", DeviceId{"a1"}, DeviceId{"b1"}, Platform::platform_A},
                                     {"p2", DeviceId{"a2"}, DeviceId{"b2"}, Platform::platform_A},
                                     {"p3", DeviceId{"a3"}, DeviceId{"b3"}, Platform::platform_B}};
  const Instant t7 = grid.bin_interval(7).first;
  std::vector<ScanEvent> events = {
      {t7, Source::app, EventKind::scan, DeviceId{"a1"}, std::nullopt},
      {t7 + 5, Source::app, EventKind::detect, DeviceId{"a1"}, DeviceId{"a2"}},
      {t7 + 6, Source::app, EventKind::detect, DeviceId{"a1"}, DeviceId{"stranger"}},
  };
  auto dg = build_detection_grid(events, grid, roster, Source::app);
  CHECK(dg.detected(0, 1, 7));
  CHECK(dg.detected(1, 0, 7));
  CHECK_FALSE(dg.detected(0, 2, 7));
  for (std::size_t b = 0; b < dg.n_bins(); ++b) {
    if (b != 7) CHECK_FALSE(dg.detected(0, 1, b));
  }
  CHECK(dg.scans(0, 7) == 1);
  CHECK(dg.total_scans(0) == 1);
  CHECK(dg.directed_count(0, 1, 7) == 1);
  CHECK(dg.directed_count(1, 0, 7) == 0);

  SUBCASE("roster collision") {
    roster[1].app_id = DeviceId{"a1"};
    CHECK_THROWS_AS(build_detection_grid(events, grid, roster, Source::app), DataError);
  }
}

TEST_CASE("coactive bins") {
  ActivityTimeline a{DeviceId{"a"}, {true, true, false, true}};
  ActivityTimeline b{DeviceId{"b"}, {true, false, false, true}};
  CHECK(coactive_bins(a, a) == std::vector<std::size_t>{0, 1, 3});
  CHECK(coactive_bins(a, b) == std::vector<std::size_t>{0, 3});
  CHECK(simultaneous_activity_fraction(a, b) == doctest::Approx(0.5));
  ActivityTimeline c{DeviceId{"c"}, {false, false, true, false}};
  CHECK(coactive_bins(b, c).empty());
  ActivityTimeline mismatched{DeviceId{"d"}, {true}};
  CHECK_THROWS_AS(coactive_bins(a, mismatched), DataError);
}

TEST_CASE("weighted network, simulator oracle") {
  SimConfig config = small_config();
  SimResult res = simulate(config);
  const TimeGrid grid(config.grid);
  auto dg = build_detection_grid(res.app_log, grid, res.roster, Source::app);
  auto timelines = activity_timelines(res.app_log, grid, res.roster, Source::app);

  SUBCASE("noiseless time fraction equals ground truth exactly") {
    auto net = weighted_network(dg, timelines, WeightMode::time_fraction,
                                Universe::all_office_bins);
    auto truth = truth_network(res.truth);
    check_network_invariants(net);
    for (std::size_t i = 0; i < net.size(); ++i)
      for (std::size_t j = 0; j < net.size(); ++j) CHECK(net.at(i, j) == truth.at(i, j));
  }
  SUBCASE("scan-normalized agrees in the noiseless limit") {
    auto net = weighted_network(dg, timelines, WeightMode::scan_normalized,
                                Universe::all_office_bins);
    auto truth = truth_network(res.truth);
    for (std::size_t i = 0; i < net.size(); ++i)
      for (std::size_t j = i + 1; j < net.size(); ++j)
        CHECK(net.at(i, j) == doctest::Approx(truth.at(i, j)).epsilon(1e-12));
  }
  SUBCASE("all universes satisfy the invariants") {
    for (auto mode : {WeightMode::time_fraction, WeightMode::scan_normalized}) {
      for (auto universe :
           {Universe::all_office_bins, Universe::coactive_bins, Universe::sampled_bins}) {
        check_network_invariants(weighted_network(dg, timelines, mode, universe));
      }
    }
  }
}

TEST_CASE("empty grid gives zero matrix") {
  const TimeGrid grid(small_grid_params(1));
  std::vector<Participant> roster = {{"p1", DeviceId{"a1"}, DeviceId{"b1"}, Platform::platform_A},
                                     {"p2", DeviceId{"a2"}, DeviceId{"b2"}, Platform::platform_A}};
  auto dg = build_detection_grid({}, grid, roster, Source::app);
  auto net = weighted_network(dg, {}, WeightMode::time_fraction, Universe::all_office_bins);
  CHECK(net.at(0, 1) == 0.0);
}

TEST_CASE("realized scan rate tracks adherence") {
  SimConfig config = small_config();
  config.adherence_A = 0.5;
  config.adherence_B = 0.5;
  SimResult res = simulate(config);
  const TimeGrid grid(config.grid);
  auto dg = build_detection_grid(res.app_log, grid, res.roster, Source::app);
  const double hours = double(grid.total_bins()) * grid.bin_seconds() / 3600.0;
  const double scheduled_per_hour = 3600.0 / grid.bin_seconds();
  for (std::size_t i = 0; i < dg.size(); ++i) {
    const double rate = double(dg.total_scans(i)) / hours;
    CHECK(rate == doctest::Approx(0.5 * scheduled_per_hour).epsilon(0.10));
  }
}

TEST_CASE("resampling") {
  SimConfig config = small_config();
  config.adherence_A = 0.6;
  config.adherence_B = 0.2;
  SimResult res = simulate(config);
  const TimeGrid grid(config.grid);
  auto dg = build_detection_grid(res.app_log, grid, res.roster, Source::app);

  SUBCASE("deterministic under a fixed seed") {
    auto r1 = resample_network(dg, 20, 99);
    auto r2 = resample_network(dg, 20, 99);
    CHECK(r1.retained == r2.retained);
    CHECK(r1.network.data() == r2.network.data());
    auto r3 = resample_network(dg, 20, 100);
    CHECK(r1.network.data() != r3.network.data());
  }
  SUBCASE("single scan-bin device keeps that bin") {
    // build a grid with exactly one scanning device and one scan
    std::vector<Participant> pair = {res.roster[0], res.roster[1]};
    DetectionGrid tiny(Source::app, {"p1", "p2"}, 10);
    tiny.record_scan(0, 4);
    tiny.record_scan(1, 4);
    tiny.record_detection(0, 1, 4);
    auto r = resample_network(tiny, 1, 7);
    CHECK(r.retained.size() == 2);
    CHECK(r.network.at(0, 1) == 1.0);
  }
  SUBCASE("excessive sample count fails") {
    CHECK_THROWS_AS(resample_network(dg, grid.total_bins() + 1, 1), StatsError);
  }
  SUBCASE("roster shrinks monotonically in S") {
    std::size_t prev = dg.size() + 1;
    for (std::size_t S : {5, 20, 60, 120, 200}) {
      std::size_t retained = 0;
      try {
        retained = resample_network(dg, S, 1).retained.size();
      } catch (const StatsError&) {
        retained = 0;
      }
      CHECK(retained <= prev);
      prev = retained;
    }
  }
  SUBCASE("invariants hold on resampled networks") {
    auto r = resample_network(dg, 15, 5);
    check_network_invariants(r.network);
  }
}
