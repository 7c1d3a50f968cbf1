// proxnet: estimate and validate proximity networks from Bluetooth
// discovery-scan logs. Subcommands: simulate, ingest, estimate, compare,
// backbone, curve. All outputs are plain CSV/JSON/GraphML with a
// provenance sidecar; randomized commands take an explicit --seed.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "proxnet/backbone.hpp"
#include "proxnet/error.hpp"
#include "proxnet/estimate.hpp"
#include "proxnet/ingest.hpp"
#include "proxnet/pipeline.hpp"
#include "proxnet/sim.hpp"
#include "proxnet/stats.hpp"
#include "proxnet/time_grid.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace proxnet;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitData = 4;
constexpr int kExitStats = 5;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> load_name_mapping(const std::string& path) {
  std::map<std::string, std::string> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mapping: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty() || line == "\r") continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected name,participant");
    std::string value = line.substr(comma + 1);
    if (!value.empty() && value.back() == '\r') value.pop_back();
    out[line.substr(0, comma)] = value;
  }
  return out;
}

std::vector<std::string> roster_labels(const std::vector<Participant>& roster) {
  std::vector<std::string> out;
  for (const auto& p : roster) out.push_back(p.label);
  return out;
}

void write_provenance(const std::string& out_dir, const std::vector<std::string>& inputs,
                      const json& params) {
  atomic_write((fs::path(out_dir) / "provenance.json").string(),
               make_provenance(inputs, params).dump(2) + "\n");
}

struct EstimateInputs {
  std::vector<Participant> roster;
  std::vector<ScanEvent> events;
  DetectionGrid detections;
  std::vector<ActivityTimeline> timelines;
};

EstimateInputs load_estimate_inputs(const std::string& events_path,
                                    const std::string& roster_path, const TimeGrid& grid,
                                    Source source, std::size_t gap_tolerance) {
  auto roster = parse_roster(roster_path);
  auto report = parse_scan_log(events_path, source);
  if (!report.rejected.empty()) {
    for (const auto& r : report.rejected)
      std::cerr << events_path << ":" << r.line_number << ": " << r.reason << "\n";
    throw ParseError(std::to_string(report.rejected.size()) + " malformed rows in " +
                     events_path);
  }
  auto detections = build_detection_grid(report.events, grid, roster, source);
  auto timelines = activity_timelines(report.events, grid, roster, source, gap_tolerance);
  return {std::move(roster), std::move(report.events), std::move(detections),
          std::move(timelines)};
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  const SimConfig config = SimConfig::from_json(json::parse(slurp(config_path)));
  fs::create_directories(out_dir);
  SimResult res = simulate(config);

  std::ostringstream app_csv, badge_csv, roster_csv, truth_csv;
  write_scan_log(app_csv, res.app_log);
  write_scan_log(badge_csv, res.badge_log);
  roster_csv << "participant,app_id,badge_id,platform\n";
  for (const auto& p : res.roster) {
    roster_csv << p.label << ',' << p.app_id.value << ',' << p.badge_id.value << ','
               << platform_to_string(p.platform) << "\n";
  }
  truth_network(res.truth).write_csv(truth_csv);

  atomic_write((fs::path(out_dir) / "app_log.csv").string(), app_csv.str());
  atomic_write((fs::path(out_dir) / "badge_log.csv").string(), badge_csv.str());
  atomic_write((fs::path(out_dir) / "roster.csv").string(), roster_csv.str());
  atomic_write((fs::path(out_dir) / "truth.csv").string(), truth_csv.str());
  json params;
  params["config"] = config.to_json();
  params["seed"] = config.seed;
  write_provenance(out_dir, {config_path}, params);
  return 0;
}

int cmd_ingest(const std::string& app_log, const std::string& badge_log,
               const std::string& roster_path, const std::string& grid_path,
               std::size_t gap_tolerance, const std::string& out_dir) {
  const TimeGrid grid = load_grid(grid_path);
  auto roster = parse_roster(roster_path);
  fs::create_directories(out_dir);

  std::ostringstream activity_csv;
  activity_csv << "source,participant,active_fraction\n";
  std::vector<std::string> inputs = {roster_path};
  bool failed = false;
  for (const auto& [path, source] :
       std::vector<std::pair<std::string, Source>>{{app_log, Source::app},
                                                   {badge_log, Source::badge}}) {
    if (path.empty()) continue;
    inputs.push_back(path);
    auto report = parse_scan_log(path, source);
    for (const auto& r : report.rejected) {
      std::cerr << path << ":" << r.line_number << ": " << r.reason << "\n";
      failed = true;
    }
    std::ostringstream events_csv;
    write_scan_log(events_csv, report.events);
    const std::string name = source == Source::app ? "events_app.csv" : "events_badge.csv";
    atomic_write((fs::path(out_dir) / name).string(), events_csv.str());
    auto timelines = activity_timelines(report.events, grid, roster, source, gap_tolerance);
    for (std::size_t i = 0; i < roster.size(); ++i) {
      activity_csv << source_to_string(source) << ',' << roster[i].label << ','
                   << timelines[i].active_fraction() << "\n";
    }
    if (report.duplicates > 0)
      std::cerr << path << ": " << report.duplicates << " duplicate rows collapsed\n";
  }
  if (failed) throw ParseError("malformed rows in input logs");
  atomic_write((fs::path(out_dir) / "activity.csv").string(), activity_csv.str());
  json params;
  params["gap_tolerance"] = gap_tolerance;
  params["grid"] = grid_params_to_json(grid.params());
  write_provenance(out_dir, inputs, params);
  return 0;
}

int cmd_estimate(const std::string& events_path, const std::string& roster_path,
                 const std::string& grid_path, const std::string& source_str,
                 const std::string& mode_str, const std::string& universe_str,
                 std::size_t gap_tolerance, const std::string& out_path) {
  const TimeGrid grid = load_grid(grid_path);
  const Source source = source_from_string(source_str);
  auto in = load_estimate_inputs(events_path, roster_path, grid, source, gap_tolerance);
  const WeightedNetwork net =
      weighted_network(in.detections, in.timelines, weight_mode_from_string(mode_str),
                       universe_from_string(universe_str));
  std::ostringstream csv;
  net.write_csv(csv);
  atomic_write(out_path, csv.str());
  json params{{"source", source_str}, {"mode", mode_str}, {"universe", universe_str},
              {"gap_tolerance", gap_tolerance}, {"grid", grid_params_to_json(grid.params())}};
  atomic_write(out_path + ".prov.json",
               make_provenance({events_path, roster_path}, params).dump(2) + "\n");
  return 0;
}

int cmd_compare(const std::string& matrix_a, const std::string& matrix_b,
                const std::string& survey_path, const std::string& mapping_path,
                const std::string& roster_path, const std::string& app_events,
                const std::string& badge_events, const std::string& grid_path,
                const std::string& universe_str, std::size_t permutations,
                std::size_t bootstrap, std::uint64_t seed, const std::string& out_path) {
  const WeightedNetwork A = WeightedNetwork::read_csv_file(matrix_a);
  const WeightedNetwork B = WeightedNetwork::read_csv_file(matrix_b);
  if (A.roster() != B.roster()) throw DataError("matrix rosters differ");

  json out;
  std::vector<std::string> inputs = {matrix_a, matrix_b};
  const auto ut_A = A.upper_triangle();
  const auto ut_B = B.upper_triangle();
  MantelResult m = mantel(ut_A, ut_B, A.size(), permutations, seed);
  auto [lo, hi] = mantel_bootstrap_ci(ut_A, ut_B, bootstrap, 0.95, seed + 1);
  out["mantel"] = {{"rho", m.rho},
                   {"p_value", m.p_value},
                   {"n_permutations", m.n_permutations},
                   {"ci_low", lo},
                   {"ci_high", hi}};
  out["density_a"] = density(A);
  out["density_b"] = density(B);

  if (!survey_path.empty()) {
    if (roster_path.empty()) throw ConfigError("--survey requires --roster");
    inputs.push_back(survey_path);
    inputs.push_back(roster_path);
    auto roster = parse_roster(roster_path);
    auto survey =
        parse_survey(survey_path, roster_labels(roster), load_name_mapping(mapping_path));
    const BinaryNetwork survey_net = symmetrize(survey.network);
    if (survey_net.roster() != A.roster())
      throw DataError("survey roster does not match matrices");
    const double target = density(survey_net);
    out["survey"] = {{"edges", survey_net.edge_count()},
                     {"density", target},
                     {"unresolved_nominees", survey.unresolved_nominees}};
    for (const auto& [name, W] : {std::pair<const char*, const WeightedNetwork&>{"a", A},
                                  {"b", B}}) {
      auto bb = density_matched_backbone(W, target);
      auto [matched, total] = edge_match_count(bb.network, survey_net);
      MantelResult mb = mantel(bb.network.upper_triangle(), survey_net.upper_triangle(),
                               W.size(), permutations, seed);
      out["backbone_vs_survey"][name] = {{"matched_edges", matched},
                                         {"survey_edges", total},
                                         {"alpha_threshold", bb.chosen_threshold},
                                         {"rho", mb.rho},
                                         {"p_value", mb.p_value}};
    }
  }

  if (!app_events.empty() && !badge_events.empty()) {
    if (roster_path.empty()) throw ConfigError("contingency requires --roster");
    const TimeGrid grid = load_grid(grid_path);
    auto app = load_estimate_inputs(app_events, roster_path, grid, Source::app, 0);
    auto badge = load_estimate_inputs(badge_events, roster_path, grid, Source::badge, 0);
    inputs.push_back(app_events);
    inputs.push_back(badge_events);
    ContingencyTable table =
        contingency(app.detections, badge.detections, universe_from_string(universe_str),
                    app.timelines, badge.timelines);
    out["contingency"] = {{"a", table.a}, {"b", table.b}, {"c", table.c}, {"d", table.d}};
    TableStats ts = table_stats(table);
    out["table_stats"] = {{"phi", ts.phi},           {"chi2", ts.chi2},
                          {"p_value", ts.p_value},   {"odds_A", ts.odds_A},
                          {"odds_B", ts.odds_B},     {"sensitivity", ts.sensitivity},
                          {"specificity", ts.specificity}};
  }

  json params{{"permutations", permutations}, {"bootstrap", bootstrap}, {"seed", seed}};
  out["provenance"] = make_provenance(inputs, params);
  atomic_write(out_path, out.dump(2) + "\n");
  return 0;
}

int cmd_backbone(const std::string& matrix_path, double target_density,
                 const std::string& survey_path, const std::string& mapping_path,
                 const std::string& roster_path, const std::string& out_dir) {
  const WeightedNetwork W = WeightedNetwork::read_csv_file(matrix_path);
  std::vector<std::string> inputs = {matrix_path};
  if (!survey_path.empty()) {
    if (roster_path.empty()) throw ConfigError("--survey requires --roster");
    inputs.push_back(survey_path);
    auto roster = parse_roster(roster_path);
    auto survey =
        parse_survey(survey_path, roster_labels(roster), load_name_mapping(mapping_path));
    target_density = density(symmetrize(survey.network));
  }
  if (target_density <= 0.0) throw ConfigError("need --target-density or --survey");
  auto bb = density_matched_backbone(W, target_density);
  fs::create_directories(out_dir);

  auto alphas = edge_alphas(W);
  std::erase_if(alphas, [&](const EdgeSignificance& e) { return !bb.network.at(e.i, e.j); });
  std::ostringstream edges_csv, graphml;
  write_edge_list(edges_csv, W, alphas);
  write_graphml(graphml, bb.network);
  atomic_write((fs::path(out_dir) / "backbone_edges.csv").string(), edges_csv.str());
  atomic_write((fs::path(out_dir) / "backbone.graphml").string(), graphml.str());
  json params{{"target_density", target_density},
              {"chosen_threshold", bb.chosen_threshold},
              {"kept_edges", bb.kept_edges}};
  write_provenance(out_dir, inputs, params);
  return 0;
}

int cmd_curve(const std::string& events_path, const std::string& roster_path,
              const std::string& grid_path, const std::vector<std::size_t>& samples,
              std::size_t repeats, std::uint64_t seed,
              const std::vector<std::string>& reference_paths, const std::string& out_path) {
  const TimeGrid grid = load_grid(grid_path);
  auto in = load_estimate_inputs(events_path, roster_path, grid, Source::app, 0);
  std::vector<WeightedNetwork> references;
  for (const auto& p : reference_paths) references.push_back(WeightedNetwork::read_csv_file(p));
  ResamplingCurve curve = resampling_curve(in.detections, references, samples, repeats, seed);

  std::ostringstream csv;
  csv << "samples,roster_n,computed";
  for (std::size_t r = 0; r < references.size(); ++r)
    csv << ",ref" << r << "_mean,ref" << r << "_lo,ref" << r << "_hi";
  csv << "\n";
  for (const auto& pt : curve.points) {
    csv << pt.required_samples << ',' << pt.roster_size << ',' << (pt.computed ? 1 : 0);
    for (std::size_t r = 0; r < references.size(); ++r)
      csv << ',' << pt.mean_rho[r] << ',' << pt.band_low[r] << ',' << pt.band_high[r];
    csv << "\n";
  }
  atomic_write(out_path, csv.str());
  std::vector<std::string> inputs = {events_path, roster_path};
  inputs.insert(inputs.end(), reference_paths.begin(), reference_paths.end());
  json params{{"samples", samples}, {"repeats", repeats}, {"seed", seed}};
  atomic_write(out_path + ".prov.json", make_provenance(inputs, params).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proximity-network estimation and validation toolkit"};
  app.require_subcommand(1);

  // simulate
  std::string sim_config, sim_out;
  auto* sim = app.add_subcommand("simulate", "generate synthetic logs with ground truth");
  sim->add_option("--config", sim_config, "simulator config JSON")->required();
  sim->add_option("--out", sim_out, "output directory")->required();

  // ingest
  std::string ing_app, ing_badge, ing_roster, ing_grid, ing_out;
  std::size_t ing_gap = 0;
  auto* ing = app.add_subcommand("ingest", "parse logs, write normalized events + activity");
  ing->add_option("--app-log", ing_app, "app scan log CSV");
  ing->add_option("--badge-log", ing_badge, "badge scan log CSV");
  ing->add_option("--roster", ing_roster, "roster CSV")->required();
  ing->add_option("--grid", ing_grid, "grid config JSON (default: study grid)");
  ing->add_option("--gap-tolerance", ing_gap, "bridge activity gaps up to N bins");
  ing->add_option("--out", ing_out, "output directory")->required();

  // estimate
  std::string est_events, est_roster, est_grid, est_source = "app",
              est_mode = "time_fraction", est_universe = "all", est_out;
  std::size_t est_gap = 0;
  auto* est = app.add_subcommand("estimate", "build a weighted proximity network");
  est->add_option("--events", est_events, "normalized events CSV")->required();
  est->add_option("--roster", est_roster, "roster CSV")->required();
  est->add_option("--grid", est_grid, "grid config JSON");
  est->add_option("--source", est_source, "app|badge");
  est->add_option("--mode", est_mode, "scan_normalized|time_fraction");
  est->add_option("--universe", est_universe, "all|coactive|sampled");
  est->add_option("--gap-tolerance", est_gap, "activity gap tolerance in bins");
  est->add_option("--out", est_out, "output matrix CSV")->required();

  // compare
  std::string cmp_a, cmp_b, cmp_survey, cmp_mapping, cmp_roster, cmp_app_ev, cmp_badge_ev,
      cmp_grid, cmp_universe = "all", cmp_out;
  std::size_t cmp_perms = 10000, cmp_boot = 1000;
  std::uint64_t cmp_seed = 0;
  bool cmp_seed_set = false;
  auto* cmp = app.add_subcommand("compare", "Mantel/CI/edge-match and contingency statistics");
  cmp->add_option("--matrix-a", cmp_a, "weighted matrix CSV")->required();
  cmp->add_option("--matrix-b", cmp_b, "weighted matrix CSV")->required();
  cmp->add_option("--survey", cmp_survey, "survey CSV (enables backbone comparison)");
  cmp->add_option("--mapping", cmp_mapping, "name,participant resolution CSV");
  cmp->add_option("--roster", cmp_roster, "roster CSV");
  cmp->add_option("--app-events", cmp_app_ev, "app events (enables contingency)");
  cmp->add_option("--badge-events", cmp_badge_ev, "badge events (enables contingency)");
  cmp->add_option("--grid", cmp_grid, "grid config JSON");
  cmp->add_option("--universe", cmp_universe, "contingency universe: all|coactive|sampled");
  cmp->add_option("--permutations", cmp_perms, "Mantel permutations");
  cmp->add_option("--bootstrap", cmp_boot, "bootstrap replicates");
  cmp->add_option("--seed", cmp_seed, "RNG seed")->each([&](const std::string&) {
    cmp_seed_set = true;
  });
  cmp->add_option("--out", cmp_out, "output stats JSON")->required();

  // backbone
  std::string bb_matrix, bb_survey, bb_mapping, bb_roster, bb_out;
  double bb_density = 0.0;
  auto* bb = app.add_subcommand("backbone", "density-matched disparity-filter backbone");
  bb->add_option("--matrix", bb_matrix, "weighted matrix CSV")->required();
  bb->add_option("--target-density", bb_density, "explicit target density");
  bb->add_option("--survey", bb_survey, "survey CSV providing the target density");
  bb->add_option("--mapping", bb_mapping, "name,participant resolution CSV");
  bb->add_option("--roster", bb_roster, "roster CSV");
  bb->add_option("--out", bb_out, "output directory")->required();

  // curve
  std::string cur_events, cur_roster, cur_grid, cur_out;
  std::vector<std::size_t> cur_samples;
  std::vector<std::string> cur_refs;
  std::size_t cur_repeats = 1000;
  std::uint64_t cur_seed = 0;
  bool cur_seed_set = false;
  auto* cur = app.add_subcommand("curve", "resampling-bias curve over sample counts");
  cur->add_option("--events", cur_events, "app events CSV")->required();
  cur->add_option("--roster", cur_roster, "roster CSV")->required();
  cur->add_option("--grid", cur_grid, "grid config JSON");
  cur->add_option("--samples", cur_samples, "required sample counts, ascending")
      ->required()
      ->delimiter(',');
  cur->add_option("--repeats", cur_repeats, "resampling repeats per point");
  cur->add_option("--references", cur_refs, "reference matrix CSVs")
      ->required()
      ->delimiter(',');
  cur->add_option("--seed", cur_seed, "RNG seed")->each([&](const std::string&) {
    cur_seed_set = true;
  });
  cur->add_option("--out", cur_out, "output curve CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(sim_config, sim_out);
    if (ing->parsed())
      return cmd_ingest(ing_app, ing_badge, ing_roster, ing_grid, ing_gap, ing_out);
    if (est->parsed())
      return cmd_estimate(est_events, est_roster, est_grid, est_source, est_mode,
                          est_universe, est_gap, est_out);
    if (cmp->parsed()) {
      if (!cmp_seed_set) throw ConfigError("compare requires an explicit --seed");
      return cmd_compare(cmp_a, cmp_b, cmp_survey, cmp_mapping, cmp_roster, cmp_app_ev,
                         cmp_badge_ev, cmp_grid, cmp_universe, cmp_perms, cmp_boot, cmp_seed,
                         cmp_out);
    }
    if (bb->parsed())
      return cmd_backbone(bb_matrix, bb_density, bb_survey, bb_mapping, bb_roster, bb_out);
    if (cur->parsed()) {
      if (!cur_seed_set) throw ConfigError("curve requires an explicit --seed");
      return cmd_curve(cur_events, cur_roster, cur_grid, cur_samples, cur_repeats, cur_seed,
                       cur_refs, cur_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const StatsError& e) {
    std::cerr << "statistics error: " << e.what() << "\n";
    return kExitStats;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
