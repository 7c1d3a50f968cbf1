// Python bindings for the proximity-network toolkit. Exposes the core
// statistics in-memory and the file-based pipeline operations (simulate,
// estimate, matrix I/O) with the same conventions as the CLI.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlohmann/json.hpp"
#include "proxnet/backbone.hpp"
#include "proxnet/error.hpp"
#include "proxnet/estimate.hpp"
#include "proxnet/ingest.hpp"
#include "proxnet/pipeline.hpp"
#include "proxnet/sim.hpp"
#include "proxnet/stats.hpp"
#include "proxnet/time_grid.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace proxnet;

namespace {

py::dict table_stats_dict(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                          std::uint64_t d) {
  const TableStats s = table_stats({a, b, c, d});
  py::dict out;
  out["phi"] = s.phi;
  out["chi2"] = s.chi2;
  out["p_value"] = s.p_value;
  out["odds_A"] = s.odds_A;
  out["odds_B"] = s.odds_B;
  out["sensitivity"] = s.sensitivity;
  out["specificity"] = s.specificity;
  return out;
}

py::dict mantel_dict(const MantelResult& m) {
  py::dict out;
  out["rho"] = m.rho;
  out["p_value"] = m.p_value;
  out["n_permutations"] = m.n_permutations;
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

py::tuple matrix_tuple(const WeightedNetwork& net) {
  return py::make_tuple(net.roster(), net.data());
}

WeightedNetwork matrix_from(const std::vector<std::string>& roster,
                            const std::vector<double>& weights) {
  return WeightedNetwork(roster, weights);
}

py::dict simulate_files(const std::string& config_path, const std::string& out_dir) {
  const SimConfig config = SimConfig::from_json(nlohmann::json::parse(slurp(config_path)));
  fs::create_directories(out_dir);
  const SimResult res = simulate(config);

  std::ostringstream app_csv, badge_csv, roster_csv, truth_csv;
  write_scan_log(app_csv, res.app_log);
  write_scan_log(badge_csv, res.badge_log);
  roster_csv << "participant,app_id,badge_id,platform\n";
  for (const auto& p : res.roster)
    roster_csv << p.label << ',' << p.app_id.value << ',' << p.badge_id.value << ','
               << platform_to_string(p.platform) << "\n";
  truth_network(res.truth).write_csv(truth_csv);

  atomic_write((fs::path(out_dir) / "app_log.csv").string(), app_csv.str());
  atomic_write((fs::path(out_dir) / "badge_log.csv").string(), badge_csv.str());
  atomic_write((fs::path(out_dir) / "roster.csv").string(), roster_csv.str());
  atomic_write((fs::path(out_dir) / "truth.csv").string(), truth_csv.str());

  py::dict out;
  out["app_events"] = res.app_log.size();
  out["badge_events"] = res.badge_log.size();
  out["n_bins"] = res.truth.n_bins;
  out["roster"] = res.truth.roster_labels;
  return out;
}

py::tuple estimate_matrix(const std::string& events_path, const std::string& roster_path,
                          const std::string& grid_path, const std::string& source,
                          const std::string& mode, const std::string& universe,
                          std::size_t gap_tolerance) {
  const TimeGrid grid = load_grid(grid_path);
  const Source src = source_from_string(source);
  const auto roster = parse_roster(roster_path);
  auto report = parse_scan_log(events_path, src);
  if (!report.rejected.empty())
    throw ParseError(std::to_string(report.rejected.size()) + " malformed rows in " +
                     events_path);
  const auto dg = build_detection_grid(report.events, grid, roster, src);
  const auto timelines = activity_timelines(report.events, grid, roster, src, gap_tolerance);
  return matrix_tuple(weighted_network(dg, timelines, weight_mode_from_string(mode),
                                       universe_from_string(universe)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "proximity-network estimation and validation core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<StatsError>(m, "StatsError", PyExc_ValueError);

  m.def("sha256_hex", &sha256_hex, py::arg("data"),
        "Lowercase hex SHA-256 of a byte string.");
  m.def(
      "hash_id",
      [](const std::string& raw, const std::string& salt) { return hash_id(raw, salt).value; },
      py::arg("raw_identifier"), py::arg("salt"),
      "Salted one-way digest of a device identifier.");

  m.def("connection_strength", &connection_strength_eq1, py::arg("n_ij"), py::arg("n_ji"),
        py::arg("n_i"), py::arg("n_j"),
        "Average connection strength (n_ij + n_ji) / (n_i + n_j); zero when "
        "neither device scanned.");

  m.def("table_stats", &table_stats_dict, py::arg("a"), py::arg("b"), py::arg("c"),
        py::arg("d"),
        "Association statistics for a pooled 2x2 detection table: phi, chi2, "
        "p-value, per-source odds, sensitivity, specificity.");

  m.def(
      "spearman",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        return spearman(x, y);
      },
      py::arg("x"), py::arg("y"), "Spearman rank correlation (average ranks on ties).");

  m.def(
      "mantel",
      [](const std::vector<double>& ut_a, const std::vector<double>& ut_b, std::size_t n,
         std::size_t permutations, std::uint64_t seed) {
        return mantel_dict(mantel(ut_a, ut_b, n, permutations, seed));
      },
      py::arg("upper_a"), py::arg("upper_b"), py::arg("n"), py::arg("permutations"),
      py::arg("seed"),
      "Mantel test over upper-triangle vectors with random node relabelings.");

  m.def(
      "mantel_exhaustive",
      [](const std::vector<double>& ut_a, const std::vector<double>& ut_b, std::size_t n) {
        return mantel_dict(mantel_exhaustive(ut_a, ut_b, n));
      },
      py::arg("upper_a"), py::arg("upper_b"), py::arg("n"),
      "Mantel test with all n! relabelings enumerated (n <= 8).");

  m.def(
      "mantel_bootstrap_ci",
      [](const std::vector<double>& ut_a, const std::vector<double>& ut_b,
         std::size_t n_boot, double level, std::uint64_t seed) {
        return mantel_bootstrap_ci(ut_a, ut_b, n_boot, level, seed);
      },
      py::arg("upper_a"), py::arg("upper_b"), py::arg("n_boot"), py::arg("level"),
      py::arg("seed"), "Percentile bootstrap interval for the dyad-level correlation.");

  m.def(
      "edge_alphas",
      [](const std::vector<std::string>& roster, const std::vector<double>& weights) {
        py::list out;
        for (const auto& e : edge_alphas(matrix_from(roster, weights)))
          out.append(py::make_tuple(e.i, e.j, e.alpha, e.weight));
        return out;
      },
      py::arg("roster"), py::arg("weights"),
      "Disparity-filter significance (i, j, alpha, weight) per positive edge.");

  m.def(
      "backbone_edges",
      [](const std::vector<std::string>& roster, const std::vector<double>& weights,
         double target_density) {
        const auto bb =
            density_matched_backbone(matrix_from(roster, weights), target_density);
        py::dict out;
        out["edges"] = bb.network.edges();
        out["alpha_threshold"] = bb.chosen_threshold;
        return out;
      },
      py::arg("roster"), py::arg("weights"), py::arg("target_density"),
      "Density-matched disparity-filter backbone; keeps exactly "
      "round(target_density * n(n-1)/2) edges.");

  m.def(
      "weighted_density",
      [](const std::vector<std::string>& roster, const std::vector<double>& weights) {
        return density(matrix_from(roster, weights));
      },
      py::arg("roster"), py::arg("weights"), "Mean upper-triangle weight.");

  m.def(
      "read_matrix",
      [](const std::string& path) {
        return matrix_tuple(WeightedNetwork::read_csv_file(path));
      },
      py::arg("path"), "(roster, row-major weights) from a matrix CSV.");

  m.def(
      "upper_triangle",
      [](const std::vector<std::string>& roster, const std::vector<double>& weights) {
        return matrix_from(roster, weights).upper_triangle();
      },
      py::arg("roster"), py::arg("weights"),
      "Upper-triangle entries in (i<j) row-major order.");

  m.def("simulate", &simulate_files, py::arg("config_path"), py::arg("out_dir"),
        "Generate synthetic scan logs plus ground truth into a directory "
        "(app_log.csv, badge_log.csv, roster.csv, truth.csv).");

  m.def("estimate_matrix", &estimate_matrix, py::arg("events_path"), py::arg("roster_path"),
        py::arg("grid_path") = "", py::arg("source") = "app",
        py::arg("mode") = "time_fraction", py::arg("universe") = "all",
        py::arg("gap_tolerance") = 0,
        "Weighted proximity network from a scan log: (roster, row-major "
        "weights). Empty grid_path selects the built-in study grid.");
}
