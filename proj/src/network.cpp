#include "proxnet/network.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "proxnet/error.hpp"

namespace proxnet {

namespace {

void check_roster(const std::vector<std::string>& roster, std::size_t n_cells) {
  const std::size_t n = roster.size();
  if (n_cells != n * n) throw DataError("matrix size does not match roster");
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

WeightedNetwork::WeightedNetwork(std::vector<std::string> roster, std::vector<double> weights)
    : roster_(std::move(roster)), weights_(std::move(weights)) {
  check_roster(roster_, weights_.size());
  const std::size_t n = roster_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (weights_[i * n + i] != 0.0) throw DataError("nonzero diagonal in weighted network");
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = weights_[i * n + j];
      if (!std::isfinite(w) || w < 0.0 || w > 1.0)
        throw DataError("weight out of [0,1] at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      if (w != weights_[j * n + i]) throw DataError("asymmetric weighted network");
    }
  }
}

std::vector<double> WeightedNetwork::upper_triangle() const {
  const std::size_t n = size();
  std::vector<double> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(at(i, j));
  return out;
}

void WeightedNetwork::write_csv(std::ostream& os) const {
  const std::size_t n = size();
  for (std::size_t j = 0; j < n; ++j) os << (j ? "," : "") << roster_[j];
  os << "\n";
  os << std::fixed << std::setprecision(6);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) os << (j ? "," : "") << at(i, j);
    os << "\n";
  }
}

WeightedNetwork WeightedNetwork::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty matrix file");
  std::vector<std::string> roster = split_csv_row(line);
  const std::size_t n = roster.size();
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(is, line))
      throw ParseError("matrix row " + std::to_string(i + 1) + " missing");
    auto cells = split_csv_row(line);
    if (cells.size() != n)
      throw ParseError("matrix row " + std::to_string(i + 1) + " has " +
                       std::to_string(cells.size()) + " cells, expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) {
      try {
        w[i * n + j] = std::stod(cells[j]);
      } catch (const std::exception&) {
        throw ParseError("bad matrix cell at row " + std::to_string(i + 1) + " col " +
                         std::to_string(j + 1));
      }
    }
  }
  return WeightedNetwork(std::move(roster), std::move(w));
}

WeightedNetwork WeightedNetwork::read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file: " + path);
  return read_csv(in);
}

BinaryNetwork::BinaryNetwork(std::vector<std::string> roster, std::vector<std::uint8_t> adj)
    : roster_(std::move(roster)), adjacency_(std::move(adj)) {
  check_roster(roster_, adjacency_.size());
  const std::size_t n = roster_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency_[i * n + i]) throw DataError("nonzero diagonal in binary network");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (adjacency_[i * n + j] > 1 || adjacency_[i * n + j] != adjacency_[j * n + i])
        throw DataError("asymmetric or non-binary adjacency");
    }
  }
}

BinaryNetwork BinaryNetwork::empty(std::vector<std::string> roster) {
  const std::size_t n = roster.size();
  return BinaryNetwork(std::move(roster), std::vector<std::uint8_t>(n * n, 0));
}

void BinaryNetwork::set_edge(std::size_t i, std::size_t j) {
  if (i == j) throw DataError("self-edge");
  adjacency_[i * size() + j] = 1;
  adjacency_[j * size() + i] = 1;
}

std::size_t BinaryNetwork::edge_count() const {
  std::size_t c = 0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) c += at(i, j);
  return c;
}

std::vector<std::pair<std::size_t, std::size_t>> BinaryNetwork::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (at(i, j)) out.emplace_back(i, j);
  return out;
}

std::vector<double> BinaryNetwork::upper_triangle() const {
  const std::size_t n = size();
  std::vector<double> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(at(i, j) ? 1.0 : 0.0);
  return out;
}

DirectedSurveyNetwork::DirectedSurveyNetwork(std::vector<std::string> roster,
                                             std::vector<std::uint8_t> adj)
    : roster_(std::move(roster)), adjacency_(std::move(adj)) {
  check_roster(roster_, adjacency_.size());
  const std::size_t n = roster_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency_[i * n + i]) throw DataError("self-nomination");
    std::size_t out_deg = 0;
    for (std::size_t j = 0; j < n; ++j) out_deg += adjacency_[i * n + j] != 0;
    if (out_deg > 5)
      throw DataError("respondent " + roster_[i] + " has " + std::to_string(out_deg) +
                      " nominations (max 5)");
  }
}

DirectedSurveyNetwork DirectedSurveyNetwork::empty(std::vector<std::string> roster) {
  const std::size_t n = roster.size();
  return DirectedSurveyNetwork(std::move(roster), std::vector<std::uint8_t>(n * n, 0));
}

void DirectedSurveyNetwork::add_nomination(std::size_t from, std::size_t to) {
  if (from == to) throw DataError("self-nomination");
  const std::size_t n = size();
  std::size_t out_deg = 0;
  for (std::size_t j = 0; j < n; ++j) out_deg += adjacency_[from * n + j] != 0;
  if (!adjacency_[from * n + to] && out_deg >= 5)
    throw DataError("respondent " + roster_[from] + " exceeds 5 nominations");
  adjacency_[from * n + to] = 1;
}

}  // namespace proxnet
