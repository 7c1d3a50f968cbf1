#include "proxnet/backbone.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "proxnet/error.hpp"

namespace proxnet {

BinaryNetwork symmetrize(const DirectedSurveyNetwork& survey) {
  const std::size_t n = survey.size();
  BinaryNetwork out = BinaryNetwork::empty(survey.roster());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (survey.at(i, j) || survey.at(j, i)) out.set_edge(i, j);
  return out;
}

std::vector<EdgeSignificance> edge_alphas(const WeightedNetwork& w) {
  const std::size_t n = w.size();
  std::vector<double> strength(n, 0.0);
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || w.at(i, j) <= 0.0) continue;
      strength[i] += w.at(i, j);
      ++degree[i];
    }
  }
  auto alpha_from = [&](std::size_t node, double weight) {
    if (degree[node] < 2) return 1.0;  // degree-1 endpoints never significant
    const double p = weight / strength[node];
    return std::pow(1.0 - p, double(degree[node] - 1));
  };
  std::vector<EdgeSignificance> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double weight = w.at(i, j);
      if (weight <= 0.0) continue;
      EdgeSignificance e;
      e.i = i;
      e.j = j;
      e.weight = weight;
      e.alpha_from_i = alpha_from(i, weight);
      e.alpha_from_j = alpha_from(j, weight);
      e.alpha = std::min(e.alpha_from_i, e.alpha_from_j);
      out.push_back(e);
    }
  }
  return out;
}

BinaryNetwork backbone_extract(const WeightedNetwork& w, double alpha_threshold) {
  if (alpha_threshold < 0.0 || alpha_threshold > 1.0)
    throw ConfigError("alpha threshold must lie in [0,1]");
  BinaryNetwork out = BinaryNetwork::empty(w.roster());
  for (const auto& e : edge_alphas(w))
    if (e.alpha < alpha_threshold) out.set_edge(e.i, e.j);
  return out;
}

DensityMatchedBackbone density_matched_backbone(const WeightedNetwork& w,
                                                double target_density) {
  const std::size_t n = w.size();
  if (n < 2) throw StatsError("need at least 2 nodes");
  if (target_density <= 0.0 || target_density > 1.0)
    throw ConfigError("target density must lie in (0,1]");
  const std::size_t n_pairs = n * (n - 1) / 2;
  const std::size_t target =
      static_cast<std::size_t>(std::llround(target_density * double(n_pairs)));
  auto edges = edge_alphas(w);
  if (edges.size() < target)
    throw StatsError("only " + std::to_string(edges.size()) +
                     " positive-weight edges available, need " + std::to_string(target));
  std::sort(edges.begin(), edges.end(), [](const EdgeSignificance& a, const EdgeSignificance& b) {
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    if (a.weight != b.weight) return a.weight > b.weight;
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  DensityMatchedBackbone out{BinaryNetwork::empty(w.roster()), 1.0, target};
  for (std::size_t k = 0; k < target; ++k) {
    out.network.set_edge(edges[k].i, edges[k].j);
    out.chosen_threshold = edges[k].alpha;
  }
  return out;
}

double density(const BinaryNetwork& net) {
  const std::size_t n = net.size();
  if (n < 2) throw StatsError("density needs at least 2 nodes");
  return double(net.edge_count()) / double(n * (n - 1) / 2);
}

double density(const WeightedNetwork& net) {
  const std::size_t n = net.size();
  if (n < 2) throw StatsError("density needs at least 2 nodes");
  const auto ut = net.upper_triangle();
  double sum = 0;
  for (double v : ut) sum += v;
  return sum / double(ut.size());
}

void write_edge_list(std::ostream& os, const WeightedNetwork& w,
                     const std::vector<EdgeSignificance>& edges) {
  os << "i,j,alpha,weight\n";
  for (const auto& e : edges) {
    os << w.roster()[e.i] << ',' << w.roster()[e.j] << ',' << e.alpha << ',' << e.weight
       << "\n";
  }
}

void write_graphml(std::ostream& os, const BinaryNetwork& net) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
     << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (const auto& label : net.roster()) os << "    <node id=\"" << label << "\"/>\n";
  for (const auto& [i, j] : net.edges()) {
    os << "    <edge source=\"" << net.roster()[i] << "\" target=\"" << net.roster()[j]
       << "\"/>\n";
  }
  os << "  </graph>\n</graphml>\n";
}

}  // namespace proxnet
