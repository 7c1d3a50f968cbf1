#pragma once

#include <iosfwd>
#include <vector>

#include "proxnet/network.hpp"

namespace proxnet {

struct EdgeSignificance {
  std::size_t i, j;  // i < j
  double weight;
  double alpha_from_i;
  double alpha_from_j;
  double alpha;  // min of the endpoint values
};

// OR-collapse of directed nominations into undirected edges.
BinaryNetwork symmetrize(const DirectedSurveyNetwork& survey);

// Disparity-filter significance per positive-weight edge:
// alpha_from_i = (1 - w_ij/s_i)^(k_i - 1) for degree k_i >= 2, and 1 for
// degree-1 endpoints. Edges sorted by (i, j).
std::vector<EdgeSignificance> edge_alphas(const WeightedNetwork& w);

// Keep edges with alpha < threshold.
BinaryNetwork backbone_extract(const WeightedNetwork& w, double alpha_threshold);

struct DensityMatchedBackbone {
  BinaryNetwork network;
  double chosen_threshold;  // alpha of the last kept edge
  std::size_t kept_edges;
};

// Keeps exactly round(target_density * n(n-1)/2) edges, chosen by alpha
// ascending (ties: weight descending, then node pair). StatsError when
// fewer positive-weight edges exist than requested.
DensityMatchedBackbone density_matched_backbone(const WeightedNetwork& w,
                                                double target_density);

double density(const BinaryNetwork& net);
// Mean upper-triangle weight.
double density(const WeightedNetwork& net);

// Edge list CSV: i,j,alpha,weight (roster labels).
void write_edge_list(std::ostream& os, const WeightedNetwork& w,
                     const std::vector<EdgeSignificance>& edges);
void write_graphml(std::ostream& os, const BinaryNetwork& net);

}  // namespace proxnet
