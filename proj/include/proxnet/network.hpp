#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace proxnet {

// Symmetric weighted network with zero diagonal and weights in [0,1].
// Construction validates the invariants (DataError on violation).
class WeightedNetwork {
 public:
  WeightedNetwork(std::vector<std::string> roster, std::vector<double> weights);

  std::size_t size() const { return roster_.size(); }
  const std::vector<std::string>& roster() const { return roster_; }
  double at(std::size_t i, std::size_t j) const { return weights_[i * size() + j]; }
  const std::vector<double>& data() const { return weights_; }

  // Upper-triangle entries in (i<j) row-major order, n(n-1)/2 values.
  std::vector<double> upper_triangle() const;

  void write_csv(std::ostream& os) const;
  static WeightedNetwork read_csv(std::istream& is);
  static WeightedNetwork read_csv_file(const std::string& path);

 private:
  std::vector<std::string> roster_;
  std::vector<double> weights_;  // row-major n*n
};

// Symmetric binary network with zero diagonal.
class BinaryNetwork {
 public:
  BinaryNetwork(std::vector<std::string> roster, std::vector<std::uint8_t> adjacency);
  static BinaryNetwork empty(std::vector<std::string> roster);

  std::size_t size() const { return roster_.size(); }
  const std::vector<std::string>& roster() const { return roster_; }
  bool at(std::size_t i, std::size_t j) const { return adjacency_[i * size() + j] != 0; }
  void set_edge(std::size_t i, std::size_t j);

  std::size_t edge_count() const;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;  // i<j, sorted
  std::vector<double> upper_triangle() const;

 private:
  std::vector<std::string> roster_;
  std::vector<std::uint8_t> adjacency_;
};

// Directed nomination network (row = nominator); out-degree capped at 5.
class DirectedSurveyNetwork {
 public:
  DirectedSurveyNetwork(std::vector<std::string> roster, std::vector<std::uint8_t> adjacency);
  static DirectedSurveyNetwork empty(std::vector<std::string> roster);

  std::size_t size() const { return roster_.size(); }
  const std::vector<std::string>& roster() const { return roster_; }
  bool at(std::size_t i, std::size_t j) const { return adjacency_[i * size() + j] != 0; }
  void add_nomination(std::size_t from, std::size_t to);

 private:
  std::vector<std::string> roster_;
  std::vector<std::uint8_t> adjacency_;
};

}  // namespace proxnet
