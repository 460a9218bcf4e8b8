#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace motifclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
};

// An undirected weighted graph on nodes 0..n-1, stored dense.  Invariants:
// the weight matrix is symmetric with zero diagonal and nonnegative entries.
// Nodes keep the external ids they were loaded with (identity by default);
// internal indices are always contiguous.
class WeightedGraph {
 public:
  // Takes ownership of a symmetric nonnegative matrix with zero diagonal.
  // Throws NotSymmetric / InvalidParam when the invariants fail.
  explicit WeightedGraph(Matrix weights);

  // Builds a graph on nodes 0..n-1 from an edge list.  Throws SelfLoop,
  // DuplicateEdge (in either orientation), NonPositiveWeight, InvalidParam
  // (endpoint out of range), EmptyGraph (n < 1).
  static WeightedGraph from_edges(int n, const std::vector<Edge>& edges);

  int size() const { return static_cast<int>(weights_.rows()); }
  const Matrix& weights() const { return weights_; }
  double weight(int u, int v) const { return weights_(u, v); }

  // Neighbors of u in ascending index order.
  const std::vector<int>& neighbors(int u) const {
    return adjacency_[static_cast<std::size_t>(u)];
  }
  int degree(int u) const {
    return static_cast<int>(adjacency_[static_cast<std::size_t>(u)].size());
  }

  // External id of internal node i (strictly increasing in i).
  const std::vector<std::int64_t>& node_ids() const { return node_ids_; }

 private:
  friend WeightedGraph load_edge_list(const std::string& path);

  Matrix weights_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::int64_t> node_ids_;
};

// Reads a whitespace-separated "u v w" edge list.  Blank lines and lines
// starting with '#' are skipped.  Node ids are arbitrary nonnegative
// integers; they are mapped to contiguous internal indices in increasing id
// order and preserved in node_ids().  Throws ParseError (with 1-based line
// numbers), SelfLoop, DuplicateEdge, NonPositiveWeight, EmptyGraph (no
// edges), IoError.
WeightedGraph load_edge_list(const std::string& path);

// Writes the nonzero upper triangle as "u v w" lines with external ids, in
// ascending (u, v) order.  Weights use the shortest decimal form that parses
// back to the same double, so write/load round-trips are exact.
void write_edge_list(const WeightedGraph& graph, const std::string& path);

// A hard community assignment: values[i] in 1..k for each node i.
struct CommunityLabels {
  std::vector<int> values;
  int k = 0;

  int size() const { return static_cast<int>(values.size()); }

  // Throws LabelMismatch when a value falls outside 1..k or k < 1, and
  // EmptyCluster when some community in 1..k has no members.
  void validate() const;

  // Member count per community, indexed 0..k-1.
  std::vector<int> community_sizes() const;

  bool balanced() const;
};

// n nodes split into k communities of size n/k, remainder going to the
// lowest-numbered communities: labels 1,..,1,2,..,2,...  Throws KOutOfRange.
CommunityLabels balanced_labels(int n, int k);

// The n-by-k 0/1 membership matrix Theta with Theta(i, g_i - 1) = 1.
Matrix membership_matrix(const CommunityLabels& labels);

// Random permutation of the assignment vector (Fisher-Yates on the
// rng_domain::kLabelShuffle stream); community sizes are preserved.
CommunityLabels shuffled_labels(const CommunityLabels& labels,
                                std::uint64_t seed);

// Reads one integer label per line (same blank/'#' skipping as edge lists);
// k is the maximum label seen.  Throws ParseError (bad token, no entries,
// label < 1), EmptyCluster (a label in 1..k never appears), IoError.
CommunityLabels load_labels(const std::string& path);

// Writes one label per line.
void write_labels(const CommunityLabels& labels, const std::string& path);

}  // namespace motifclust
