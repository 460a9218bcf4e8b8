#pragma once

#include <limits>
#include <vector>

#include "motifclust/graph.hpp"
#include "motifclust/motif.hpp"

namespace motifclust {

// Misclustering rate: min over label permutations pi of
// sum_k |{i in G_k : pi(est_i) != k}| / n_k, where G_k are the communities of
// `truth` (all of which must be non-empty).  Lies in [0, K]; 0 iff the
// labelings agree up to permutation.  The estimate may leave some of the K
// labels unused (an unused label simply cannot match anything).  Exhaustive
// permutation search for K <= 8, Hungarian assignment beyond; both paths
// optimize the identical objective and, for community sizes whose product
// fits 49 bits, use exact integer arithmetic so they agree bitwise.
// Throws LengthMismatch (different n), KMismatch (different K).
double miscluster_rate(const CommunityLabels& estimated, const CommunityLabels& truth);

// Pair-counting adjusted Rand index in [-1, 1].  Degenerate tables where the
// maximum index equals its expectation (e.g. both partitions trivial) return
// 1.  Throws LengthMismatch.
double adjusted_rand_index(const CommunityLabels& a, const CommunityLabels& b);

// Mutual information over sqrt of the entropy product, natural logs, in
// [0, 1].  Convention for zero entropies: 1 when both partitions are
// single-cluster, 0 when only one is.  Throws LengthMismatch.
double normalized_mutual_information(const CommunityLabels& a, const CommunityLabels& b);

// Newman weighted modularity of a partition:
// Q = (1/2m) sum_ij [A_ij - d_i d_j / 2m] 1{g_i = g_j} with d_i = sum_j A_ij
// and 2m the total weight.  Works on any symmetric nonnegative matrix; the
// experiment harness feeds it the weighted motif adjacency matrix.  Throws
// ZeroWeight when the total weight is 0, ShapeMismatch / LabelMismatch on
// inconsistent inputs.
double modularity(const Matrix& weights, const CommunityLabels& labels);
double modularity(const WeightedGraph& graph, const CommunityLabels& labels);
double modularity(const MotifMatrix& motif, const CommunityLabels& labels);

// Spectral norm of (sample - population), i.e. the largest |eigenvalue| of
// the symmetric difference.  Callers comparing against an expectation should
// pass the population matrix with its diagonal zeroed, matching the zero
// diagonal of any sampled matrix.  Throws ShapeMismatch, NotSymmetric.
double spectral_deviation(const Matrix& sample, const Matrix& population);

// Closed-form diagnostic quantities for a balanced simple-form model with
// edge density p, weight mean alpha.  These are order-of-magnitude
// diagnostics with all unspecified constants set to 1, never guarantees.
struct BoundReport {
  double tau_max = 0.0;      // n p^2, the expected motif degree scale
  double d = 0.0;            // concentration scale D = tau_max^2 * n * alpha * p
  double motif_bound = 0.0;  // K^3 / (n alpha p)
  double edge_bound = 0.0;   // max(motif_bound, K^3 log n / (n alpha p)^2 adjusted)
  bool regime_ok = false;    // alpha <= log n / (n p)  and  p >= sqrt(log n / n)
  bool motif_better = false; // motif_bound < edge_bound

  // Measured quantities a caller may fill in alongside the closed forms.
  double spectral_dev = std::numeric_limits<double>::quiet_NaN();
  double eigengap_analytic = std::numeric_limits<double>::quiet_NaN();
};

// Evaluates the closed forms above; requires n, k, p, alpha > 0 and performs
// no validation beyond that assumption.
BoundReport theoretical_bounds(double n, double k, double p, double alpha);

// Plug-in connectivity estimate from a motif adjacency matrix and estimated
// labels: entry (q, l) averages m over all ordered node pairs with one
// endpoint in each community -- including i = j pairs on diagonal blocks, so
// a zero diagonal biases diagonal entries by the factor (1 - 1/n_q).  Throws
// EmptyCluster (via label validation), ShapeMismatch.
Matrix estimate_connectivity(const Matrix& motif_values, const CommunityLabels& labels);
Matrix estimate_connectivity(const MotifMatrix& motif, const CommunityLabels& labels);

namespace detail {

// Minimum-cost perfect assignment (Hungarian algorithm, O(k^3)): returns the
// column matched to each row.
std::vector<int> min_cost_assignment(const Matrix& cost);

// The two search strategies behind miscluster_rate, exposed for equivalence
// testing.  `counts` is the truth-by-estimate contingency table and `sizes`
// the truth community sizes.
double miscluster_rate_exhaustive(const Matrix& counts, const std::vector<int>& sizes);
double miscluster_rate_hungarian(const Matrix& counts, const std::vector<int>& sizes);

}  // namespace detail

}  // namespace motifclust
