#pragma once

#include <cstdint>
#include <vector>

#include "motifclust/graph.hpp"

namespace motifclust {

class RngStream;

inline constexpr int kDefaultKMeansRestarts = 20;
inline constexpr int kMaxLloydIterations = 300;

struct EigenPairs {
  Vector values;   // K eigenvalues, descending |value|
  Matrix vectors;  // n x K, orthonormal columns matching values
};

// The K eigenpairs of largest magnitude of a symmetric matrix (symmetry
// checked to 1e-10).  Order: |value| descending, then value descending, then
// position in the ascending spectrum.  Sign convention: the largest-magnitude
// entry of each vector is positive, ties broken by lowest index -- so the
// result is a deterministic function of the input.
EigenPairs top_k_eigen(const Matrix& a, int k);

struct KMeansResult {
  CommunityLabels labels;
  Matrix centers;          // k x d row per cluster
  double objective = 0.0;  // sum of squared point-to-center distances
  int restarts_used = 0;
};

// Best of `restarts` runs of k-means++ initialization followed by Lloyd
// iteration (at most kMaxLloydIterations, stopping at an assignment fixed
// point; an emptied cluster is repaired by reassigning the farthest point
// from its center).  Restart r draws from the (seed, restart=r) substream and
// restarts run in parallel; the winner is the lowest objective, ties going to
// the lowest restart index, so the result is deterministic for any thread
// count.  Throws DegeneratePoints when the rows have fewer than k distinct
// values, KOutOfRange, InvalidParam (restarts < 1).
KMeansResult lloyd_kmeans(const Matrix& points, int k, int restarts, std::uint64_t seed);

// One spectral clustering pass: rows of top_k_eigen(a, k).vectors clustered
// by lloyd_kmeans.  Applied to a motif adjacency matrix this is the
// higher-order method; applied to the weight matrix itself it is the
// edge-based baseline.  Throws DegeneratePoints when the top-k spectrum is
// entirely zero (no signal to cluster, e.g. the zero matrix); other errors
// propagate from the two stages.
CommunityLabels spectral_cluster(const Matrix& a, int k, int restarts, std::uint64_t seed);

namespace detail {

// Single k-means run (one initialization, full Lloyd iteration), exposed so
// tests can watch the objective trace; appends the post-update objective of
// every iteration to *trace when given.
KMeansResult single_kmeans_run(const Matrix& points, int k, RngStream& rng,
                               int max_iterations, std::vector<double>* trace);

}  // namespace detail

}  // namespace motifclust
