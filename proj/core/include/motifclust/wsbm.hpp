#pragma once

#include <cstdint>
#include <vector>

#include "motifclust/graph.hpp"

namespace motifclust {

class RngStream;

// Edge-weight law attached to a block pair.  Weights are drawn only for
// edges that are present, so every law must have positive support.
struct WeightDistribution {
  enum class Kind { kUniform, kChiSquared, kExponential, kConstant };

  Kind kind = Kind::kConstant;
  double param_a = 1.0;  // uniform lower / chi^2 df / exponential rate / constant value
  double param_b = 0.0;  // uniform upper (unused otherwise)

  static WeightDistribution uniform(double lo, double hi);
  static WeightDistribution chi_squared(double df);
  static WeightDistribution exponential(double rate);
  static WeightDistribution constant(double value);

  void validate() const;  // InvalidParam on out-of-domain parameters
  double mean() const;
  double sample(RngStream& rng) const;

  bool operator==(const WeightDistribution&) const = default;
};

// Weighted stochastic block model: edge (i, j) is present with probability
// connectivity(g_i-1, g_j-1) and, when present, carries a weight drawn from
// weights[g_i-1][g_j-1].  Edges are mutually independent.
struct WsbmParams {
  int n = 0;
  int k = 1;
  Matrix connectivity;  // k x k symmetric, entries in [0, 1]
  std::vector<std::vector<WeightDistribution>> weights;  // k x k, symmetric

  // Rank-one-plus-identity connectivity p*lambda*I + p*(1-lambda)*ones with a
  // single weight law: within-community probability p, between p*(1-lambda).
  // Requires p in (0, 1] and lambda in (0, 1).
  static WsbmParams simple_form(int n, int k, double p, double lambda,
                                const WeightDistribution& weight);

  // Two-level model: one (probability, weight law) pair for within-community
  // block entries and one for between.  Requires within_p in (0, 1] and
  // between_p in [0, 1].
  static WsbmParams two_level(int n, int k, double within_p, double between_p,
                              const WeightDistribution& within_weight,
                              const WeightDistribution& between_weight);

  // Arbitrary symmetric connectivity and weight laws.
  static WsbmParams general(int n, int k, Matrix connectivity,
                            std::vector<std::vector<WeightDistribution>> weights);

  void validate() const;  // InvalidParam / ShapeMismatch / NotSymmetric
  const WeightDistribution& weight_dist(int q, int l) const {
    return weights[static_cast<std::size_t>(q)][static_cast<std::size_t>(l)];
  }
};

// True when all within-community (probability, weight law) pairs are equal
// and all between-community pairs are equal -- the family with closed-form
// motif moments.  K = 1 counts (there are no between pairs).
bool two_level_form(const WsbmParams& params);

// Draws one graph.  Labels must match params (size n, k communities).  Each
// node pair has its own counter-based substream keyed by (seed, i, j), so the
// draw is independent of thread count and of the order pairs are visited.
WeightedGraph sample_wsbm(const WsbmParams& params, const CommunityLabels& labels,
                          std::uint64_t seed);

// Expected off-diagonal entries of the triangle motif adjacency matrix under
// a balanced two-level model: h1 for a within-community pair, h2 for a
// between-community pair.  With m = n/K, within probability a and mean weight
// alpha, between probability b and mean weight beta:
//
//   h1 = 3*alpha*a^3*(m-2) + (K-1)*m * a*b^2*(alpha + 2*beta)
//   h2 = 2*(m-1) * a*b^2*(alpha + 2*beta) + (K-2)*m * 3*beta*b^3
//
// (third node in the same community contributes three within edges; a third
// node in another community closes the triangle with two between edges).
// K = 1 yields h2 = 0.  Throws UnsupportedForm unless two_level_form(),
// Unbalanced unless K divides n.
struct MotifMoments {
  double h1 = 0.0;
  double h2 = 0.0;
};
MotifMoments population_motif_moments(const WsbmParams& params);

// Expected off-diagonal entries of the weight matrix itself under the same
// family: e1 = a*alpha within, e2 = b*beta between.
struct EdgeMoments {
  double e1 = 0.0;
  double e2 = 0.0;
};
EdgeMoments population_edge_moments(const WsbmParams& params);

// Population (conditional-expectation) matrices for given labels:
//   script_w(i, j)       = B(g_i, g_j) * mean weight(g_i, g_j)   (any model)
//   script_w_motif(i, j) = h1 if g_i == g_j else h2              (two-level)
// Both follow the rank-K convention of keeping the block value on the
// diagonal; the entrywise expectations of a sample are the same matrices
// with the diagonal zeroed.  script_w_motif requires the closed-form family
// and balanced labels.
struct PopulationMatrices {
  Matrix script_w;
  Matrix script_w_motif;
  double h1 = 0.0;
  double h2 = 0.0;
};
PopulationMatrices population_matrices(const WsbmParams& params,
                                       const CommunityLabels& labels);

// Population weight matrix alone; works for any connectivity/weights.
Matrix edge_population(const WsbmParams& params, const CommunityLabels& labels);

// K-th largest eigenvalue (by magnitude) of the balanced population motif
// matrix, in closed form: (n/K) * (h1 - h2).  Same preconditions as
// population_motif_moments.
double analytic_eigengap(const WsbmParams& params);

// Same quantity for the plain weight matrix: (n/K) * (e1 - e2).
double analytic_eigengap_edge(const WsbmParams& params);

// Top-K eigenvectors of the population motif matrix (columns orthonormal).
// Rows of the result are identical within a community and sqrt(1/n_q + 1/n_l)
// apart across communities q != l.  Throws RankDeficient when the matrix has
// fewer than K eigenvalues separated from zero (h1 == h2).
Matrix population_eigvecs(const WsbmParams& params, const CommunityLabels& labels);

}  // namespace motifclust
