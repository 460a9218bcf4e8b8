#include "motifclust/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "motifclust/errors.hpp"

namespace motifclust {

namespace {

void require_same_length(const CommunityLabels& a, const CommunityLabels& b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("labelings cover " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()) + " nodes");
  }
}

void require_labels_in_range(const CommunityLabels& labels) {
  if (labels.k < 1) throw LabelMismatch("k must be >= 1, got " + std::to_string(labels.k));
  for (std::size_t i = 0; i < labels.values.size(); ++i) {
    const int v = labels.values[i];
    if (v < 1 || v > labels.k) {
      throw LabelMismatch("node " + std::to_string(i) + " has label " + std::to_string(v) +
                          " outside 1.." + std::to_string(labels.k));
    }
  }
}

// Truth-by-estimate contingency table.
Matrix contingency(const CommunityLabels& truth, const CommunityLabels& estimated) {
  Matrix counts = Matrix::Zero(truth.k, estimated.k);
  for (int i = 0; i < truth.size(); ++i) {
    counts(truth.values[static_cast<std::size_t>(i)] - 1,
           estimated.values[static_cast<std::size_t>(i)] - 1) += 1.0;
  }
  return counts;
}

// Matched-community score table: maximizing sum_t weight(t, perm(t)) over
// permutations and mapping through `scale` yields L = K - best/scale.  When
// the product of community sizes fits in 49 bits the weights are exact
// integers (value * product-of-other-sizes), making every downstream
// comparison and sum exact; otherwise plain fractions are used.
struct ScoreTable {
  Matrix weight;
  double scale = 1.0;
};

ScoreTable make_score_table(const Matrix& counts, const std::vector<int>& sizes) {
  const int k = static_cast<int>(counts.rows());
  double product = 1.0;
  for (int s : sizes) product *= static_cast<double>(s);
  ScoreTable table;
  table.weight.resize(k, k);
  if (product <= 0x1p49) {
    table.scale = product;
    for (int t = 0; t < k; ++t) {
      const double factor = product / static_cast<double>(sizes[static_cast<std::size_t>(t)]);
      for (int e = 0; e < k; ++e) table.weight(t, e) = counts(t, e) * factor;
    }
  } else {
    table.scale = 1.0;
    for (int t = 0; t < k; ++t) {
      for (int e = 0; e < k; ++e) {
        table.weight(t, e) = counts(t, e) / static_cast<double>(sizes[static_cast<std::size_t>(t)]);
      }
    }
  }
  return table;
}

double comb2(double x) { return 0.5 * x * (x - 1.0); }

}  // namespace

namespace detail {

std::vector<int> min_cost_assignment(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<int> matched(static_cast<std::size_t>(m) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    matched[0] = i;
    int j0 = 0;
    std::vector<double> min_slack(static_cast<std::size_t>(m) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = matched[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double slack = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                             v[static_cast<std::size_t>(j)];
        if (slack < min_slack[static_cast<std::size_t>(j)]) {
          min_slack[static_cast<std::size_t>(j)] = slack;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (min_slack[static_cast<std::size_t>(j)] < delta) {
          delta = min_slack[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(matched[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          min_slack[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (matched[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      matched[static_cast<std::size_t>(j0)] = matched[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j) {
    if (matched[static_cast<std::size_t>(j)] > 0) {
      assignment[static_cast<std::size_t>(matched[static_cast<std::size_t>(j)]) - 1] = j - 1;
    }
  }
  return assignment;
}

double miscluster_rate_exhaustive(const Matrix& counts, const std::vector<int>& sizes) {
  const int k = static_cast<int>(counts.rows());
  const ScoreTable table = make_score_table(counts, sizes);
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1.0;
  do {
    double score = 0.0;
    for (int t = 0; t < k; ++t) score += table.weight(t, perm[static_cast<std::size_t>(t)]);
    best = std::max(best, score);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(k) - best / table.scale;
}

double miscluster_rate_hungarian(const Matrix& counts, const std::vector<int>& sizes) {
  const int k = static_cast<int>(counts.rows());
  const ScoreTable table = make_score_table(counts, sizes);
  const std::vector<int> assignment = min_cost_assignment(-table.weight);
  double best = 0.0;
  for (int t = 0; t < k; ++t) best += table.weight(t, assignment[static_cast<std::size_t>(t)]);
  return static_cast<double>(k) - best / table.scale;
}

}  // namespace detail

double miscluster_rate(const CommunityLabels& estimated, const CommunityLabels& truth) {
  require_same_length(estimated, truth);
  if (estimated.k != truth.k) {
    throw KMismatch("estimate uses k=" + std::to_string(estimated.k) + ", truth has k=" +
                    std::to_string(truth.k));
  }
  truth.validate();                    // denominators need non-empty communities
  require_labels_in_range(estimated);  // but empty estimated clusters are fine
  const Matrix counts = contingency(truth, estimated);
  const std::vector<int> sizes = truth.community_sizes();
  return truth.k <= 8 ? detail::miscluster_rate_exhaustive(counts, sizes)
                      : detail::miscluster_rate_hungarian(counts, sizes);
}

double adjusted_rand_index(const CommunityLabels& a, const CommunityLabels& b) {
  require_same_length(a, b);
  require_labels_in_range(a);
  require_labels_in_range(b);
  const Matrix counts = contingency(a, b);
  double pairs_in_cells = 0.0;
  for (int i = 0; i < counts.rows(); ++i) {
    for (int j = 0; j < counts.cols(); ++j) pairs_in_cells += comb2(counts(i, j));
  }
  double pairs_a = 0.0;
  for (int i = 0; i < counts.rows(); ++i) pairs_a += comb2(counts.row(i).sum());
  double pairs_b = 0.0;
  for (int j = 0; j < counts.cols(); ++j) pairs_b += comb2(counts.col(j).sum());
  const double total_pairs = comb2(static_cast<double>(a.size()));
  const double expected = total_pairs > 0.0 ? pairs_a * pairs_b / total_pairs : 0.0;
  const double max_index = 0.5 * (pairs_a + pairs_b);
  if (max_index == expected) return 1.0;  // both partitions degenerate the same way
  return (pairs_in_cells - expected) / (max_index - expected);
}

double normalized_mutual_information(const CommunityLabels& a, const CommunityLabels& b) {
  require_same_length(a, b);
  require_labels_in_range(a);
  require_labels_in_range(b);
  const Matrix counts = contingency(a, b);
  const double n = static_cast<double>(a.size());
  double h_a = 0.0;
  for (int i = 0; i < counts.rows(); ++i) {
    const double p = counts.row(i).sum() / n;
    if (p > 0.0) h_a -= p * std::log(p);
  }
  double h_b = 0.0;
  for (int j = 0; j < counts.cols(); ++j) {
    const double p = counts.col(j).sum() / n;
    if (p > 0.0) h_b -= p * std::log(p);
  }
  if (h_a <= 0.0 && h_b <= 0.0) return 1.0;  // both single-cluster
  if (h_a <= 0.0 || h_b <= 0.0) return 0.0;
  double mi = 0.0;
  for (int i = 0; i < counts.rows(); ++i) {
    for (int j = 0; j < counts.cols(); ++j) {
      const double nij = counts(i, j);
      if (nij <= 0.0) continue;
      mi += (nij / n) * std::log(n * nij / (counts.row(i).sum() * counts.col(j).sum()));
    }
  }
  return std::clamp(mi / std::sqrt(h_a * h_b), 0.0, 1.0);
}

double modularity(const Matrix& weights, const CommunityLabels& labels) {
  const int n = static_cast<int>(weights.rows());
  if (weights.cols() != n) {
    throw ShapeMismatch("modularity needs a square matrix, got " + std::to_string(n) + "x" +
                        std::to_string(weights.cols()));
  }
  if (labels.size() != n) {
    throw LabelMismatch("labels cover " + std::to_string(labels.size()) + " nodes, matrix has " +
                        std::to_string(n));
  }
  require_labels_in_range(labels);
  const double total = weights.sum();  // 2m
  if (!(total > 0.0)) throw ZeroWeight("total weight must be positive to define modularity");
  const Vector degree = weights.rowwise().sum();
  std::vector<double> within(static_cast<std::size_t>(labels.k), 0.0);
  std::vector<double> degree_sum(static_cast<std::size_t>(labels.k), 0.0);
  for (int i = 0; i < n; ++i) {
    const int c = labels.values[static_cast<std::size_t>(i)] - 1;
    degree_sum[static_cast<std::size_t>(c)] += degree(i);
    for (int j = 0; j < n; ++j) {
      if (labels.values[static_cast<std::size_t>(j)] - 1 == c) within[static_cast<std::size_t>(c)] += weights(i, j);
    }
  }
  double q = 0.0;
  for (int c = 0; c < labels.k; ++c) {
    q += (within[static_cast<std::size_t>(c)] -
          degree_sum[static_cast<std::size_t>(c)] * degree_sum[static_cast<std::size_t>(c)] / total) /
         total;
  }
  if (!(q >= -1.0 - 1e-9 && q <= 1.0 + 1e-9)) {
    throw Error("modularity " + std::to_string(q) + " escaped [-1, 1]");
  }
  return q;
}

double modularity(const WeightedGraph& graph, const CommunityLabels& labels) {
  return modularity(graph.weights(), labels);
}

double modularity(const MotifMatrix& motif, const CommunityLabels& labels) {
  return modularity(motif.values, labels);
}

double spectral_deviation(const Matrix& sample, const Matrix& population) {
  if (sample.rows() != population.rows() || sample.cols() != population.cols() ||
      sample.rows() != sample.cols()) {
    throw ShapeMismatch("spectral deviation needs two square matrices of equal shape");
  }
  if (sample.rows() == 0) return 0.0;
  const Matrix diff = sample - population;
  for (Eigen::Index i = 0; i < diff.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < diff.cols(); ++j) {
      if (std::abs(diff(i, j) - diff(j, i)) > 1e-10) {
        throw NotSymmetric("difference matrix is not symmetric at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(diff, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error("symmetric eigendecomposition did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

BoundReport theoretical_bounds(double n, double k, double p, double alpha) {
  BoundReport report;
  report.tau_max = n * p * p;
  report.d = report.tau_max * report.tau_max * n * alpha * p;
  const double nap = n * alpha * p;
  const double k3 = k * k * k;
  report.motif_bound = k3 / nap;
  const double edge_log_term = k3 * std::log(n) / (nap * nap);
  report.edge_bound = std::max(report.motif_bound, edge_log_term);
  report.regime_ok = alpha <= std::log(n) / (n * p) && p >= std::sqrt(std::log(n) / n);
  report.motif_better = edge_log_term > report.motif_bound;
  return report;
}

Matrix estimate_connectivity(const Matrix& motif_values, const CommunityLabels& labels) {
  const int n = static_cast<int>(motif_values.rows());
  if (motif_values.cols() != n) {
    throw ShapeMismatch("motif matrix must be square, got " + std::to_string(n) + "x" +
                        std::to_string(motif_values.cols()));
  }
  if (labels.size() != n) {
    throw ShapeMismatch("labels cover " + std::to_string(labels.size()) + " nodes, matrix has " +
                        std::to_string(n));
  }
  labels.validate();  // every community must be non-empty
  const int k = labels.k;
  Matrix sums = Matrix::Zero(k, k);
  for (int i = 0; i < n; ++i) {
    const int q = labels.values[static_cast<std::size_t>(i)] - 1;
    for (int j = 0; j < n; ++j) {
      sums(q, labels.values[static_cast<std::size_t>(j)] - 1) += motif_values(i, j);
    }
  }
  const std::vector<int> sizes = labels.community_sizes();
  Matrix estimate(k, k);
  for (int q = 0; q < k; ++q) {
    for (int l = 0; l < k; ++l) {
      // The i = j pairs stay in the denominator on diagonal blocks, exactly
      // as in the plug-in display (hence the (1 - 1/n_q) diagonal bias).
      estimate(q, l) = sums(q, l) / (static_cast<double>(sizes[static_cast<std::size_t>(q)]) *
                                     static_cast<double>(sizes[static_cast<std::size_t>(l)]));
    }
  }
  return estimate;
}

Matrix estimate_connectivity(const MotifMatrix& motif, const CommunityLabels& labels) {
  return estimate_connectivity(motif.values, labels);
}

}  // namespace motifclust
