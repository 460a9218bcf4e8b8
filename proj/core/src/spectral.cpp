#include "motifclust/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "motifclust/errors.hpp"
#include "motifclust/parallel.hpp"
#include "motifclust/rng.hpp"

namespace motifclust {

namespace {

void require_symmetric(const Matrix& a, double tolerance) {
  if (a.rows() != a.cols()) {
    throw ShapeMismatch("matrix is " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + ", expected square");
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tolerance) {
        throw NotSymmetric("matrix differs from its transpose at (" + std::to_string(i) + "," +
                           std::to_string(j) + ") by more than " + std::to_string(tolerance));
      }
    }
  }
}

int count_distinct_rows(const Matrix& points) {
  const int n = static_cast<int>(points.rows());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto row_less = [&](int a, int b) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      if (points(a, c) != points(b, c)) return points(a, c) < points(b, c);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), row_less);
  int distinct = n == 0 ? 0 : 1;
  for (int i = 1; i < n; ++i) {
    if (row_less(order[static_cast<std::size_t>(i - 1)], order[static_cast<std::size_t>(i)])) {
      ++distinct;
    }
  }
  return distinct;
}

double squared_distance(const Matrix& points, int i, const Matrix& centers, int c) {
  return (points.row(i) - centers.row(c)).squaredNorm();
}

// k-means++: each new center is drawn with probability proportional to the
// squared distance from the already-chosen centers.
Matrix kmeanspp_init(const Matrix& points, int k, RngStream& rng) {
  const int n = static_cast<int>(points.rows());
  Matrix centers(k, points.cols());
  centers.row(0) = points.row(static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n))));
  std::vector<double> nearest(static_cast<std::size_t>(n),
                              std::numeric_limits<double>::infinity());
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      nearest[static_cast<std::size_t>(i)] =
          std::min(nearest[static_cast<std::size_t>(i)], squared_distance(points, i, centers, c - 1));
      total += nearest[static_cast<std::size_t>(i)];
    }
    // total > 0: fewer than k chosen centers cannot cover k distinct rows.
    const double target = rng.next_uniform() * total;
    double cumulative = 0.0;
    int chosen = n - 1;
    for (int i = 0; i < n; ++i) {
      cumulative += nearest[static_cast<std::size_t>(i)];
      if (cumulative > target) {
        chosen = i;
        break;
      }
    }
    centers.row(c) = points.row(chosen);
  }
  return centers;
}

std::vector<int> assign_to_nearest(const Matrix& points, const Matrix& centers) {
  const int n = static_cast<int>(points.rows());
  const int k = static_cast<int>(centers.rows());
  std::vector<int> assignment(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    double best = squared_distance(points, i, centers, 0);
    int best_c = 0;
    for (int c = 1; c < k; ++c) {
      const double d = squared_distance(points, i, centers, c);
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    assignment[static_cast<std::size_t>(i)] = best_c;
  }
  return assignment;
}

// Give every empty cluster the point currently farthest from its own center
// (ties to the lowest point index), never breaking up a singleton.
void repair_empty_clusters(const Matrix& points, const Matrix& centers, int k,
                           std::vector<int>& assignment) {
  const int n = static_cast<int>(points.rows());
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int a : assignment) ++sizes[static_cast<std::size_t>(a)];
  for (int c = 0; c < k; ++c) {
    if (sizes[static_cast<std::size_t>(c)] > 0) continue;
    double worst = -1.0;
    int worst_i = -1;
    for (int i = 0; i < n; ++i) {
      const int owner = assignment[static_cast<std::size_t>(i)];
      if (sizes[static_cast<std::size_t>(owner)] <= 1) continue;
      const double d = squared_distance(points, i, centers, owner);
      if (d > worst) {
        worst = d;
        worst_i = i;
      }
    }
    --sizes[static_cast<std::size_t>(assignment[static_cast<std::size_t>(worst_i)])];
    assignment[static_cast<std::size_t>(worst_i)] = c;
    ++sizes[static_cast<std::size_t>(c)];
  }
}

Matrix centers_from_assignment(const Matrix& points, const std::vector<int>& assignment, int k) {
  Matrix centers = Matrix::Zero(k, points.cols());
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < static_cast<int>(points.rows()); ++i) {
    centers.row(assignment[static_cast<std::size_t>(i)]) += points.row(i);
    ++sizes[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])];
  }
  for (int c = 0; c < k; ++c) {
    centers.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
  }
  return centers;
}

double objective_of(const Matrix& points, const Matrix& centers,
                    const std::vector<int>& assignment) {
  double objective = 0.0;
  for (int i = 0; i < static_cast<int>(points.rows()); ++i) {
    objective += squared_distance(points, i, centers, assignment[static_cast<std::size_t>(i)]);
  }
  return objective;
}

}  // namespace

EigenPairs top_k_eigen(const Matrix& a, int k) {
  require_symmetric(a, 1e-10);
  const int n = static_cast<int>(a.rows());
  if (k < 1 || k > n) {
    throw KOutOfRange("k=" + std::to_string(k) + " outside 1..n with n=" + std::to_string(n));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw Error("symmetric eigendecomposition did not converge");
  }
  const Vector& values = solver.eigenvalues();  // ascending
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const double mi = std::abs(values(i));
    const double mj = std::abs(values(j));
    if (mi != mj) return mi > mj;
    if (values(i) != values(j)) return values(i) > values(j);
    return i < j;
  });

  EigenPairs top;
  top.values.resize(k);
  top.vectors.resize(n, k);
  for (int j = 0; j < k; ++j) {
    const int src = order[static_cast<std::size_t>(j)];
    top.values(j) = values(src);
    Vector v = solver.eigenvectors().col(src);
    int lead = 0;
    for (int r = 1; r < n; ++r) {
      if (std::abs(v(r)) > std::abs(v(lead))) lead = r;
    }
    if (v(lead) < 0.0) v = -v;
    top.vectors.col(j) = v;
  }
  return top;
}

namespace detail {

KMeansResult single_kmeans_run(const Matrix& points, int k, RngStream& rng,
                               int max_iterations, std::vector<double>* trace) {
  Matrix centers = kmeanspp_init(points, k, rng);
  std::vector<int> assignment;
  for (int iter = 0; iter < max_iterations; ++iter) {
    std::vector<int> next = assign_to_nearest(points, centers);
    repair_empty_clusters(points, centers, k, next);
    centers = centers_from_assignment(points, next, k);
    if (trace) trace->push_back(objective_of(points, centers, next));
    const bool converged = (next == assignment);
    assignment = std::move(next);
    if (converged) break;
  }
  KMeansResult result;
  result.labels.k = k;
  result.labels.values.resize(assignment.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    result.labels.values[i] = assignment[i] + 1;
  }
  result.centers = centers_from_assignment(points, assignment, k);
  result.objective = objective_of(points, result.centers, assignment);
  result.restarts_used = 1;
  return result;
}

}  // namespace detail

KMeansResult lloyd_kmeans(const Matrix& points, int k, int restarts, std::uint64_t seed) {
  const int n = static_cast<int>(points.rows());
  if (k < 1 || k > n) {
    throw KOutOfRange("k=" + std::to_string(k) + " outside 1..n with n=" + std::to_string(n));
  }
  if (restarts < 1) throw InvalidParam("restarts must be >= 1, got " + std::to_string(restarts));
  if (count_distinct_rows(points) < k) {
    throw DegeneratePoints("points have fewer than k=" + std::to_string(k) + " distinct rows");
  }
  std::vector<KMeansResult> runs(static_cast<std::size_t>(restarts));
  parallel_for(0, restarts, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t r = lo; r < hi; ++r) {
      RngStream rng(seed, rng_domain::kKMeans, static_cast<std::uint64_t>(r));
      runs[static_cast<std::size_t>(r)] =
          detail::single_kmeans_run(points, k, rng, kMaxLloydIterations, nullptr);
    }
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].objective < runs[best].objective) best = r;
  }
  KMeansResult result = std::move(runs[best]);
  result.restarts_used = restarts;
  return result;
}

CommunityLabels spectral_cluster(const Matrix& a, int k, int restarts, std::uint64_t seed) {
  const EigenPairs top = top_k_eigen(a, k);
  if (top.values.cwiseAbs().maxCoeff() == 0.0) {
    throw DegeneratePoints("matrix has an all-zero leading spectrum; nothing to cluster");
  }
  return lloyd_kmeans(top.vectors, k, restarts, seed).labels;
}

}  // namespace motifclust
