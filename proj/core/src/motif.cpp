#include "motifclust/motif.hpp"

#include <vector>

#include "motifclust/errors.hpp"
#include "motifclust/parallel.hpp"

namespace motifclust {

namespace {

// Triangle entries accumulate over the third node k in ascending order,
// mirroring the brute-force loop term for term so the two agree bitwise.
// Scanning the shorter of the two sorted neighbor lists keeps the cost at
// sum over edges of min(deg i, deg j); the accepted k's and their order are
// the same whichever endpoint's list is walked.
void build_triangle(const WeightedGraph& graph, Matrix& m) {
  const Matrix& w = graph.weights();
  const int n = graph.size();
  parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
    for (int i = static_cast<int>(lo); i < static_cast<int>(hi); ++i) {
      for (int j : graph.neighbors(i)) {
        if (j <= i) continue;
        const bool scan_i = graph.degree(i) <= graph.degree(j);
        const auto& candidates = graph.neighbors(scan_i ? i : j);
        const int other = scan_i ? j : i;
        const double w_ij = w(i, j);
        double sum = 0.0;
        for (int k : candidates) {
          if (w(other, k) > 0.0) sum += w_ij + w(i, k) + w(j, k);
        }
        m(i, j) = sum;
        m(j, i) = sum;
      }
    }
  });
}

void build_wedge(const WeightedGraph& graph, Matrix& m) {
  const Matrix& w = graph.weights();
  const int n = graph.size();
  // Node strengths, accumulated in neighbor order so results do not depend
  // on the thread partition.
  std::vector<double> strength(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j : graph.neighbors(i)) strength[static_cast<std::size_t>(i)] += w(i, j);
  }
  parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
    for (int i = static_cast<int>(lo); i < static_cast<int>(hi); ++i) {
      const double s_i = strength[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n; ++j) {
        double sum = 0.0;
        // Wedges centered on a common neighbor contain both i and j as
        // endpoints; no i-j edge is required for those.
        for (int c : graph.neighbors(i)) {
          if (w(j, c) > 0.0) sum += w(i, c) + w(j, c);
        }
        // With an i-j edge, i or j can also be the wedge's center.
        const double w_ij = w(i, j);
        if (w_ij > 0.0) {
          const double d_i = static_cast<double>(graph.degree(i));
          const double d_j = static_cast<double>(graph.degree(j));
          sum += (d_i - 1.0) * w_ij + (s_i - w_ij);
          sum += (d_j - 1.0) * w_ij + (strength[static_cast<std::size_t>(j)] - w_ij);
        }
        if (sum != 0.0) {
          m(i, j) = sum;
          m(j, i) = sum;
        }
      }
    }
  });
}

void build_four_clique(const WeightedGraph& graph, Matrix& m) {
  const Matrix& w = graph.weights();
  const int n = graph.size();
  parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
    std::vector<int> common;
    for (int i = static_cast<int>(lo); i < static_cast<int>(hi); ++i) {
      for (int j : graph.neighbors(i)) {
        if (j <= i) continue;
        const bool scan_i = graph.degree(i) <= graph.degree(j);
        const auto& candidates = graph.neighbors(scan_i ? i : j);
        const int other = scan_i ? j : i;
        common.clear();
        for (int k : candidates) {
          if (w(other, k) > 0.0) common.push_back(k);
        }
        const double w_ij = w(i, j);
        double sum = 0.0;
        // Every 4-clique containing the edge (i, j) is {i, j, k, l} for one
        // adjacent pair (k, l) of common neighbors.
        for (std::size_t a = 0; a < common.size(); ++a) {
          const int k = common[a];
          for (std::size_t b = a + 1; b < common.size(); ++b) {
            const int l = common[b];
            if (w(k, l) > 0.0) {
              sum += w_ij + w(i, k) + w(i, l) + w(j, k) + w(j, l) + w(k, l);
            }
          }
        }
        if (sum != 0.0) {
          m(i, j) = sum;
          m(j, i) = sum;
        }
      }
    }
  });
}

void add_instance(Matrix& m, const std::vector<int>& nodes, double weight) {
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      m(nodes[a], nodes[b]) += weight;
      m(nodes[b], nodes[a]) += weight;
    }
  }
}

}  // namespace

std::string_view to_string(MotifKind kind) {
  switch (kind) {
    case MotifKind::kTriangle: return "triangle";
    case MotifKind::kWedge: return "wedge";
    case MotifKind::kFourClique: return "clique4";
  }
  return "?";
}

MotifKind motif_kind_from_string(std::string_view name) {
  if (name == "triangle") return MotifKind::kTriangle;
  if (name == "wedge") return MotifKind::kWedge;
  if (name == "clique4") return MotifKind::kFourClique;
  throw InvalidParam("unknown motif '" + std::string(name) +
                     "' (expected triangle, wedge, or clique4)");
}

MotifMatrix build_motif_matrix(const WeightedGraph& graph, MotifKind kind) {
  MotifMatrix result;
  result.kind = kind;
  result.values = Matrix::Zero(graph.size(), graph.size());
  switch (kind) {
    case MotifKind::kTriangle: build_triangle(graph, result.values); break;
    case MotifKind::kWedge: build_wedge(graph, result.values); break;
    case MotifKind::kFourClique: build_four_clique(graph, result.values); break;
  }
  return result;
}

MotifMatrix build_motif_matrix_bruteforce(const WeightedGraph& graph, MotifKind kind) {
  const int n = graph.size();
  if (n > 200) {
    throw TooLarge("brute-force motif enumeration is limited to n <= 200, got n=" +
                   std::to_string(n));
  }
  const Matrix& w = graph.weights();
  MotifMatrix result;
  result.kind = kind;
  result.values = Matrix::Zero(n, n);
  Matrix& m = result.values;
  switch (kind) {
    case MotifKind::kTriangle:
      // Literal transcription of the definition, one ordered pair at a time.
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          double sum = 0.0;
          for (int k = 0; k < n; ++k) {
            if (w(i, j) > 0.0 && w(i, k) > 0.0 && w(j, k) > 0.0) {
              sum += w(i, j) + w(i, k) + w(j, k);
            }
          }
          m(i, j) = sum;
          m(j, i) = sum;
        }
      }
      break;
    case MotifKind::kWedge:
      for (int c = 0; c < n; ++c) {
        for (int u = 0; u < n; ++u) {
          if (u == c || w(c, u) <= 0.0) continue;
          for (int v = u + 1; v < n; ++v) {
            if (v == c || w(c, v) <= 0.0) continue;
            add_instance(m, {u, c, v}, w(c, u) + w(c, v));
          }
        }
      }
      break;
    case MotifKind::kFourClique:
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          if (w(a, b) <= 0.0) continue;
          for (int c = b + 1; c < n; ++c) {
            if (w(a, c) <= 0.0 || w(b, c) <= 0.0) continue;
            for (int d = c + 1; d < n; ++d) {
              if (w(a, d) <= 0.0 || w(b, d) <= 0.0 || w(c, d) <= 0.0) continue;
              add_instance(m, {a, b, c, d},
                           w(a, b) + w(a, c) + w(a, d) + w(b, c) + w(b, d) + w(c, d));
            }
          }
        }
      }
      break;
  }
  return result;
}

}  // namespace motifclust
