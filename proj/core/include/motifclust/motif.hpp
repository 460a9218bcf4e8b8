#pragma once

#include <string>
#include <string_view>

#include "motifclust/graph.hpp"

namespace motifclust {

enum class MotifKind { kTriangle, kWedge, kFourClique };

// CLI spellings: "triangle", "wedge", "clique4".
std::string_view to_string(MotifKind kind);
MotifKind motif_kind_from_string(std::string_view name);  // InvalidParam on anything else

struct MotifMatrix {
  MotifKind kind = MotifKind::kTriangle;
  Matrix values;  // n x n, symmetric, zero diagonal, nonnegative
};

// Weighted motif adjacency: entry (i, j) sums, over every instance of the
// motif containing both i and j, the total edge weight of that instance.
// For the triangle this is
//
//   M(i, j) = sum_k 1{W_ij W_ik W_jk > 0} (W_ij + W_ik + W_jk),
//
// supported on edges; the wedge (2-path) is supported on pairs at distance
// <= 2, and the 4-clique again on edges.  Runs in O(sum_ij deg) for
// triangles and never materializes instance lists.
MotifMatrix build_motif_matrix(const WeightedGraph& graph, MotifKind kind);

// Literal instance enumeration over node tuples, for cross-checking the fast
// builders.  Guarded to n <= 200 (throws TooLarge) because the 4-clique scan
// is O(n^4).
MotifMatrix build_motif_matrix_bruteforce(const WeightedGraph& graph, MotifKind kind);

}  // namespace motifclust
