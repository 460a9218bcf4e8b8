#pragma once

#include <stdexcept>

namespace motifclust {

// Base class for all errors thrown by this library.  Every failure mode has
// its own subclass so callers can catch exactly the conditions they care
// about; the what() string carries the human-readable detail (file/line
// positions for parse failures, offending values for domain failures).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- input parsing -------------------------------------------------------
struct ParseError : Error { using Error::Error; };        // malformed line/token
struct DuplicateEdge : Error { using Error::Error; };     // edge listed twice
struct SelfLoop : Error { using Error::Error; };          // u == v in an edge list
struct NonPositiveWeight : Error { using Error::Error; }; // weight <= 0 in input
struct EmptyGraph : Error { using Error::Error; };        // no nodes inferable
struct IoError : Error { using Error::Error; };           // file cannot be opened/written

// --- parameter validation ------------------------------------------------
struct InvalidParam : Error { using Error::Error; };      // out-of-domain scalar parameter
struct LabelMismatch : Error { using Error::Error; };     // labels inconsistent with graph/params
struct UnsupportedForm : Error { using Error::Error; };   // connectivity matrix outside closed-form family
struct Unbalanced : Error { using Error::Error; };        // equal community sizes required
struct RankDeficient : Error { using Error::Error; };     // population matrix has < K informative eigenvalues
struct KOutOfRange : Error { using Error::Error; };       // K < 1 or K > n
struct KMismatch : Error { using Error::Error; };         // two labelings disagree on K / size

// --- numeric preconditions -----------------------------------------------
struct NotSymmetric : Error { using Error::Error; };      // symmetric matrix required
struct DegeneratePoints : Error { using Error::Error; };  // < K distinct rows to cluster
struct LengthMismatch : Error { using Error::Error; };    // paired sequences of unequal length
struct ZeroWeight : Error { using Error::Error; };        // graph with zero total weight
struct ShapeMismatch : Error { using Error::Error; };     // matrix dimensions disagree
struct EmptyCluster : Error { using Error::Error; };      // a cluster with no members where forbidden
struct TooLarge : Error { using Error::Error; };          // input exceeds a guard for O(n^4)-style code

// --- experiment harness ---------------------------------------------------
struct ConfigError : Error { using Error::Error; };       // bad experiment configuration
struct EmptyResult : Error { using Error::Error; };       // no rows to aggregate

}  // namespace motifclust
