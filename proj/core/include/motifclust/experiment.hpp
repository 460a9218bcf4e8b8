#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motifclust/graph.hpp"
#include "motifclust/motif.hpp"
#include "motifclust/spectral.hpp"
#include "motifclust/wsbm.hpp"

namespace motifclust {

enum class Method { kEdge, kMotif };
std::string_view to_string(Method method);

// Recordable per-replication metrics; names double as CSV column headers.
enum class MetricField : int {
  kMisclusterRate = 0,
  kAri,
  kNmi,
  kModularity,
  kSpectralDev,
  kEigengapAnalytic,
  kEigengapNumeric,
  kRuntimeMs,
};
inline constexpr int kMetricFieldCount = 8;
std::string_view to_string(MetricField field);

enum class SweepVariable { kN, kP, kOutInRatio, kK };
std::string_view to_string(SweepVariable variable);

// A Monte Carlo experiment: one model template, one swept parameter, a list
// of clustering methods, and the metrics to record per replication.  Loaded
// from strict JSON (unknown keys are errors); see configs/README.md for the
// schema.  Semantics of the recorded columns:
//   - miscluster_rate / ari / nmi compare estimated labels to the truth.
//   - modularity scores the estimated labels on the weighted motif adjacency
//     matrix (the row's kind for motif rows, the first configured kind for
//     edge rows).
//   - spectral_dev is the spectral norm of (input matrix - its expectation);
//     available on edge rows always, on triangle rows when the model is
//     two-level and balanced, NaN otherwise.
//   - eigengap_analytic is the closed-form population gap (n/K)(h1-h2) for
//     triangle rows and (n/K)(e1-e2) for edge rows; NaN when the model has
//     no closed form or the sweep point is unbalanced.
//   - eigengap_numeric is |lambda_K| of the matrix actually clustered.
//   - runtime_ms covers motif construction (motif rows) plus clustering.
struct ExperimentConfig {
  std::string name;
  SweepVariable sweep_variable = SweepVariable::kN;
  std::vector<double> sweep_values;

  // Fixed model template; the swept quantity is left unset.  `lambda` is the
  // canonical store for both "lambda" and "out_in_ratio" (= 1 - lambda).
  std::optional<int> n;
  std::optional<int> k;
  std::optional<double> p;
  std::optional<double> lambda;
  std::optional<Matrix> connectivity;  // full B, replaces p/lambda
  std::optional<WeightDistribution> weight;  // one law for every block pair
  std::optional<WeightDistribution> within_weight;
  std::optional<WeightDistribution> between_weight;

  std::vector<Method> methods;
  std::vector<MotifKind> motif_kinds = {MotifKind::kTriangle};
  int replications = 100;
  std::uint64_t seed = 0;
  int restarts = kDefaultKMeansRestarts;
  bool shuffle_labels = false;
  std::vector<MetricField> record;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);

  // Semantic validation (ranges, required combinations); throws ConfigError
  // naming the offending field.
  void validate() const;

  int n_at(double sweep_value) const;
  int k_at(double sweep_value) const;

  // Model parameters at one sweep point.  For simple-form templates the
  // connectivity is built exactly as WsbmParams::simple_form builds it.
  WsbmParams instantiate(double sweep_value) const;
};

struct ExperimentRow {
  double sweep_value = 0.0;
  int replication = 0;
  Method method = Method::kEdge;
  std::optional<MotifKind> motif_kind;  // engaged on motif rows only
  std::array<std::optional<double>, kMetricFieldCount> metrics;  // recorded only
};

// Runs every (sweep value x replication x method x motif kind) cell.
// Replication r uses seed base+r for sampling, label shuffling, and k-means,
// and replications run concurrently; rows come back ordered by (sweep value
// index, replication, method/kind as configured) with content independent of
// the thread count.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

// CSV with the fixed column set
// sweep_value,replication,method,motif,miscluster_rate,ari,nmi,modularity,
// spectral_dev,eigengap_analytic,eigengap_numeric,runtime_ms.
// Reals carry 10 significant digits; unrecorded metrics are left empty.
// Throws EmptyResult on no rows, IoError on file trouble.
void emit_csv(const std::vector<ExperimentRow>& rows, std::ostream& out);
void emit_csv(const std::vector<ExperimentRow>& rows, const std::string& path);

// Mean and standard error (sample std / sqrt(count); 0 when count is 1) of
// one metric within one (sweep value, method, motif kind) group -- the data
// behind one point of one figure curve.
struct SummaryRow {
  double sweep_value = 0.0;
  Method method = Method::kEdge;
  std::optional<MotifKind> motif_kind;
  MetricField metric = MetricField::kMisclusterRate;
  double mean = 0.0;
  double standard_error = 0.0;
  int count = 0;
};

// Groups in first-appearance order, metrics in column order.  Throws
// EmptyResult on no rows.
std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows);

// CSV: sweep_value,method,motif,metric,mean,stderr,replications.
void emit_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);
void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);

// Shortest-of-10-significant-digits real formatting used by the CSV writers
// ("%.10g"; NaN prints as "nan").
std::string format_real(double value);

}  // namespace motifclust
