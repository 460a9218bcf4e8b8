#include "motifclust/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "motifclust/errors.hpp"
#include "motifclust/metrics.hpp"
#include "motifclust/parallel.hpp"

namespace motifclust {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr const char* kCsvHeader =
    "sweep_value,replication,method,motif,miscluster_rate,ari,nmi,modularity,"
    "spectral_dev,eigengap_analytic,eigengap_numeric,runtime_ms";

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a JSON object");
}

void require_known_keys(const json& obj, const std::string& path,
                        std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(path + "." + item.key(), "unknown key");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_positive_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto value = j.get<std::int64_t>();
  if (value < 1 || value > std::numeric_limits<int>::max()) {
    fail(path, "expected a positive 32-bit integer, got " + std::to_string(value));
  }
  return static_cast<int>(value);
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

WeightDistribution parse_weight_law(const json& j, const std::string& path) {
  require_object(j, path);
  if (!j.contains("kind")) fail(path + ".kind", "missing weight law kind");
  const std::string kind = get_string(j.at("kind"), path + ".kind");
  try {
    if (kind == "uniform") {
      require_known_keys(j, path, {"kind", "a", "b"});
      if (!j.contains("a") || !j.contains("b")) fail(path, "uniform law needs keys a and b");
      return WeightDistribution::uniform(get_number(j.at("a"), path + ".a"),
                                         get_number(j.at("b"), path + ".b"));
    }
    if (kind == "chi_squared") {
      require_known_keys(j, path, {"kind", "df"});
      if (!j.contains("df")) fail(path, "chi_squared law needs key df");
      return WeightDistribution::chi_squared(get_number(j.at("df"), path + ".df"));
    }
    if (kind == "exponential") {
      require_known_keys(j, path, {"kind", "rate"});
      if (!j.contains("rate")) fail(path, "exponential law needs key rate");
      return WeightDistribution::exponential(get_number(j.at("rate"), path + ".rate"));
    }
    if (kind == "constant") {
      require_known_keys(j, path, {"kind", "value"});
      if (!j.contains("value")) fail(path, "constant law needs key value");
      return WeightDistribution::constant(get_number(j.at("value"), path + ".value"));
    }
  } catch (const InvalidParam& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "unknown weight law '" + kind +
                           "' (expected uniform, chi_squared, exponential, or constant)");
}

SweepVariable parse_sweep_variable(const std::string& name, const std::string& path) {
  if (name == "n") return SweepVariable::kN;
  if (name == "p") return SweepVariable::kP;
  if (name == "out_in_ratio") return SweepVariable::kOutInRatio;
  if (name == "K") return SweepVariable::kK;
  fail(path, "unknown sweep variable '" + name + "' (expected n, p, out_in_ratio, or K)");
}

Method parse_method(const std::string& name, const std::string& path) {
  if (name == "edge") return Method::kEdge;
  if (name == "motif") return Method::kMotif;
  fail(path, "unknown method '" + name + "' (expected edge or motif)");
}

MetricField parse_metric_field(const std::string& name, const std::string& path) {
  for (int f = 0; f < kMetricFieldCount; ++f) {
    if (name == to_string(static_cast<MetricField>(f))) return static_cast<MetricField>(f);
  }
  fail(path, "unknown metric '" + name + "'");
}

Matrix parse_connectivity(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t k = j.size();
  Matrix b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t q = 0; q < k; ++q) {
    const json& row = j.at(q);
    if (!row.is_array() || row.size() != k) {
      fail(path + "[" + std::to_string(q) + "]", "expected a row of " + std::to_string(k) +
                                                     " numbers");
    }
    for (std::size_t l = 0; l < k; ++l) {
      b(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(l)) =
          get_number(row.at(l), path + "[" + std::to_string(q) + "][" + std::to_string(l) + "]");
    }
  }
  return b;
}

}  // namespace

std::string_view to_string(Method method) {
  return method == Method::kEdge ? "edge" : "motif";
}

std::string_view to_string(MetricField field) {
  switch (field) {
    case MetricField::kMisclusterRate: return "miscluster_rate";
    case MetricField::kAri: return "ari";
    case MetricField::kNmi: return "nmi";
    case MetricField::kModularity: return "modularity";
    case MetricField::kSpectralDev: return "spectral_dev";
    case MetricField::kEigengapAnalytic: return "eigengap_analytic";
    case MetricField::kEigengapNumeric: return "eigengap_numeric";
    case MetricField::kRuntimeMs: return "runtime_ms";
  }
  return "?";
}

std::string_view to_string(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::kN: return "n";
    case SweepVariable::kP: return "p";
    case SweepVariable::kOutInRatio: return "out_in_ratio";
    case SweepVariable::kK: return "K";
  }
  return "?";
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return from_json_text(text.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_object(root, "config");
  require_known_keys(root, "config",
                     {"name", "sweep", "fixed", "methods", "motif_kinds", "replications",
                      "seed", "restarts", "shuffle_labels", "record"});

  ExperimentConfig config;
  config.motif_kinds.clear();

  if (root.contains("name")) config.name = get_string(root.at("name"), "name");

  if (!root.contains("sweep")) fail("sweep", "missing required key");
  const json& sweep = root.at("sweep");
  require_object(sweep, "sweep");
  require_known_keys(sweep, "sweep", {"variable", "values"});
  if (!sweep.contains("variable") || !sweep.contains("values")) {
    fail("sweep", "needs keys variable and values");
  }
  config.sweep_variable =
      parse_sweep_variable(get_string(sweep.at("variable"), "sweep.variable"), "sweep.variable");
  const json& values = sweep.at("values");
  if (!values.is_array() || values.empty()) fail("sweep.values", "expected a non-empty array");
  for (std::size_t i = 0; i < values.size(); ++i) {
    config.sweep_values.push_back(
        get_number(values.at(i), "sweep.values[" + std::to_string(i) + "]"));
  }

  if (!root.contains("fixed")) fail("fixed", "missing required key");
  const json& fixed = root.at("fixed");
  require_object(fixed, "fixed");
  require_known_keys(fixed, "fixed",
                     {"n", "K", "p", "lambda", "out_in_ratio", "B", "weights",
                      "within_weights", "between_weights"});
  if (fixed.contains("n")) config.n = get_positive_int(fixed.at("n"), "fixed.n");
  if (fixed.contains("K")) config.k = get_positive_int(fixed.at("K"), "fixed.K");
  if (fixed.contains("p")) config.p = get_number(fixed.at("p"), "fixed.p");
  if (fixed.contains("lambda") && fixed.contains("out_in_ratio")) {
    fail("fixed.out_in_ratio", "give lambda or out_in_ratio, not both");
  }
  if (fixed.contains("lambda")) config.lambda = get_number(fixed.at("lambda"), "fixed.lambda");
  if (fixed.contains("out_in_ratio")) {
    const double ratio = get_number(fixed.at("out_in_ratio"), "fixed.out_in_ratio");
    if (!(ratio > 0.0) || ratio > 1.0) {
      fail("fixed.out_in_ratio", "expected a value in (0, 1], got " + format_real(ratio));
    }
    config.lambda = 1.0 - ratio;
  }
  if (fixed.contains("B")) config.connectivity = parse_connectivity(fixed.at("B"), "fixed.B");
  if (fixed.contains("weights")) {
    config.weight = parse_weight_law(fixed.at("weights"), "fixed.weights");
  }
  if (fixed.contains("within_weights")) {
    config.within_weight = parse_weight_law(fixed.at("within_weights"), "fixed.within_weights");
  }
  if (fixed.contains("between_weights")) {
    config.between_weight =
        parse_weight_law(fixed.at("between_weights"), "fixed.between_weights");
  }

  if (!root.contains("methods")) fail("methods", "missing required key");
  const json& methods = root.at("methods");
  if (!methods.is_array()) fail("methods", "expected an array");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const std::string path = "methods[" + std::to_string(i) + "]";
    const Method method = parse_method(get_string(methods.at(i), path), path);
    if (std::find(config.methods.begin(), config.methods.end(), method) != config.methods.end()) {
      fail(path, "duplicate method");
    }
    config.methods.push_back(method);
  }

  if (root.contains("motif_kinds")) {
    const json& kinds = root.at("motif_kinds");
    if (!kinds.is_array()) fail("motif_kinds", "expected an array");
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      const std::string path = "motif_kinds[" + std::to_string(i) + "]";
      MotifKind kind;
      try {
        kind = motif_kind_from_string(get_string(kinds.at(i), path));
      } catch (const InvalidParam& e) {
        fail(path, e.what());
      }
      if (std::find(config.motif_kinds.begin(), config.motif_kinds.end(), kind) !=
          config.motif_kinds.end()) {
        fail(path, "duplicate motif kind");
      }
      config.motif_kinds.push_back(kind);
    }
  } else {
    config.motif_kinds = {MotifKind::kTriangle};
  }

  if (root.contains("replications")) {
    config.replications = get_positive_int(root.at("replications"), "replications");
  }
  if (root.contains("seed")) {
    const json& seed = root.at("seed");
    if (!seed.is_number_integer() && !seed.is_number_unsigned()) {
      fail("seed", "expected a nonnegative integer");
    }
    if (seed.is_number_integer() && seed.get<std::int64_t>() < 0) {
      fail("seed", "expected a nonnegative integer");
    }
    config.seed = seed.get<std::uint64_t>();
  }
  if (root.contains("restarts")) {
    config.restarts = get_positive_int(root.at("restarts"), "restarts");
  }
  if (root.contains("shuffle_labels")) {
    const json& flag = root.at("shuffle_labels");
    if (!flag.is_boolean()) fail("shuffle_labels", "expected true or false");
    config.shuffle_labels = flag.get<bool>();
  }

  if (!root.contains("record")) fail("record", "missing required key");
  const json& record = root.at("record");
  if (!record.is_array()) fail("record", "expected an array");
  for (std::size_t i = 0; i < record.size(); ++i) {
    const std::string path = "record[" + std::to_string(i) + "]";
    const MetricField field = parse_metric_field(get_string(record.at(i), path), path);
    if (std::find(config.record.begin(), config.record.end(), field) != config.record.end()) {
      fail(path, "duplicate metric");
    }
    config.record.push_back(field);
  }

  config.validate();
  return config;
}

void ExperimentConfig::validate() const {
  if (sweep_values.empty()) fail("sweep.values", "expected at least one value");
  const bool sweeping_n = sweep_variable == SweepVariable::kN;
  const bool sweeping_k = sweep_variable == SweepVariable::kK;
  const bool sweeping_p = sweep_variable == SweepVariable::kP;
  const bool sweeping_ratio = sweep_variable == SweepVariable::kOutInRatio;

  for (std::size_t i = 0; i < sweep_values.size(); ++i) {
    const std::string path = "sweep.values[" + std::to_string(i) + "]";
    const double v = sweep_values[i];
    if (!std::isfinite(v) || v <= 0.0) fail(path, "expected a positive finite value");
    if ((sweeping_n || sweeping_k) && v != std::floor(v)) {
      fail(path, std::string(to_string(sweep_variable)) + " sweep values must be integers");
    }
    if (sweeping_p && v > 1.0) fail(path, "p must lie in (0, 1]");
    if (sweeping_ratio && v > 1.0) fail(path, "out_in_ratio must lie in (0, 1]");
  }

  if (sweeping_n && n) fail("fixed.n", "n is the sweep variable; remove the fixed value");
  if (!sweeping_n && !n) fail("fixed.n", "missing required key");
  if (sweeping_k && k) fail("fixed.K", "K is the sweep variable; remove the fixed value");
  if (!sweeping_k && !k) fail("fixed.K", "missing required key");
  if (sweeping_n && k) {
    for (double v : sweep_values) {
      if (static_cast<int>(v) < *k) fail("sweep.values", "n sweep values must be >= fixed K");
    }
  }
  if (sweeping_k && n) {
    for (double v : sweep_values) {
      if (static_cast<int>(v) > *n) fail("sweep.values", "K sweep values must be <= fixed n");
    }
  }

  if (connectivity) {
    if (sweeping_k) fail("fixed.B", "cannot use a fixed connectivity table while sweeping K");
    if (sweeping_p || sweeping_ratio) {
      fail("sweep.variable", "sweeping " + std::string(to_string(sweep_variable)) +
                                 " needs the p/lambda template, not a full B");
    }
    if (p || lambda) fail("fixed.B", "give B or the p/lambda template, not both");
    if (k && (connectivity->rows() != *k || connectivity->cols() != *k)) {
      fail("fixed.B", "must be K x K with K=" + std::to_string(*k));
    }
    for (Eigen::Index q = 0; q < connectivity->rows(); ++q) {
      for (Eigen::Index l = 0; l < connectivity->cols(); ++l) {
        const double value = (*connectivity)(q, l);
        if (!(value >= 0.0) || value > 1.0) {
          fail("fixed.B[" + std::to_string(q) + "][" + std::to_string(l) + "]",
               "entries must lie in [0, 1]");
        }
        if ((*connectivity)(q, l) != (*connectivity)(l, q)) {
          fail("fixed.B", "must be symmetric");
        }
      }
    }
  } else {
    if (sweeping_p && p) fail("fixed.p", "p is the sweep variable; remove the fixed value");
    if (!sweeping_p) {
      if (!p) fail("fixed.p", "missing required key");
      if (!(*p > 0.0) || *p > 1.0) fail("fixed.p", "p must lie in (0, 1]");
    }
    if (sweeping_ratio && lambda) {
      fail("fixed.out_in_ratio", "the out-in ratio is the sweep variable; remove the fixed value");
    }
    const bool single_community = k && *k == 1;
    if (!sweeping_ratio && !single_community && !lambda) {
      fail("fixed.lambda", "give lambda or out_in_ratio (or a full B)");
    }
    if (single_community && lambda) {
      fail("fixed.lambda", "meaningless with K=1");
    }
    if (lambda && (!(*lambda >= 0.0) || !(*lambda < 1.0))) {
      fail("fixed.lambda", "lambda must lie in [0, 1)");
    }
  }

  if (weight) {
    if (within_weight || between_weight) {
      fail("fixed.weights", "give one shared law or the within/between pair, not both");
    }
  } else {
    if (!within_weight || !between_weight) {
      fail("fixed.weights", "give a shared law, or both within_weights and between_weights");
    }
  }

  if (methods.empty()) fail("methods", "expected at least one method");
  const bool uses_motif_method =
      std::find(methods.begin(), methods.end(), Method::kMotif) != methods.end();
  const bool records_modularity =
      std::find(record.begin(), record.end(), MetricField::kModularity) != record.end();
  if (motif_kinds.empty() && (uses_motif_method || records_modularity)) {
    fail("motif_kinds", records_modularity && !uses_motif_method
                            ? "modularity is scored on a motif matrix; list at least one kind"
                            : "expected at least one kind for the motif method");
  }
  if (replications < 1) fail("replications", "expected a positive integer");
  if (restarts < 1) fail("restarts", "expected a positive integer");
}

int ExperimentConfig::n_at(double sweep_value) const {
  return sweep_variable == SweepVariable::kN ? static_cast<int>(sweep_value) : *n;
}

int ExperimentConfig::k_at(double sweep_value) const {
  return sweep_variable == SweepVariable::kK ? static_cast<int>(sweep_value) : *k;
}

WsbmParams ExperimentConfig::instantiate(double sweep_value) const {
  const int n_v = n_at(sweep_value);
  const int k_v = k_at(sweep_value);
  const WeightDistribution within = within_weight ? *within_weight : *weight;
  const WeightDistribution between = between_weight ? *between_weight : *weight;
  if (connectivity) {
    std::vector<std::vector<WeightDistribution>> table(
        static_cast<std::size_t>(k_v),
        std::vector<WeightDistribution>(static_cast<std::size_t>(k_v), between));
    for (int q = 0; q < k_v; ++q) table[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)] = within;
    return WsbmParams::general(n_v, k_v, *connectivity, std::move(table));
  }
  const double p_v = sweep_variable == SweepVariable::kP ? sweep_value : *p;
  double lambda_v = 0.0;  // K=1 has no between-community pairs
  if (k_v > 1) {
    lambda_v = sweep_variable == SweepVariable::kOutInRatio ? 1.0 - sweep_value : *lambda;
  }
  // between = p * (1 - lambda), the exact expression simple_form uses, so a
  // simple-form config generates a bitwise-identical connectivity matrix.
  return WsbmParams::two_level(n_v, k_v, p_v, p_v * (1.0 - lambda_v), within, between);
}

namespace {

struct RowSpec {
  Method method = Method::kEdge;
  std::optional<MotifKind> kind;
};

int kind_slot(MotifKind kind) { return static_cast<int>(kind); }

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  config.validate();

  std::vector<RowSpec> specs;
  for (Method method : config.methods) {
    if (method == Method::kEdge) {
      specs.push_back({method, std::nullopt});
    } else {
      for (MotifKind kind : config.motif_kinds) specs.push_back({method, kind});
    }
  }

  const auto recorded = [&](MetricField field) {
    return std::find(config.record.begin(), config.record.end(), field) != config.record.end();
  };

  // Motif matrices to build per replication: every kind a motif row uses,
  // plus the modularity scoring kind when only edge rows are configured.
  std::vector<MotifKind> kinds_needed;
  for (const RowSpec& spec : specs) {
    if (spec.kind && std::find(kinds_needed.begin(), kinds_needed.end(), *spec.kind) ==
                         kinds_needed.end()) {
      kinds_needed.push_back(*spec.kind);
    }
  }
  if (recorded(MetricField::kModularity) && kinds_needed.empty()) {
    kinds_needed.push_back(config.motif_kinds.front());
  }
  const MotifKind modularity_kind =
      kinds_needed.empty() ? MotifKind::kTriangle : config.motif_kinds.front();

  const int reps = config.replications;
  std::vector<ExperimentRow> rows(config.sweep_values.size() * static_cast<std::size_t>(reps) *
                                  specs.size());

  for (std::size_t s = 0; s < config.sweep_values.size(); ++s) {
    const double sweep_value = config.sweep_values[s];
    const WsbmParams params = config.instantiate(sweep_value);
    const CommunityLabels base_labels = balanced_labels(params.n, params.k);
    const bool closed_form = params.n % params.k == 0 && two_level_form(params);

    double gap_motif = kNaN;
    double gap_edge = kNaN;
    MotifMoments moments;
    EdgeMoments edge_moments;
    if (closed_form) {
      moments = population_motif_moments(params);
      edge_moments = population_edge_moments(params);
      const double m = static_cast<double>(params.n) / params.k;
      gap_motif = m * (moments.h1 - moments.h2);
      gap_edge = m * (edge_moments.e1 - edge_moments.e2);
    }

    const bool want_dev = recorded(MetricField::kSpectralDev);
    const bool want_numeric_gap = recorded(MetricField::kEigengapNumeric);

    parallel_for(0, reps, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t r = lo; r < hi; ++r) {
        const std::uint64_t rep_seed = config.seed + static_cast<std::uint64_t>(r);
        const CommunityLabels truth =
            config.shuffle_labels ? shuffled_labels(base_labels, rep_seed) : base_labels;
        const WeightedGraph graph = sample_wsbm(params, truth, rep_seed);

        std::array<std::optional<MotifMatrix>, 3> motif_matrices;
        std::array<double, 3> build_ms{0.0, 0.0, 0.0};
        for (MotifKind kind : kinds_needed) {
          const auto start = std::chrono::steady_clock::now();
          motif_matrices[static_cast<std::size_t>(kind_slot(kind))] =
              build_motif_matrix(graph, kind);
          build_ms[static_cast<std::size_t>(kind_slot(kind))] = elapsed_ms(start);
        }

        // Expectations of the sampled matrices (diagonal zeroed) for the
        // spectral-deviation column.
        Matrix population_edge;
        Matrix population_motif;
        if (want_dev) {
          population_edge = edge_population(params, truth);
          population_edge.diagonal().setZero();
          if (closed_form) {
            population_motif.resize(params.n, params.n);
            for (int i = 0; i < params.n; ++i) {
              for (int j = 0; j < params.n; ++j) {
                population_motif(i, j) =
                    i == j ? 0.0
                           : (truth.values[static_cast<std::size_t>(i)] ==
                                      truth.values[static_cast<std::size_t>(j)]
                                  ? moments.h1
                                  : moments.h2);
              }
            }
          }
        }

        for (std::size_t spec_idx = 0; spec_idx < specs.size(); ++spec_idx) {
          const RowSpec& spec = specs[spec_idx];
          const Matrix& input =
              spec.method == Method::kEdge
                  ? graph.weights()
                  : motif_matrices[static_cast<std::size_t>(kind_slot(*spec.kind))]->values;

          const auto start = std::chrono::steady_clock::now();
          const CommunityLabels labels_hat =
              spectral_cluster(input, params.k, config.restarts, rep_seed);
          double runtime = elapsed_ms(start);
          if (spec.kind) runtime += build_ms[static_cast<std::size_t>(kind_slot(*spec.kind))];

          ExperimentRow row;
          row.sweep_value = sweep_value;
          row.replication = static_cast<int>(r);
          row.method = spec.method;
          row.motif_kind = spec.kind;

          const auto set = [&row](MetricField field, double value) {
            row.metrics[static_cast<std::size_t>(field)] = value;
          };
          if (recorded(MetricField::kMisclusterRate)) {
            set(MetricField::kMisclusterRate, miscluster_rate(labels_hat, truth));
          }
          if (recorded(MetricField::kAri)) {
            set(MetricField::kAri, adjusted_rand_index(labels_hat, truth));
          }
          if (recorded(MetricField::kNmi)) {
            set(MetricField::kNmi, normalized_mutual_information(labels_hat, truth));
          }
          if (recorded(MetricField::kModularity)) {
            const MotifKind score_kind = spec.kind ? *spec.kind : modularity_kind;
            set(MetricField::kModularity,
                modularity(*motif_matrices[static_cast<std::size_t>(kind_slot(score_kind))],
                           labels_hat));
          }
          if (want_dev) {
            double dev = kNaN;
            if (spec.method == Method::kEdge) {
              dev = spectral_deviation(graph.weights(), population_edge);
            } else if (*spec.kind == MotifKind::kTriangle && closed_form) {
              dev = spectral_deviation(input, population_motif);
            }
            set(MetricField::kSpectralDev, dev);
          }
          if (recorded(MetricField::kEigengapAnalytic)) {
            double gap = kNaN;
            if (spec.method == Method::kEdge) {
              gap = gap_edge;
            } else if (*spec.kind == MotifKind::kTriangle) {
              gap = gap_motif;
            }
            set(MetricField::kEigengapAnalytic, gap);
          }
          if (want_numeric_gap) {
            const EigenPairs top = top_k_eigen(input, params.k);
            set(MetricField::kEigengapNumeric, std::abs(top.values(params.k - 1)));
          }
          if (recorded(MetricField::kRuntimeMs)) set(MetricField::kRuntimeMs, runtime);

          rows[(s * static_cast<std::size_t>(reps) + static_cast<std::size_t>(r)) * specs.size() +
               spec_idx] = std::move(row);
        }
      }
    });
  }
  return rows;
}

void emit_csv(const std::vector<ExperimentRow>& rows, std::ostream& out) {
  if (rows.empty()) throw EmptyResult("no experiment rows to write");
  out << kCsvHeader << '\n';
  for (const ExperimentRow& row : rows) {
    out << format_real(row.sweep_value) << ',' << row.replication << ','
        << to_string(row.method) << ',' << (row.motif_kind ? to_string(*row.motif_kind) : "");
    for (int f = 0; f < kMetricFieldCount; ++f) {
      out << ',';
      const auto& value = row.metrics[static_cast<std::size_t>(f)];
      if (value) out << format_real(*value);
    }
    out << '\n';
  }
}

void emit_csv(const std::vector<ExperimentRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  emit_csv(rows, out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows) {
  if (rows.empty()) throw EmptyResult("no experiment rows to summarize");

  struct Group {
    double sweep_value;
    Method method;
    std::optional<MotifKind> motif_kind;
    std::array<std::vector<double>, kMetricFieldCount> values;
  };
  std::vector<Group> groups;
  for (const ExperimentRow& row : rows) {
    Group* group = nullptr;
    for (Group& g : groups) {
      if (g.sweep_value == row.sweep_value && g.method == row.method &&
          g.motif_kind == row.motif_kind) {
        group = &g;
        break;
      }
    }
    if (!group) {
      groups.push_back({row.sweep_value, row.method, row.motif_kind, {}});
      group = &groups.back();
    }
    for (int f = 0; f < kMetricFieldCount; ++f) {
      const auto& value = row.metrics[static_cast<std::size_t>(f)];
      if (value) group->values[static_cast<std::size_t>(f)].push_back(*value);
    }
  }

  std::vector<SummaryRow> summary;
  for (const Group& group : groups) {
    for (int f = 0; f < kMetricFieldCount; ++f) {
      const std::vector<double>& values = group.values[static_cast<std::size_t>(f)];
      if (values.empty()) continue;
      SummaryRow row;
      row.sweep_value = group.sweep_value;
      row.method = group.method;
      row.motif_kind = group.motif_kind;
      row.metric = static_cast<MetricField>(f);
      row.count = static_cast<int>(values.size());
      double sum = 0.0;
      for (double v : values) sum += v;
      row.mean = sum / static_cast<double>(values.size());
      if (values.size() > 1) {
        double squares = 0.0;
        for (double v : values) squares += (v - row.mean) * (v - row.mean);
        const double sample_sd = std::sqrt(squares / static_cast<double>(values.size() - 1));
        row.standard_error = sample_sd / std::sqrt(static_cast<double>(values.size()));
      }
      summary.push_back(row);
    }
  }
  return summary;
}

void emit_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << "sweep_value,method,motif,metric,mean,stderr,replications\n";
  for (const SummaryRow& row : rows) {
    out << format_real(row.sweep_value) << ',' << to_string(row.method) << ','
        << (row.motif_kind ? to_string(*row.motif_kind) : "") << ',' << to_string(row.metric)
        << ',' << format_real(row.mean) << ',' << format_real(row.standard_error) << ','
        << row.count << '\n';
  }
}

void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  emit_summary_csv(rows, out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace motifclust
