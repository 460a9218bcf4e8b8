// Experiment configuration parsing, the Monte Carlo runner, CSV emission,
// and summaries.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "motifclust/errors.hpp"
#include "motifclust/experiment.hpp"
#include "motifclust/parallel.hpp"

using namespace motifclust;

namespace {

std::string error_message(const std::string& json_text) {
  try {
    (void)ExperimentConfig::from_json_text(json_text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "no error";
}

// A small but complete two-method experiment used by several tests.
const char* kSmallConfig = R"json({
  "name": "small",
  "sweep": {"variable": "n", "values": [12, 16]},
  "fixed": {"K": 2, "p": 0.9, "lambda": 0.5,
            "weights": {"kind": "uniform", "a": 0.01, "b": 1.0}},
  "methods": ["edge", "motif"],
  "motif_kinds": ["triangle", "wedge"],
  "replications": 3,
  "seed": 5,
  "restarts": 8,
  "record": ["miscluster_rate", "ari", "nmi", "modularity",
             "spectral_dev", "eigengap_analytic", "eigengap_numeric"]
})json";

std::string csv_of(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  emit_csv(rows, out);
  return out.str();
}

}  // namespace

TEST_CASE("a full config parses into the expected fields") {
  const ExperimentConfig config = ExperimentConfig::from_json_text(kSmallConfig);
  CHECK(config.name == "small");
  CHECK(config.sweep_variable == SweepVariable::kN);
  CHECK(config.sweep_values == std::vector<double>{12.0, 16.0});
  CHECK(config.k == 2);
  CHECK(config.p == 0.9);
  CHECK(config.lambda == 0.5);
  CHECK(config.methods == std::vector<Method>{Method::kEdge, Method::kMotif});
  CHECK(config.motif_kinds == std::vector<MotifKind>{MotifKind::kTriangle, MotifKind::kWedge});
  CHECK(config.replications == 3);
  CHECK(config.seed == 5);
  CHECK(config.restarts == 8);
  CHECK_FALSE(config.shuffle_labels);
  CHECK(config.record.size() == 7);
}

TEST_CASE("unknown keys are rejected with their full path") {
  CHECK(error_message(R"({"swep": {}})").find("config.swep") != std::string::npos);
  const std::string nested = error_message(R"json({
    "sweep": {"variable": "n", "values": [10]},
    "fixed": {"K": 2, "p": 0.5, "lambda": 0.4,
              "weights": {"kind": "uniform", "a": 0.01, "b": 1.0, "c": 2}},
    "methods": ["edge"], "record": ["ari"]
  })json");
  CHECK(nested.find("fixed.weights.c") != std::string::npos);
  const std::string sweep_key = error_message(R"json({
    "sweep": {"variable": "n", "values": [10], "step": 2},
    "fixed": {"K": 2, "p": 0.5, "lambda": 0.4, "weights": {"kind": "constant", "value": 1}},
    "methods": ["edge"], "record": ["ari"]
  })json");
  CHECK(sweep_key.find("sweep.step") != std::string::npos);
}

TEST_CASE("config validation failures carry field paths") {
  CHECK(error_message("{") .find("not valid JSON") != std::string::npos);
  CHECK(error_message("{}").find("sweep") != std::string::npos);
  // The swept variable must not also be fixed.
  const char* both = R"json({
    "sweep": {"variable": "p", "values": [0.5]},
    "fixed": {"n": 10, "K": 2, "p": 0.4, "lambda": 0.4,
              "weights": {"kind": "constant", "value": 1}},
    "methods": ["edge"], "record": ["ari"]
  })json";
  CHECK(error_message(both).find("fixed.p") != std::string::npos);
  // lambda and out_in_ratio are mutually exclusive spellings.
  const char* spellings = R"json({
    "sweep": {"variable": "n", "values": [10]},
    "fixed": {"K": 2, "p": 0.5, "lambda": 0.4, "out_in_ratio": 0.6,
              "weights": {"kind": "constant", "value": 1}},
    "methods": ["edge"], "record": ["ari"]
  })json";
  CHECK(error_message(spellings).find("out_in_ratio") != std::string::npos);
  // Shared and per-block weight laws cannot be mixed.
  const char* weights = R"json({
    "sweep": {"variable": "n", "values": [10]},
    "fixed": {"K": 2, "p": 0.5, "lambda": 0.4,
              "weights": {"kind": "constant", "value": 1},
              "within_weights": {"kind": "constant", "value": 1}},
    "methods": ["edge"], "record": ["ari"]
  })json";
  CHECK(error_message(weights).find("weights") != std::string::npos);
  // A full B excludes the p/lambda template.
  const char* b_plus_p = R"json({
    "sweep": {"variable": "n", "values": [10]},
    "fixed": {"K": 2, "p": 0.5, "B": [[0.5, 0.3], [0.3, 0.05]],
              "weights": {"kind": "constant", "value": 1}},
    "methods": ["edge"], "record": ["ari"]
  })json";
  CHECK(error_message(b_plus_p).find("fixed.B") != std::string::npos);

  const auto bad = [](const std::string& fixed_or_more) {
    return R"json({"sweep": {"variable": "n", "values": [10]},)json" + fixed_or_more +
           R"json("methods": ["edge"], "record": ["ari"]})json";
  };
  // Bad numeric domains.
  CHECK(error_message(bad(R"("fixed": {"K": 2, "p": 1.5, "lambda": 0.4,
      "weights": {"kind": "constant", "value": 1}},)")) != "no error");
  CHECK(error_message(bad(R"("fixed": {"K": 2, "p": 0.5, "lambda": 1.0,
      "weights": {"kind": "constant", "value": 1}},)")) != "no error");
  CHECK(error_message(bad(R"("fixed": {"K": 2, "p": 0.5, "out_in_ratio": 0.0,
      "weights": {"kind": "constant", "value": 1}},)")) != "no error");
  CHECK(error_message(bad(R"("fixed": {"K": 0, "p": 0.5, "lambda": 0.4,
      "weights": {"kind": "constant", "value": 1}},)")) != "no error");
  CHECK(error_message(bad(R"("fixed": {"K": 2, "p": 0.5, "lambda": 0.4,
      "weights": {"kind": "uniform", "a": 1.0, "b": 0.5}},)")) != "no error");
  CHECK(error_message(bad(R"("fixed": {"K": 2, "p": 0.5, "lambda": 0.4,
      "weights": {"kind": "gamma", "shape": 1}},)")).find("kind") != std::string::npos);

  // Duplicates and empty lists.
  const char* dup_method = R"json({
    "sweep": {"variable": "n", "values": [10]},
    "fixed": {"K": 2, "p": 0.5, "lambda": 0.4, "weights": {"kind": "constant", "value": 1}},
    "methods": ["edge", "edge"], "record": ["ari"]
  })json";
  CHECK(error_message(dup_method).find("methods[1]") != std::string::npos);
  const char* dup_record = R"json({
    "sweep": {"variable": "n", "values": [10]},
    "fixed": {"K": 2, "p": 0.5, "lambda": 0.4, "weights": {"kind": "constant", "value": 1}},
    "methods": ["edge"], "record": ["ari", "ari"]
  })json";
  CHECK(error_message(dup_record).find("record[1]") != std::string::npos);
  // Non-integer n sweep values.
  const char* frac_n = R"json({
    "sweep": {"variable": "n", "values": [10.5]},
    "fixed": {"K": 2, "p": 0.5, "lambda": 0.4, "weights": {"kind": "constant", "value": 1}},
    "methods": ["edge"], "record": ["ari"]
  })json";
  CHECK(error_message(frac_n).find("sweep.values[0]") != std::string::npos);
}

TEST_CASE("unreadable config files raise ConfigError") {
  CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("out_in_ratio spellings reduce to the simple-form connectivity bitwise") {
  const char* ratio_fixed = R"json({
    "sweep": {"variable": "n", "values": [10]},
    "fixed": {"K": 2, "p": 0.5, "out_in_ratio": 0.6,
              "weights": {"kind": "uniform", "a": 0.01, "b": 1.0}},
    "methods": ["motif"], "record": ["miscluster_rate"]
  })json";
  const ExperimentConfig config = ExperimentConfig::from_json_text(ratio_fixed);
  const WsbmParams params = config.instantiate(10);
  const WsbmParams reference = WsbmParams::simple_form(
      10, 2, 0.5, 1.0 - 0.6, WeightDistribution::uniform(0.01, 1.0));
  CHECK(params.connectivity == reference.connectivity);
  CHECK(params.weights == reference.weights);

  const char* ratio_sweep = R"json({
    "sweep": {"variable": "out_in_ratio", "values": [0.2, 0.7, 1.0]},
    "fixed": {"n": 12, "K": 3, "p": 0.5,
              "weights": {"kind": "uniform", "a": 0.01, "b": 1.0}},
    "methods": ["motif"], "record": ["miscluster_rate"]
  })json";
  const ExperimentConfig swept = ExperimentConfig::from_json_text(ratio_sweep);
  for (double ratio : {0.2, 0.7}) {
    const WsbmParams p = swept.instantiate(ratio);
    const WsbmParams r = WsbmParams::simple_form(12, 3, 0.5, 1.0 - ratio,
                                                 WeightDistribution::uniform(0.01, 1.0));
    CHECK(p.connectivity == r.connectivity);
  }
  // ratio = 1 is legal here (lambda = 0) even though simple_form excludes it.
  const WsbmParams equal = swept.instantiate(1.0);
  CHECK(equal.connectivity(0, 0) == equal.connectivity(0, 1));
}

TEST_CASE("perfectly separable input scores ARI 1 on every replication") {
  const char* trivial = R"json({
    "sweep": {"variable": "n", "values": [12]},
    "fixed": {"K": 2, "p": 1.0, "lambda": 0.999999,
              "weights": {"kind": "constant", "value": 1.0}},
    "methods": ["edge"],
    "replications": 1,
    "record": ["ari"]
  })json";
  const std::vector<ExperimentRow> rows =
      run_experiment(ExperimentConfig::from_json_text(trivial));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].method == Method::kEdge);
  CHECK_FALSE(rows[0].motif_kind.has_value());
  REQUIRE(rows[0].metrics[static_cast<std::size_t>(MetricField::kAri)].has_value());
  CHECK(*rows[0].metrics[static_cast<std::size_t>(MetricField::kAri)] == 1.0);
  // Unrecorded fields stay empty.
  CHECK_FALSE(rows[0].metrics[static_cast<std::size_t>(MetricField::kNmi)].has_value());
}

TEST_CASE("CSV header, shape, and motif column") {
  const ExperimentConfig config = ExperimentConfig::from_json_text(kSmallConfig);
  const std::vector<ExperimentRow> rows = run_experiment(config);
  // 2 sweep values x 3 replications x (edge + 2 motif kinds).
  REQUIRE(rows.size() == 2 * 3 * 3);
  const std::string csv = csv_of(rows);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "sweep_value,replication,method,motif,miscluster_rate,ari,nmi,modularity,"
        "spectral_dev,eigengap_analytic,eigengap_numeric,runtime_ms");
  int edge_rows = 0, triangle_rows = 0, wedge_rows = 0, line_count = 0;
  std::string line;
  while (std::getline(lines, line)) {
    ++line_count;
    if (line.find(",edge,,") != std::string::npos) ++edge_rows;
    if (line.find(",motif,triangle,") != std::string::npos) ++triangle_rows;
    if (line.find(",motif,wedge,") != std::string::npos) ++wedge_rows;
    // runtime_ms was not recorded: every line ends with an empty field.
    CHECK(line.back() == ',');
  }
  CHECK(line_count == 18);
  CHECK(edge_rows == 6);
  CHECK(triangle_rows == 6);
  CHECK(wedge_rows == 6);
  // Wedge rows have no analytic eigen-gap: the column prints "nan".
  CHECK(csv.find("nan") != std::string::npos);
}

TEST_CASE("re-emitting a parsed CSV reproduces it byte for byte") {
  const ExperimentConfig config = ExperimentConfig::from_json_text(kSmallConfig);
  const std::vector<ExperimentRow> rows = run_experiment(config);
  const std::string csv = csv_of(rows);

  // Parse the numeric fields back and re-emit.
  std::vector<ExperimentRow> parsed;
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    ExperimentRow row;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    REQUIRE(fields.size() == 12);
    row.sweep_value = std::stod(fields[0]);
    row.replication = std::stoi(fields[1]);
    row.method = fields[2] == "edge" ? Method::kEdge : Method::kMotif;
    if (!fields[3].empty()) row.motif_kind = motif_kind_from_string(fields[3]);
    for (int f = 0; f < kMetricFieldCount; ++f) {
      const std::string& field = fields[static_cast<std::size_t>(4 + f)];
      if (!field.empty()) row.metrics[static_cast<std::size_t>(f)] = std::stod(field);
    }
    parsed.push_back(row);
  }
  CHECK(csv_of(parsed) == csv);
}

TEST_CASE("identical CSV across runs and thread counts") {
  const ExperimentConfig config = ExperimentConfig::from_json_text(kSmallConfig);
  set_thread_count(1);
  const std::string serial = csv_of(run_experiment(config));
  set_thread_count(5);
  const std::string threaded = csv_of(run_experiment(config));
  set_thread_count(0);
  const std::string automatic = csv_of(run_experiment(config));
  CHECK(serial == threaded);
  CHECK(serial == automatic);
}

TEST_CASE("label shuffling preserves determinism and changes the assignment") {
  const char* shuffled = R"json({
    "sweep": {"variable": "n", "values": [12]},
    "fixed": {"K": 2, "p": 1.0, "lambda": 0.999999,
              "weights": {"kind": "constant", "value": 1.0}},
    "methods": ["edge"], "replications": 2, "shuffle_labels": true,
    "record": ["ari"]
  })json";
  const ExperimentConfig config = ExperimentConfig::from_json_text(shuffled);
  CHECK(config.shuffle_labels);
  const std::string a = csv_of(run_experiment(config));
  const std::string b = csv_of(run_experiment(config));
  CHECK(a == b);
  // Separable input still scores perfectly against the shuffled truth.
  CHECK(a.find(",edge,,,1,") != std::string::npos);
}

TEST_CASE("empty inputs are rejected") {
  CHECK_THROWS_AS(csv_of({}), EmptyResult);
  CHECK_THROWS_AS(summarize({}), EmptyResult);
  ExperimentRow row;
  row.metrics[0] = 1.0;
  CHECK_THROWS_AS(emit_csv({row}, "/nonexistent/dir/out.csv"), IoError);
}

TEST_CASE("summaries compute mean and standard error per group") {
  ExperimentRow zero;
  zero.sweep_value = 10;
  zero.replication = 0;
  zero.method = Method::kMotif;
  zero.motif_kind = MotifKind::kTriangle;
  zero.metrics[static_cast<std::size_t>(MetricField::kAri)] = 0.0;
  ExperimentRow one = zero;
  one.replication = 1;
  one.metrics[static_cast<std::size_t>(MetricField::kAri)] = 1.0;

  const std::vector<SummaryRow> summary = summarize({zero, one});
  REQUIRE(summary.size() == 1);
  CHECK(summary[0].sweep_value == 10);
  CHECK(summary[0].method == Method::kMotif);
  CHECK(summary[0].motif_kind == MotifKind::kTriangle);
  CHECK(summary[0].metric == MetricField::kAri);
  CHECK(summary[0].count == 2);
  // Two-point formula: mean 1/2, sample sd sqrt(1/2), SE sd/sqrt(2) = 1/2.
  CHECK(summary[0].mean == 0.5);
  CHECK(summary[0].standard_error == 0.5);

  // A constant metric has zero standard error.
  ExperimentRow same = one;
  same.metrics[static_cast<std::size_t>(MetricField::kAri)] = 1.0;
  const std::vector<SummaryRow> constant = summarize({one, same});
  CHECK(constant[0].mean == 1.0);
  CHECK(constant[0].standard_error == 0.0);

  // Single replication: SE defined as 0.
  const std::vector<SummaryRow> single = summarize({zero});
  CHECK(single[0].standard_error == 0.0);

  std::ostringstream out;
  emit_summary_csv(summary, out);
  CHECK(out.str() ==
        "sweep_value,method,motif,metric,mean,stderr,replications\n"
        "10,motif,triangle,ari,0.5,0.5,2\n");
}

TEST_CASE("core-periphery configs run through the general connectivity path") {
  const char* core_periphery = R"json({
    "sweep": {"variable": "n", "values": [12]},
    "fixed": {"K": 2, "B": [[0.9, 0.3], [0.3, 0.1]],
              "weights": {"kind": "uniform", "a": 0.5, "b": 0.6}},
    "methods": ["edge", "motif"], "replications": 2,
    "record": ["ari", "modularity", "eigengap_analytic"]
  })json";
  const ExperimentConfig config = ExperimentConfig::from_json_text(core_periphery);
  const WsbmParams params = config.instantiate(12);
  CHECK(params.connectivity(0, 0) == 0.9);
  CHECK(params.connectivity(1, 1) == 0.1);
  const std::vector<ExperimentRow> rows = run_experiment(config);
  REQUIRE(rows.size() == 4);
  // No closed form for the analytic gap here: NaN in every row.
  for (const ExperimentRow& row : rows) {
    const auto& gap = row.metrics[static_cast<std::size_t>(MetricField::kEigengapAnalytic)];
    REQUIRE(gap.has_value());
    CHECK(std::isnan(*gap));
  }
}

TEST_CASE("disassortative per-block weight laws parse and run") {
  const char* disassortative = R"json({
    "sweep": {"variable": "n", "values": [12]},
    "fixed": {"K": 2, "p": 0.5, "out_in_ratio": 1.0,
              "within_weights": {"kind": "uniform", "a": 0.01, "b": 0.5},
              "between_weights": {"kind": "uniform", "a": 0.5, "b": 1.0}},
    "methods": ["motif"], "replications": 2,
    "record": ["ari"]
  })json";
  const ExperimentConfig config = ExperimentConfig::from_json_text(disassortative);
  const WsbmParams params = config.instantiate(12);
  // Equal probabilities, unequal weight laws.
  CHECK(params.connectivity(0, 0) == params.connectivity(0, 1));
  CHECK(params.weight_dist(0, 0) == WeightDistribution::uniform(0.01, 0.5));
  CHECK(params.weight_dist(0, 1) == WeightDistribution::uniform(0.5, 1.0));
  CHECK(run_experiment(config).size() == 2);
}

TEST_CASE("format_real prints 10 significant digits and spells out nan") {
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(1.0 / 3.0) == "0.3333333333");
  CHECK(format_real(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_real(101.808) == "101.808");
}
