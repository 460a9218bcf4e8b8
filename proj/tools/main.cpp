// Command-line front end: motif matrix construction, spectral clustering,
// partition scoring, and the Monte Carlo experiment runner.
//
// Exit codes: 0 success, 1 configuration/usage error, 2 runtime error.

#include <charconv>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "motifclust/errors.hpp"
#include "motifclust/experiment.hpp"
#include "motifclust/graph.hpp"
#include "motifclust/metrics.hpp"
#include "motifclust/motif.hpp"
#include "motifclust/parallel.hpp"
#include "motifclust/spectral.hpp"

namespace {

using motifclust::CommunityLabels;
using motifclust::Matrix;
using motifclust::WeightedGraph;

std::string shortest_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

// Runs `body(out)` against stdout when `path` is empty, else against `path`.
template <typename Body>
void with_output(const std::string& path, Body&& body) {
  if (path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw motifclust::IoError("cannot open '" + path + "' for writing");
  body(out);
  if (!out) throw motifclust::IoError("failed writing '" + path + "'");
}

// Nonzero upper triangle of a node-aligned symmetric matrix as
// "<u> <v> <value>" lines, using the graph's external node ids.
void write_matrix_edges(const WeightedGraph& graph, const Matrix& m, std::ostream& out) {
  const std::vector<std::int64_t>& ids = graph.node_ids();
  const int n = graph.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (m(i, j) != 0.0) {
        out << ids[static_cast<std::size_t>(i)] << ' ' << ids[static_cast<std::size_t>(j)] << ' '
            << shortest_double(m(i, j)) << '\n';
      }
    }
  }
}

void run_motif(const std::string& input, const std::string& kind_name, const std::string& out) {
  const WeightedGraph graph = motifclust::load_edge_list(input);
  const motifclust::MotifMatrix motif =
      motifclust::build_motif_matrix(graph, motifclust::motif_kind_from_string(kind_name));
  with_output(out, [&](std::ostream& stream) { write_matrix_edges(graph, motif.values, stream); });
}

void run_cluster(const std::string& input, int k, const std::string& method,
                 const std::string& kind_name, int restarts, std::uint64_t seed,
                 const std::string& out) {
  const WeightedGraph graph = motifclust::load_edge_list(input);
  const Matrix* target = &graph.weights();
  motifclust::MotifMatrix motif;
  if (method == "motif") {
    motif = motifclust::build_motif_matrix(graph, motifclust::motif_kind_from_string(kind_name));
    target = &motif.values;
  }
  const CommunityLabels labels = motifclust::spectral_cluster(*target, k, restarts, seed);
  if (out.empty()) {
    for (int value : labels.values) std::cout << value << '\n';
  } else {
    motifclust::write_labels(labels, out);
  }
}

void run_metrics(const std::string& labels_path, const std::string& truth_path,
                 const std::string& graph_path, const std::string& kind_name) {
  const CommunityLabels labels = motifclust::load_labels(labels_path);
  const CommunityLabels truth = motifclust::load_labels(truth_path);
  nlohmann::json report;
  // The misclustering rate needs matching community counts; agreement scores
  // are defined for any pair of partitions.
  if (labels.k == truth.k) {
    report["miscluster_rate"] = motifclust::miscluster_rate(labels, truth);
  } else {
    report["miscluster_rate"] = nullptr;
  }
  report["ari"] = motifclust::adjusted_rand_index(labels, truth);
  report["nmi"] = motifclust::normalized_mutual_information(labels, truth);
  if (!graph_path.empty()) {
    const WeightedGraph graph = motifclust::load_edge_list(graph_path);
    const motifclust::MotifMatrix motif =
        motifclust::build_motif_matrix(graph, motifclust::motif_kind_from_string(kind_name));
    report["modularity"] = motifclust::modularity(motif, labels);
  }
  std::cout << report.dump() << '\n';
}

void run_simulate(const std::string& config_path, const std::string& out,
                  const std::string& summary_out) {
  const motifclust::ExperimentConfig config = motifclust::ExperimentConfig::from_file(config_path);
  const std::vector<motifclust::ExperimentRow> rows = motifclust::run_experiment(config);
  motifclust::emit_csv(rows, out);
  if (!summary_out.empty()) {
    motifclust::emit_summary_csv(motifclust::summarize(rows), summary_out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order (motif-based) spectral clustering of weighted networks"};
  app.set_version_flag("--version", "motifclust 0.1.0");
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

  std::string motif_input, motif_kind = "triangle", motif_out;
  CLI::App* motif_cmd =
      app.add_subcommand("motif", "Build a weighted motif adjacency matrix from an edge list");
  motif_cmd->fallthrough();
  motif_cmd->add_option("--input", motif_input, "Input edge list (u v weight per line)")
      ->required();
  motif_cmd->add_option("--motif", motif_kind, "Motif kind: triangle, wedge, or clique4")
      ->check(CLI::IsMember({"triangle", "wedge", "clique4"}));
  motif_cmd->add_option("--out", motif_out, "Output edge list (default: stdout)");
  motif_cmd->callback([&] { run_motif(motif_input, motif_kind, motif_out); });

  std::string cluster_input, cluster_method = "motif", cluster_kind = "triangle", cluster_out;
  int cluster_k = 0;
  int cluster_restarts = motifclust::kDefaultKMeansRestarts;
  std::uint64_t cluster_seed = 0;
  CLI::App* cluster_cmd =
      app.add_subcommand("cluster", "Spectrally cluster an edge list into K communities");
  cluster_cmd->fallthrough();
  cluster_cmd->add_option("--input", cluster_input, "Input edge list")->required();
  cluster_cmd->add_option("--k", cluster_k, "Number of communities")
      ->required()
      ->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--method", cluster_method, "edge or motif")
      ->check(CLI::IsMember({"edge", "motif"}));
  cluster_cmd->add_option("--motif", cluster_kind, "Motif kind for --method motif")
      ->check(CLI::IsMember({"triangle", "wedge", "clique4"}));
  cluster_cmd->add_option("--restarts", cluster_restarts, "k-means restarts")
      ->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--seed", cluster_seed, "Random seed");
  cluster_cmd->add_option("--out", cluster_out, "Output labels file (default: stdout)");
  cluster_cmd->callback([&] {
    run_cluster(cluster_input, cluster_k, cluster_method, cluster_kind, cluster_restarts,
                cluster_seed, cluster_out);
  });

  std::string metrics_labels, metrics_truth, metrics_graph, metrics_kind = "triangle";
  CLI::App* metrics_cmd =
      app.add_subcommand("metrics", "Score an estimated partition against ground truth");
  metrics_cmd->fallthrough();
  metrics_cmd->add_option("--labels", metrics_labels, "Estimated labels file")->required();
  metrics_cmd->add_option("--truth", metrics_truth, "Ground-truth labels file")->required();
  metrics_cmd->add_option("--graph", metrics_graph,
                          "Edge list; adds motif-matrix modularity to the report");
  metrics_cmd->add_option("--motif", metrics_kind, "Motif kind for modularity")
      ->check(CLI::IsMember({"triangle", "wedge", "clique4"}))
      ->needs(metrics_cmd->get_option("--graph"));
  metrics_cmd->callback(
      [&] { run_metrics(metrics_labels, metrics_truth, metrics_graph, metrics_kind); });

  std::string simulate_config, simulate_out, simulate_summary;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Run a Monte Carlo experiment from a JSON config");
  simulate_cmd->fallthrough();
  simulate_cmd->add_option("--config", simulate_config, "Experiment config (JSON)")->required();
  simulate_cmd->add_option("--out", simulate_out, "Per-replication CSV output path")->required();
  simulate_cmd->add_option("--summary", simulate_summary,
                           "Optional grouped mean/standard-error CSV path");
  simulate_cmd->callback([&] { run_simulate(simulate_config, simulate_out, simulate_summary); });

  app.parse_complete_callback([&] { motifclust::set_thread_count(threads); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const motifclust::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const motifclust::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
