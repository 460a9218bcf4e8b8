// Microbenchmarks for the hot paths: model sampling, motif matrix
// construction, the eigensolver, and the end-to-end clustering pipeline.

#include <cstdint>

#include <benchmark/benchmark.h>

#include "motifclust/graph.hpp"
#include "motifclust/motif.hpp"
#include "motifclust/spectral.hpp"
#include "motifclust/wsbm.hpp"

namespace {

using namespace motifclust;

WeightedGraph erdos_renyi(int n, double p, std::uint64_t seed) {
  const WsbmParams params =
      WsbmParams::two_level(n, 1, p, p, WeightDistribution::uniform(0.01, 1.0),
                            WeightDistribution::uniform(0.01, 1.0));
  return sample_wsbm(params, balanced_labels(n, 1), seed);
}

WsbmParams two_block(int n) {
  return WsbmParams::simple_form(n, 2, 0.5, 0.4, WeightDistribution::uniform(0.01, 1.0));
}

void BM_SampleWsbm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WsbmParams params = two_block(n);
  const CommunityLabels labels = balanced_labels(n, 2);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_wsbm(params, labels, seed++));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SampleWsbm)->Arg(200)->Arg(500)->Arg(1000)->Arg(2000)->Complexity();

void BM_TriangleBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WeightedGraph graph = erdos_renyi(n, 0.05, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_motif_matrix(graph, MotifKind::kTriangle));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_TriangleBuild)->Arg(200)->Arg(500)->Arg(1000)->Arg(2000)->Complexity();

void BM_WedgeBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WeightedGraph graph = erdos_renyi(n, 0.05, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_motif_matrix(graph, MotifKind::kWedge));
  }
}
BENCHMARK(BM_WedgeBuild)->Arg(200)->Arg(500)->Arg(1000);

void BM_FourCliqueBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WeightedGraph graph = erdos_renyi(n, 0.05, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_motif_matrix(graph, MotifKind::kFourClique));
  }
}
BENCHMARK(BM_FourCliqueBuild)->Arg(200)->Arg(500)->Arg(1000);

void BM_TopKEigen(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WeightedGraph graph = sample_wsbm(two_block(n), balanced_labels(n, 2), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(top_k_eigen(graph.weights(), 2));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_TopKEigen)->Arg(200)->Arg(500)->Arg(1000)->Complexity();

// Sample + motif build + spectral clustering, the per-replication work unit
// of the experiment harness.
void BM_MotifPipeline(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WsbmParams params = two_block(n);
  const CommunityLabels labels = balanced_labels(n, 2);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const WeightedGraph graph = sample_wsbm(params, labels, seed++);
    const MotifMatrix motif = build_motif_matrix(graph, MotifKind::kTriangle);
    benchmark::DoNotOptimize(spectral_cluster(motif.values, 2, kDefaultKMeansRestarts, seed));
  }
}
BENCHMARK(BM_MotifPipeline)->Arg(60)->Arg(120)->Arg(240);

}  // namespace

BENCHMARK_MAIN();
