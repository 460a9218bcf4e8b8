// Weighted stochastic block model: parameter construction, the sampler, and
// the closed-form population quantities (moments, matrices, eigen-gap,
// eigenvector structure).

#include <cmath>
#include <vector>

#include <doctest.h>

#include "motifclust/errors.hpp"
#include "motifclust/parallel.hpp"
#include "motifclust/rng.hpp"
#include "motifclust/spectral.hpp"
#include "motifclust/wsbm.hpp"

using namespace motifclust;

namespace {

// The worked two-block model used throughout: n=60, K=2, p=0.5, lambda=0.4,
// Uniform(0.01, 1) weights (mean 0.505).
WsbmParams worked_params() {
  return WsbmParams::simple_form(60, 2, 0.5, 0.4, WeightDistribution::uniform(0.01, 1.0));
}

double sample_mean_of(const WeightDistribution& law, int draws, std::uint64_t seed) {
  RngStream rng(seed, rng_domain::kTestData);
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) sum += law.sample(rng);
  return sum / draws;
}

}  // namespace

TEST_CASE("weight law domains and means") {
  CHECK(WeightDistribution::uniform(0.01, 1.0).mean() == doctest::Approx(0.505).epsilon(1e-12));
  CHECK(WeightDistribution::chi_squared(1.0).mean() == 1.0);
  CHECK(WeightDistribution::exponential(2.0).mean() == 0.5);
  CHECK(WeightDistribution::constant(3.5).mean() == 3.5);

  CHECK_THROWS_AS(WeightDistribution::uniform(1.0, 1.0).validate(), InvalidParam);
  CHECK_THROWS_AS(WeightDistribution::uniform(-0.1, 1.0).validate(), InvalidParam);
  CHECK_THROWS_AS(WeightDistribution::chi_squared(0.0).validate(), InvalidParam);
  CHECK_THROWS_AS(WeightDistribution::exponential(-1.0).validate(), InvalidParam);
  CHECK_THROWS_AS(WeightDistribution::constant(0.0).validate(), InvalidParam);
}

TEST_CASE("weight law sampling hits the first moment within 3 standard errors") {
  const int n = 200000;
  const double root_n = std::sqrt(static_cast<double>(n));
  // Variances: uniform (b-a)^2/12, chi^2 2*df, exponential 1/rate^2.
  CHECK(std::abs(sample_mean_of(WeightDistribution::uniform(0.01, 1.0), n, 1) - 0.505) <
        3.0 * (0.99 / std::sqrt(12.0)) / root_n);
  CHECK(std::abs(sample_mean_of(WeightDistribution::chi_squared(1.0), n, 2) - 1.0) <
        3.0 * std::sqrt(2.0) / root_n);
  CHECK(std::abs(sample_mean_of(WeightDistribution::chi_squared(5.0), n, 3) - 5.0) <
        3.0 * std::sqrt(10.0) / root_n);
  CHECK(std::abs(sample_mean_of(WeightDistribution::exponential(1.0), n, 4) - 1.0) <
        3.0 / root_n);
  CHECK(sample_mean_of(WeightDistribution::constant(2.0), 100, 5) == 2.0);
}

TEST_CASE("chi-squared and exponential samples are strictly positive") {
  RngStream rng(6, rng_domain::kTestData);
  const WeightDistribution chi = WeightDistribution::chi_squared(1.0);
  const WeightDistribution exp = WeightDistribution::exponential(3.0);
  for (int i = 0; i < 20000; ++i) {
    CHECK(chi.sample(rng) > 0.0);
    CHECK(exp.sample(rng) > 0.0);
  }
}

TEST_CASE("simple-form connectivity is p*lambda*I + p*(1-lambda)*ones") {
  const WsbmParams params = worked_params();
  CHECK(params.n == 60);
  CHECK(params.k == 2);
  REQUIRE(params.connectivity.rows() == 2);
  CHECK(params.connectivity(0, 0) == 0.5);
  CHECK(params.connectivity(1, 1) == 0.5);
  CHECK(params.connectivity(0, 1) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(params.connectivity(0, 1) == params.connectivity(1, 0));
  CHECK(two_level_form(params));

  const WeightDistribution w = WeightDistribution::constant(1.0);
  CHECK_THROWS_AS(WsbmParams::simple_form(10, 2, 0.5, 0.0, w), InvalidParam);
  CHECK_THROWS_AS(WsbmParams::simple_form(10, 2, 0.5, 1.0, w), InvalidParam);
  CHECK_THROWS_AS(WsbmParams::simple_form(10, 2, 0.0, 0.4, w), InvalidParam);
  CHECK_THROWS_AS(WsbmParams::simple_form(10, 2, 1.5, 0.4, w), InvalidParam);
}

TEST_CASE("two-level form covers disassortative and block-diagonal corners") {
  const WeightDistribution w = WeightDistribution::constant(1.0);
  // Equal probabilities (out-in ratio 1) are allowed here although
  // simple_form excludes lambda = 0.
  const WsbmParams equal = WsbmParams::two_level(10, 2, 0.5, 0.5, w, w);
  CHECK(equal.connectivity(0, 0) == equal.connectivity(0, 1));
  CHECK(two_level_form(equal));
  // between_p = 0: disconnected communities.
  const WsbmParams split = WsbmParams::two_level(10, 2, 0.5, 0.0, w, w);
  CHECK(split.connectivity(0, 1) == 0.0);
  CHECK_THROWS_AS(WsbmParams::two_level(10, 2, 0.0, 0.1, w, w), InvalidParam);
  CHECK_THROWS_AS(WsbmParams::two_level(10, 2, 0.5, 1.1, w, w), InvalidParam);
}

TEST_CASE("general parameters are validated") {
  const WeightDistribution w = WeightDistribution::constant(1.0);
  std::vector<std::vector<WeightDistribution>> weights(2, std::vector<WeightDistribution>(2, w));
  Matrix b(2, 2);
  b << 0.5, 0.3, 0.3, 0.05;
  const WsbmParams core_periphery = WsbmParams::general(60, 2, b, weights);
  core_periphery.validate();
  CHECK_FALSE(two_level_form(core_periphery));  // unequal diagonal entries

  Matrix asym = b;
  asym(0, 1) = 0.2;
  CHECK_THROWS_AS(WsbmParams::general(60, 2, asym, weights).validate(), NotSymmetric);
  Matrix outside = b;
  outside(0, 0) = 1.5;
  CHECK_THROWS_AS(WsbmParams::general(60, 2, outside, weights).validate(), InvalidParam);
  CHECK_THROWS_AS(WsbmParams::general(60, 3, b, weights).validate(), ShapeMismatch);
}

TEST_CASE("sampler determinism, symmetry, and label checks") {
  const WsbmParams params = worked_params();
  const CommunityLabels labels = balanced_labels(60, 2);
  const WeightedGraph a = sample_wsbm(params, labels, 42);
  const WeightedGraph b = sample_wsbm(params, labels, 42);
  CHECK(a.weights() == b.weights());
  const WeightedGraph c = sample_wsbm(params, labels, 43);
  CHECK(a.weights() != c.weights());

  CHECK(a.weights().diagonal().isZero(0.0));
  CHECK(a.weights() == a.weights().transpose().eval());

  set_thread_count(1);
  const WeightedGraph serial = sample_wsbm(params, labels, 42);
  set_thread_count(4);
  const WeightedGraph parallel = sample_wsbm(params, labels, 42);
  set_thread_count(0);
  CHECK(serial.weights() == parallel.weights());

  CHECK_THROWS_AS(sample_wsbm(params, balanced_labels(59, 2), 1), LabelMismatch);
  CHECK_THROWS_AS(sample_wsbm(params, balanced_labels(60, 3), 1), KMismatch);
}

TEST_CASE("degenerate connectivities sample as expected") {
  const WeightDistribution w = WeightDistribution::constant(2.0);
  // All-ones connectivity: complete graph, every weight exactly 2.
  const WsbmParams full = WsbmParams::two_level(8, 2, 1.0, 1.0, w, w);
  const WeightedGraph g = sample_wsbm(full, balanced_labels(8, 2), 0);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      CHECK(g.weight(i, j) == (i == j ? 0.0 : 2.0));
    }
  }
  // Zero between-probability: no cross-community edges, ever.
  const WsbmParams split = WsbmParams::two_level(20, 2, 1.0, 0.0, w, w);
  const CommunityLabels labels = balanced_labels(20, 2);
  const WeightedGraph h = sample_wsbm(split, labels, 3);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      if (labels.values[static_cast<std::size_t>(i)] !=
          labels.values[static_cast<std::size_t>(j)]) {
        CHECK(h.weight(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("sampled entry means match e1/e2 within 3 standard errors") {
  // One big graph: n=2000 gives ~500k within pairs and ~1M between pairs.
  const WsbmParams params =
      WsbmParams::simple_form(2000, 2, 0.5, 0.4, WeightDistribution::uniform(0.01, 1.0));
  const CommunityLabels labels = balanced_labels(2000, 2);
  const WeightedGraph g = sample_wsbm(params, labels, 7);
  const EdgeMoments moments = population_edge_moments(params);
  CHECK(moments.e1 == doctest::Approx(0.5 * 0.505).epsilon(1e-12));
  CHECK(moments.e2 == doctest::Approx(0.3 * 0.505).epsilon(1e-12));

  double within_sum = 0.0, between_sum = 0.0;
  std::int64_t within_pairs = 0, between_pairs = 0;
  for (int i = 0; i < 2000; ++i) {
    for (int j = i + 1; j < 2000; ++j) {
      if (labels.values[static_cast<std::size_t>(i)] ==
          labels.values[static_cast<std::size_t>(j)]) {
        within_sum += g.weight(i, j);
        ++within_pairs;
      } else {
        between_sum += g.weight(i, j);
        ++between_pairs;
      }
    }
  }
  // Var(entry) <= E[entry^2] = p*E[V^2] <= p * max(V)^2 <= 0.5.
  const double within_se = std::sqrt(0.5 / static_cast<double>(within_pairs));
  const double between_se = std::sqrt(0.5 / static_cast<double>(between_pairs));
  CHECK(std::abs(within_sum / static_cast<double>(within_pairs) - moments.e1) < 3 * within_se);
  CHECK(std::abs(between_sum / static_cast<double>(between_pairs) - moments.e2) < 3 * between_se);
}

TEST_CASE("worked motif moments: h1 = 7.34775, h2 = 3.95415") {
  const MotifMoments moments = population_motif_moments(worked_params());
  // h1 = 3*0.505*0.125*28 + 30*(0.5*0.09)*(0.505 + 1.01)
  CHECK(moments.h1 == doctest::Approx(7.34775).epsilon(1e-12));
  // h2 = 2*29*(0.5*0.09*0.505)*... evaluated: 3.95415
  CHECK(moments.h2 == doctest::Approx(3.95415).epsilon(1e-12));
}

TEST_CASE("motif moments preconditions and K=1 convention") {
  const WeightDistribution w = WeightDistribution::constant(1.0);
  // K = 1: no between pairs, h2 = 0 by convention.
  const MotifMoments single = population_motif_moments(WsbmParams::two_level(9, 1, 0.5, 0.5, w, w));
  CHECK(single.h2 == 0.0);
  // h1 = 3*alpha*a^3*(m-2) with alpha=1, a=0.5, m=9.
  CHECK(single.h1 == doctest::Approx(3.0 * 0.125 * 7.0).epsilon(1e-12));

  Matrix b(2, 2);
  b << 0.5, 0.3, 0.3, 0.05;
  std::vector<std::vector<WeightDistribution>> weights(2, std::vector<WeightDistribution>(2, w));
  CHECK_THROWS_AS(population_motif_moments(WsbmParams::general(60, 2, b, weights)),
                  UnsupportedForm);
  CHECK_THROWS_AS(
      population_motif_moments(WsbmParams::two_level(7, 2, 0.5, 0.3, w, w)), Unbalanced);
}

TEST_CASE("population matrices carry the block structure") {
  const WsbmParams params = worked_params();
  const CommunityLabels labels = balanced_labels(60, 2);
  const PopulationMatrices pop = population_matrices(params, labels);
  CHECK(pop.h1 == doctest::Approx(7.34775).epsilon(1e-12));
  CHECK(pop.h2 == doctest::Approx(3.95415).epsilon(1e-12));
  // script_w: B * mean weight, including the diagonal (rank-K convention).
  CHECK(pop.script_w(0, 0) == doctest::Approx(0.5 * 0.505).epsilon(1e-12));
  CHECK(pop.script_w(0, 1) == doctest::Approx(0.5 * 0.505).epsilon(1e-12));
  CHECK(pop.script_w(0, 59) == doctest::Approx(0.3 * 0.505).epsilon(1e-12));
  CHECK(pop.script_w_motif(0, 0) == pop.h1);
  CHECK(pop.script_w_motif(0, 29) == pop.h1);
  CHECK(pop.script_w_motif(0, 30) == pop.h2);
  CHECK(pop.script_w_motif == pop.script_w_motif.transpose().eval());
}

TEST_CASE("analytic eigen-gap equals the numeric K-th eigenvalue") {
  const WsbmParams params = worked_params();
  const double gap = analytic_eigengap(params);
  CHECK(gap == doctest::Approx(101.808).epsilon(1e-12));

  const CommunityLabels labels = balanced_labels(60, 2);
  const PopulationMatrices pop = population_matrices(params, labels);
  const EigenPairs top = top_k_eigen(pop.script_w_motif, 2);
  CHECK(std::abs(top.values(1)) == doctest::Approx(gap).epsilon(1e-10));

  // Edge analog: (n/K) * (e1 - e2) = 30 * 0.505 * 0.2.
  CHECK(analytic_eigengap_edge(params) == doctest::Approx(30 * 0.505 * 0.2).epsilon(1e-12));
}

TEST_CASE("population eigenvectors realize the two-value row structure") {
  const WsbmParams params = worked_params();
  const CommunityLabels labels = balanced_labels(60, 2);
  const Matrix vecs = population_eigvecs(params, labels);
  REQUIRE(vecs.rows() == 60);
  REQUIRE(vecs.cols() == 2);
  // Rows agree within a community...
  for (int i = 1; i < 30; ++i) {
    CHECK((vecs.row(i) - vecs.row(0)).norm() < 1e-10);
    CHECK((vecs.row(30 + i) - vecs.row(30)).norm() < 1e-10);
  }
  // ...and differ by sqrt(1/30 + 1/30) across.
  CHECK((vecs.row(0) - vecs.row(30)).norm() ==
        doctest::Approx(std::sqrt(2.0 / 30.0)).epsilon(1e-10));
}

TEST_CASE("population eigenvectors for K=1 are the constant vector") {
  const WeightDistribution w = WeightDistribution::constant(1.0);
  const WsbmParams params = WsbmParams::two_level(16, 1, 0.5, 0.5, w, w);
  const Matrix vecs = population_eigvecs(params, balanced_labels(16, 1));
  REQUIRE(vecs.cols() == 1);
  for (int i = 0; i < 16; ++i) CHECK(vecs(i, 0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("rank-deficient population matrix is rejected") {
  // m = 2, K = 2 with equal probabilities and one law: h1 == h2, so the
  // population matrix has a single nonzero eigenvalue.
  const WeightDistribution w = WeightDistribution::constant(1.0);
  const WsbmParams params = WsbmParams::two_level(4, 2, 0.5, 0.5, w, w);
  const MotifMoments moments = population_motif_moments(params);
  CHECK(moments.h1 == moments.h2);
  CHECK_THROWS_AS(population_eigvecs(params, balanced_labels(4, 2)), RankDeficient);
}

TEST_CASE("edge population handles arbitrary connectivity") {
  const WeightDistribution heavy = WeightDistribution::constant(2.0);
  const WeightDistribution light = WeightDistribution::constant(0.5);
  Matrix b(2, 2);
  b << 0.5, 0.3, 0.3, 0.05;
  std::vector<std::vector<WeightDistribution>> weights{{heavy, light}, {light, heavy}};
  const WsbmParams params = WsbmParams::general(4, 2, b, weights);
  const Matrix pop = edge_population(params, balanced_labels(4, 2));
  CHECK(pop(0, 1) == doctest::Approx(0.5 * 2.0).epsilon(1e-15));
  CHECK(pop(0, 2) == doctest::Approx(0.3 * 0.5).epsilon(1e-15));
  CHECK(pop(2, 3) == doctest::Approx(0.05 * 2.0).epsilon(1e-15));
  CHECK(pop(0, 0) == doctest::Approx(0.5 * 2.0).epsilon(1e-15));  // diagonal kept
}
