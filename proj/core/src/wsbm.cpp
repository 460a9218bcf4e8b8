#include "motifclust/wsbm.hpp"

#include <cmath>
#include <string>

#include "motifclust/errors.hpp"
#include "motifclust/parallel.hpp"
#include "motifclust/rng.hpp"
#include "motifclust/spectral.hpp"

namespace motifclust {

namespace {

// Marsaglia-Tsang for shape >= 1 (scale folded in by the caller).
double sample_gamma_ge1(RngStream& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_gamma(RngStream& rng, double shape, double scale) {
  if (shape >= 1.0) return scale * sample_gamma_ge1(rng, shape);
  // Boost a shape+1 draw down: G(a) = G(a+1) * U^(1/a).
  const double boosted = sample_gamma_ge1(rng, shape + 1.0);
  const double u = rng.next_uniform_open();
  return scale * boosted * std::pow(u, 1.0 / shape);
}

void require_square_symmetric(const Matrix& m, int k, const char* what) {
  if (m.rows() != k || m.cols() != k) {
    throw ShapeMismatch(std::string(what) + " must be " + std::to_string(k) + "x" +
                        std::to_string(k) + ", got " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
  }
  for (int q = 0; q < k; ++q) {
    for (int l = q + 1; l < k; ++l) {
      if (m(q, l) != m(l, q)) {
        throw NotSymmetric(std::string(what) + " differs at (" + std::to_string(q) + "," +
                           std::to_string(l) + ")");
      }
    }
  }
}

void require_compatible_labels(const WsbmParams& params, const CommunityLabels& labels) {
  labels.validate();
  if (labels.size() != params.n) {
    throw LabelMismatch("labels cover " + std::to_string(labels.size()) + " nodes, model has " +
                        std::to_string(params.n));
  }
  if (labels.k != params.k) {
    throw KMismatch("labels use k=" + std::to_string(labels.k) + ", model has k=" +
                    std::to_string(params.k));
  }
}

void require_closed_form(const WsbmParams& params) {
  params.validate();
  if (!two_level_form(params)) {
    throw UnsupportedForm("population motif moments need equal within-community and equal "
                          "between-community (probability, weight law) pairs");
  }
  if (params.n % params.k != 0) {
    throw Unbalanced("population motif moments need K | n, got n=" + std::to_string(params.n) +
                     ", K=" + std::to_string(params.k));
  }
}

}  // namespace

WeightDistribution WeightDistribution::uniform(double lo, double hi) {
  WeightDistribution d{Kind::kUniform, lo, hi};
  d.validate();
  return d;
}

WeightDistribution WeightDistribution::chi_squared(double df) {
  WeightDistribution d{Kind::kChiSquared, df, 0.0};
  d.validate();
  return d;
}

WeightDistribution WeightDistribution::exponential(double rate) {
  WeightDistribution d{Kind::kExponential, rate, 0.0};
  d.validate();
  return d;
}

WeightDistribution WeightDistribution::constant(double value) {
  WeightDistribution d{Kind::kConstant, value, 0.0};
  d.validate();
  return d;
}

void WeightDistribution::validate() const {
  switch (kind) {
    case Kind::kUniform:
      if (!(param_a >= 0.0) || !(param_b > param_a)) {
        throw InvalidParam("uniform weight law needs 0 <= lo < hi, got [" +
                           std::to_string(param_a) + ", " + std::to_string(param_b) + ")");
      }
      return;
    case Kind::kChiSquared:
      if (!(param_a > 0.0)) {
        throw InvalidParam("chi-squared weight law needs df > 0, got " + std::to_string(param_a));
      }
      return;
    case Kind::kExponential:
      if (!(param_a > 0.0)) {
        throw InvalidParam("exponential weight law needs rate > 0, got " + std::to_string(param_a));
      }
      return;
    case Kind::kConstant:
      if (!(param_a > 0.0)) {
        throw InvalidParam("constant weight law needs value > 0, got " + std::to_string(param_a));
      }
      return;
  }
  throw InvalidParam("unknown weight law kind");
}

double WeightDistribution::mean() const {
  switch (kind) {
    case Kind::kUniform: return 0.5 * (param_a + param_b);
    case Kind::kChiSquared: return param_a;
    case Kind::kExponential: return 1.0 / param_a;
    case Kind::kConstant: return param_a;
  }
  throw InvalidParam("unknown weight law kind");
}

double WeightDistribution::sample(RngStream& rng) const {
  switch (kind) {
    case Kind::kUniform: return param_a + (param_b - param_a) * rng.next_uniform();
    case Kind::kChiSquared: return sample_gamma(rng, 0.5 * param_a, 2.0);
    case Kind::kExponential: return -std::log(rng.next_uniform_open()) / param_a;
    case Kind::kConstant: return param_a;
  }
  throw InvalidParam("unknown weight law kind");
}

WsbmParams WsbmParams::simple_form(int n, int k, double p, double lambda,
                                   const WeightDistribution& weight) {
  if (!(p > 0.0) || p > 1.0) {
    throw InvalidParam("simple form needs p in (0, 1], got " + std::to_string(p));
  }
  if (!(lambda > 0.0) || !(lambda < 1.0)) {
    throw InvalidParam("simple form needs lambda in (0, 1), got " + std::to_string(lambda));
  }
  return two_level(n, k, p, p * (1.0 - lambda), weight, weight);
}

WsbmParams WsbmParams::two_level(int n, int k, double within_p, double between_p,
                                 const WeightDistribution& within_weight,
                                 const WeightDistribution& between_weight) {
  if (!(within_p > 0.0) || within_p > 1.0) {
    throw InvalidParam("within-community probability must lie in (0, 1], got " +
                       std::to_string(within_p));
  }
  if (between_p < 0.0 || between_p > 1.0) {
    throw InvalidParam("between-community probability must lie in [0, 1], got " +
                       std::to_string(between_p));
  }
  if (k < 1) throw KOutOfRange("k must be >= 1, got " + std::to_string(k));
  Matrix connectivity = Matrix::Constant(k, k, between_p);
  connectivity.diagonal().setConstant(within_p);
  std::vector<std::vector<WeightDistribution>> weights(
      static_cast<std::size_t>(k),
      std::vector<WeightDistribution>(static_cast<std::size_t>(k), between_weight));
  for (int q = 0; q < k; ++q) weights[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)] = within_weight;
  return general(n, k, std::move(connectivity), std::move(weights));
}

WsbmParams WsbmParams::general(int n, int k, Matrix connectivity,
                               std::vector<std::vector<WeightDistribution>> weights) {
  WsbmParams params;
  params.n = n;
  params.k = k;
  params.connectivity = std::move(connectivity);
  params.weights = std::move(weights);
  params.validate();
  return params;
}

void WsbmParams::validate() const {
  if (n < 1) throw InvalidParam("model needs n >= 1, got " + std::to_string(n));
  if (k < 1 || k > n) {
    throw KOutOfRange("k=" + std::to_string(k) + " outside 1..n with n=" + std::to_string(n));
  }
  require_square_symmetric(connectivity, k, "connectivity");
  for (int q = 0; q < k; ++q) {
    for (int l = 0; l < k; ++l) {
      const double p = connectivity(q, l);
      if (!(p >= 0.0) || p > 1.0) {
        throw InvalidParam("connectivity(" + std::to_string(q) + "," + std::to_string(l) +
                           ")=" + std::to_string(p) + " outside [0, 1]");
      }
    }
  }
  if (weights.size() != static_cast<std::size_t>(k)) {
    throw ShapeMismatch("weight law table must have k rows");
  }
  for (int q = 0; q < k; ++q) {
    const auto& row = weights[static_cast<std::size_t>(q)];
    if (row.size() != static_cast<std::size_t>(k)) {
      throw ShapeMismatch("weight law table row " + std::to_string(q) + " must have k entries");
    }
    for (int l = 0; l < k; ++l) {
      row[static_cast<std::size_t>(l)].validate();
      if (!(weight_dist(q, l) == weight_dist(l, q))) {
        throw NotSymmetric("weight law table differs at (" + std::to_string(q) + "," +
                           std::to_string(l) + ")");
      }
    }
  }
}

bool two_level_form(const WsbmParams& params) {
  const double a = params.connectivity(0, 0);
  const auto& within = params.weight_dist(0, 0);
  for (int q = 0; q < params.k; ++q) {
    if (params.connectivity(q, q) != a) return false;
    if (!(params.weight_dist(q, q) == within)) return false;
  }
  if (params.k == 1) return true;
  const double b = params.connectivity(0, 1);
  const auto& between = params.weight_dist(0, 1);
  for (int q = 0; q < params.k; ++q) {
    for (int l = 0; l < params.k; ++l) {
      if (q == l) continue;
      if (params.connectivity(q, l) != b) return false;
      if (!(params.weight_dist(q, l) == between)) return false;
    }
  }
  return true;
}

WeightedGraph sample_wsbm(const WsbmParams& params, const CommunityLabels& labels,
                          std::uint64_t seed) {
  params.validate();
  require_compatible_labels(params, labels);
  const int n = params.n;
  Matrix w = Matrix::Zero(n, n);
  // One substream per unordered pair: the draw for (i, j) is a pure function
  // of (seed, i, j), so any thread partition produces the same matrix.
  parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
    for (int i = static_cast<int>(lo); i < static_cast<int>(hi); ++i) {
      const int gi = labels.values[static_cast<std::size_t>(i)] - 1;
      for (int j = i + 1; j < n; ++j) {
        const int gj = labels.values[static_cast<std::size_t>(j)] - 1;
        RngStream rng(seed, rng_domain::kEdgeSampling, static_cast<std::uint64_t>(i),
                      static_cast<std::uint64_t>(j));
        if (rng.next_uniform() >= params.connectivity(gi, gj)) continue;
        const double weight = params.weight_dist(gi, gj).sample(rng);
        if (weight <= 0.0) continue;  // zero-probability event; keep invariants anyway
        w(i, j) = weight;
        w(j, i) = weight;
      }
    }
  });
  return WeightedGraph(std::move(w));
}

MotifMoments population_motif_moments(const WsbmParams& params) {
  require_closed_form(params);
  const double m = static_cast<double>(params.n) / params.k;
  const double kk = static_cast<double>(params.k);
  const double a = params.connectivity(0, 0);
  const double alpha = params.weight_dist(0, 0).mean();
  MotifMoments moments;
  if (params.k == 1) {
    moments.h1 = 3.0 * alpha * a * a * a * (m - 2.0);
    moments.h2 = 0.0;
    return moments;
  }
  const double b = params.connectivity(0, 1);
  const double beta = params.weight_dist(0, 1).mean();
  const double mixed = a * b * b * (alpha + 2.0 * beta);
  moments.h1 = 3.0 * alpha * a * a * a * (m - 2.0) + (kk - 1.0) * m * mixed;
  moments.h2 = 2.0 * (m - 1.0) * mixed + (kk - 2.0) * m * 3.0 * beta * b * b * b;
  return moments;
}

EdgeMoments population_edge_moments(const WsbmParams& params) {
  require_closed_form(params);
  EdgeMoments moments;
  moments.e1 = params.connectivity(0, 0) * params.weight_dist(0, 0).mean();
  moments.e2 = params.k == 1 ? 0.0
                             : params.connectivity(0, 1) * params.weight_dist(0, 1).mean();
  return moments;
}

Matrix edge_population(const WsbmParams& params, const CommunityLabels& labels) {
  params.validate();
  require_compatible_labels(params, labels);
  const int n = params.n;
  Matrix expected(n, n);
  for (int i = 0; i < n; ++i) {
    const int gi = labels.values[static_cast<std::size_t>(i)] - 1;
    for (int j = 0; j < n; ++j) {
      const int gj = labels.values[static_cast<std::size_t>(j)] - 1;
      expected(i, j) = params.connectivity(gi, gj) * params.weight_dist(gi, gj).mean();
    }
  }
  return expected;
}

PopulationMatrices population_matrices(const WsbmParams& params,
                                       const CommunityLabels& labels) {
  require_compatible_labels(params, labels);
  if (!labels.balanced()) {
    throw Unbalanced("population motif matrix needs equal community sizes");
  }
  const MotifMoments moments = population_motif_moments(params);
  PopulationMatrices pop;
  pop.h1 = moments.h1;
  pop.h2 = moments.h2;
  pop.script_w = edge_population(params, labels);
  const int n = params.n;
  pop.script_w_motif.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      pop.script_w_motif(i, j) =
          labels.values[static_cast<std::size_t>(i)] == labels.values[static_cast<std::size_t>(j)]
              ? moments.h1
              : moments.h2;
    }
  }
  return pop;
}

double analytic_eigengap(const WsbmParams& params) {
  const MotifMoments moments = population_motif_moments(params);
  return (static_cast<double>(params.n) / params.k) * (moments.h1 - moments.h2);
}

double analytic_eigengap_edge(const WsbmParams& params) {
  const EdgeMoments moments = population_edge_moments(params);
  return (static_cast<double>(params.n) / params.k) * (moments.e1 - moments.e2);
}

Matrix population_eigvecs(const WsbmParams& params, const CommunityLabels& labels) {
  const PopulationMatrices pop = population_matrices(params, labels);
  const EigenPairs top = top_k_eigen(pop.script_w_motif, params.k);
  const double scale = std::max(1.0, std::abs(top.values(0)));
  if (std::abs(top.values(params.k - 1)) <= 1e-12 * scale) {
    throw RankDeficient("population motif matrix has fewer than K=" + std::to_string(params.k) +
                        " eigenvalues away from zero (h1 == h2)");
  }
  return top.vectors;
}

}  // namespace motifclust
