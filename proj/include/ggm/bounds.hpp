#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ggm/ggm_model.hpp"
#include "ggm/rng.hpp"
#include "ggm/types.hpp"

namespace ggm {

/// Range [lower, upper] of Z = X_r X_s - X_i X_j used by Hoeffding's inequality.
struct HoeffdingRange {
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
};

/// [-2M^2, 2M^2], the range implied by |x| <= M for unit-variance data.
HoeffdingRange hoeffding_range(double M);

/// Parameters of the Gaussian-channel bound. Noise on sensors r, i is
/// N(mu1, sigma^2); on s, j it is N(mu2, sigma^2).
struct GeneralCaseParams {
  double t = 0.1;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma_sq = 1.0;
  double M = 3.0;
  double rho_e = 0.0;       // true edge
  double rho_eprime = 0.0;  // competing non-edge
  int d = 2;
  SampleCount n = 0;
  std::optional<HoeffdingRange> range;  // defaults to hoeffding_range(M)

  void validate() const;
  HoeffdingRange effective_range() const { return range.value_or(hoeffding_range(M)); }
};

/// Parameters of the erasure-channel bound. beta is the correlation gap of
/// the erasure-output distribution (see erasure_population_correlation).
struct ErasureBoundParams {
  double beta = 0.0;
  double M = 3.0;
  int d = 2;
  SampleCount n = 0;
  std::optional<HoeffdingRange> range;

  void validate() const;
  HoeffdingRange effective_range() const { return range.value_or(hoeffding_range(M)); }
};

double sigma_L_squared(double mu1, double mu2, double sigma_sq);

/// Chernoff bound on the channel-noise part of a crossover:
/// exp(-t^2 n (1+sigma^2)^2 / (2 sigma_L^2)), clamped to [0, 1].
double lemma2_part1(double t, SampleCount n, double sigma_sq, double sigma_L_sq);

/// Hoeffding bound on the finite-sample part:
/// exp(-2 n (rho_e - rho_e' + t)^2 / (b_M - a_M)^2), clamped to [0, 1].
double lemma2_part2(double rho_e, double rho_eprime, double t, SampleCount n, double sigma_sq,
                    double M, std::optional<HoeffdingRange> range = std::nullopt);

/// min(1, d^3 (part1 + part2)).
double theorem1_bound(const GeneralCaseParams& p);

/// min(1, d^3 exp(-2 n beta^2 / (b_M - a_M)^2)).
double theorem2_bound(const ErasureBoundParams& p);

/// E[Y_i Y_j] when each side is independently replaced by 1 with
/// probability xi: (1-xi)^2 rho + xi^2.
double erasure_population_correlation(double rho, double xi);

// ---------------------------------------------------------------------------
// Quantized data through BSC(eps)

struct BscCrossoverProbs {
  double p0 = 1.0;  // T = 0
  double p1 = 0.0;  // e disagrees, e' agrees      (T = +1)
  double p2 = 0.0;  // e agrees,    e' disagrees   (T = -1)
  double D = 0.0;   // ln(p0 + 2 sqrt(p1 p2)) <= 0

  static BscCrossoverProbs from(double p0, double p1, double p2);
};

/// The true edge e and the competing pair e'.
struct CrossoverPairs {
  NodePair e;
  NodePair e_prime;
};

/// Orthant probability Pr(S1=s1, S2=s2, S3=s3) for the signs of a zero-mean
/// unit-variance trivariate normal with the given correlations.
double sign_triple_probability(double rho12, double rho13, double rho23, int s1, int s2, int s3);

/// Exact p0/p1/p2 for pairs e, e' inside a 3-node set with correlation
/// matrix `corr` (nodes 0, 1, 2). Enumerates the 8 sign triples and the 8
/// flip triples. Throws Unsupported if the pairs span more than 3 nodes.
BscCrossoverProbs bsc_crossover_probs(const Eigen::Matrix3d& corr, const CrossoverPairs& pairs,
                                      double epsilon);

/// Chain 0 -(rho1)- 1 -(rho2)- 2, so corr(0, 2) = rho1 rho2.
BscCrossoverProbs bsc_crossover_probs(double rho1, double rho2, const CrossoverPairs& pairs,
                                      double epsilon);

/// Simulation fallback valid for any layout (including disjoint pairs).
BscCrossoverProbs bsc_crossover_probs_monte_carlo(const CorrelationMatrix& corr,
                                                  const CrossoverPairs& pairs, double epsilon,
                                                  SampleCount trials, Rng& rng);

/// min(1, exp(n D)).
double lemma4_bound(const BscCrossoverProbs& probs, SampleCount n);

// ---------------------------------------------------------------------------
// Bounds using side knowledge of the tree

struct ExternalKnowledge {
  std::vector<int> subtree_sizes;        // d_1..d_K, sum = d
  std::vector<int> neighborhood_bounds;  // |N(q)| for potential-edge endpoints
};

/// Sum d_l^3 + sum N(q). The strict form requires both lists non-empty and
/// of equal length.
double algorithmic_prefactor(const ExternalKnowledge& k, int d);
double algorithmic_prefactor_general(const std::vector<int>& subtree_sizes,
                                     const std::vector<int>& neighborhood_bounds, int d);

/// min(1, prefactor * exp(-2 n beta^2 / (b_M - a_M)^2)); linear in the
/// number of subtrees.
double algorithmic_bound(const ExternalKnowledge& k, const ErasureBoundParams& p);
double algorithmic_bound_general(const std::vector<int>& subtree_sizes,
                                 const std::vector<int>& neighborhood_bounds,
                                 const ErasureBoundParams& p);

// ---------------------------------------------------------------------------
// Smallest n with bound(n) <= delta, for 0 < delta <= 1. Parameter n fields
// are ignored.

SampleCount sample_complexity(double delta, const GeneralCaseParams& p);
SampleCount sample_complexity(double delta, const ErasureBoundParams& p);
SampleCount sample_complexity(double delta, const ExternalKnowledge& k, const ErasureBoundParams& p);

// ---------------------------------------------------------------------------

/// The (edge, non-edge) pair with the smallest population correlation gap,
/// restricted to non-edges whose tree path contains the edge.
struct CrossoverGap {
  NodePair edge;
  NodePair non_edge;
  double rho_e = 0.0;
  double rho_eprime = 0.0;
  double gap() const { return rho_e - rho_eprime; }
};

CrossoverGap tightest_crossover_gap(const WeightedTree& tree);

}  // namespace ggm
