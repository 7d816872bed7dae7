#pragma once

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "ggm/ggm_model.hpp"
#include "ggm/types.hpp"

namespace ggm {

/// Per-pair estimates used by the structure learner.
struct PairStatistics {
  double rho_hat = 0.0;          // (1/(n(1+sigma^2))) sum x y
  double rho_sq_unbiased = 0.0;  // n/(n+1) (rho_hat^2 - 1/n)
  double theta_hat = 0.5;        // quantized path only
  double mi = 0.0;               // nats (continuous) or bits (quantized)
};

/// (1/n) sum_k x_k y_k. No centring: marginals are standardised by model.
double pearson_product(std::span<const double> x, std::span<const double> y);

/// Unbiased estimate of rho^2. May be negative.
double unbiased_rho_squared(double rho_hat, SampleCount n);

/// (1/(n(1+sigma_sq))) sum y_i y_j for data received through a Gaussian
/// channel of variance sigma_sq.
double normalized_noisy_correlation(std::span<const double> yi, std::span<const double> yj,
                                    double sigma_sq);

/// -ln(1 - rho^2) / 2 in nats. Takes rho^2. Throws std::domain_error when
/// rho^2 >= 1 or rho^2 < 0.
double gaussian_mi(double rho_squared);

/// 1/2 + asin(rho)/pi.
double theta_from_rho(double rho);

/// Fraction of samples where the two sign columns agree.
double theta_hat(std::span<const double> ui, std::span<const double> uj);

/// Base-2 binary entropy, h(0) = h(1) = 0.
double binary_entropy(double theta);

/// 1 - h(theta), in bits.
double quantized_mi(double theta);

/// Largest rho^2 fed to gaussian_mi; larger estimates are clamped here.
inline constexpr double kMaxRhoSquared = 1.0 - 1e-12;

PairStatistics pair_statistics(std::span<const double> x, std::span<const double> y, Mode mode,
                               double sigma_sq = 0.0);

/// Pairwise scores for every node pair.
struct PairwiseScores {
  Eigen::MatrixXd mi;         // estimated MI, diagonal zero
  Eigen::MatrixXd order_key;  // what the spanning tree ranks: raw rho~^2 or 1-h
  int clamped = 0;            // pairs whose rho~^2 reached kMaxRhoSquared
};

struct PairwiseOptions {
  std::optional<double> sigma_sq;  // Gaussian-channel normalisation
  int threads = 0;                 // <= 0: runtime default; 1: serial kernel
};

/// Continuous mode: MI from the unbiased rho^2 of the (normalised) product
/// estimator. Quantized mode: MI = 1 - h(theta_hat); requires {-1,+1} data.
/// Non-finite data throws NumericFailure.
PairwiseScores pairwise_mi_matrix(const Dataset& data, Mode mode,
                                  const PairwiseOptions& opts = {});

}  // namespace ggm
