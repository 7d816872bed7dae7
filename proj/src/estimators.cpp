#include "ggm/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ggm/kernels.hpp"

namespace ggm {

namespace {

void check_lengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("column lengths differ");
  if (x.empty()) throw std::invalid_argument("columns must be non-empty");
}

bool is_sign(double v) { return v == 1.0 || v == -1.0; }

double mi_from_rho_sq(double rho_sq, int& clamped) {
  if (rho_sq >= kMaxRhoSquared) {
    ++clamped;
    rho_sq = kMaxRhoSquared;
  }
  return gaussian_mi(std::max(rho_sq, 0.0));
}

}  // namespace

double pearson_product(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s / static_cast<double>(x.size());
}

double unbiased_rho_squared(double rho_hat, SampleCount n) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  const double nn = static_cast<double>(n);
  return nn / (nn + 1.0) * (rho_hat * rho_hat - 1.0 / nn);
}

double normalized_noisy_correlation(std::span<const double> yi, std::span<const double> yj,
                                    double sigma_sq) {
  if (!(sigma_sq >= 0.0)) throw std::invalid_argument("channel variance must be >= 0");
  return pearson_product(yi, yj) / (1.0 + sigma_sq);
}

double gaussian_mi(double rho_squared) {
  if (!(rho_squared >= 0.0 && rho_squared < 1.0))
    throw std::domain_error("Gaussian MI needs 0 <= rho^2 < 1");
  return -0.5 * std::log1p(-rho_squared);
}

double theta_from_rho(double rho) {
  if (!(std::abs(rho) <= 1.0)) throw std::domain_error("|rho| must be <= 1");
  return 0.5 + std::asin(rho) / std::numbers::pi;
}

double theta_hat(std::span<const double> ui, std::span<const double> uj) {
  check_lengths(ui, uj);
  std::size_t agree = 0;
  for (std::size_t k = 0; k < ui.size(); ++k) {
    if (!is_sign(ui[k]) || !is_sign(uj[k])) throw std::invalid_argument("entries must be +-1");
    agree += ui[k] * uj[k] == 1.0;
  }
  return static_cast<double>(agree) / static_cast<double>(ui.size());
}

double binary_entropy(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::domain_error("theta must lie in [0, 1]");
  if (theta == 0.0 || theta == 1.0) return 0.0;
  return -theta * std::log2(theta) - (1.0 - theta) * std::log2(1.0 - theta);
}

double quantized_mi(double theta) { return 1.0 - binary_entropy(theta); }

PairStatistics pair_statistics(std::span<const double> x, std::span<const double> y, Mode mode,
                               double sigma_sq) {
  PairStatistics st;
  const auto n = static_cast<SampleCount>(x.size());
  if (mode == Mode::quantized) {
    st.theta_hat = theta_hat(x, y);
    st.rho_hat = pearson_product(x, y);
    st.rho_sq_unbiased = unbiased_rho_squared(st.rho_hat, n);
    st.mi = quantized_mi(st.theta_hat);
    return st;
  }
  st.rho_hat = normalized_noisy_correlation(x, y, sigma_sq);
  st.rho_sq_unbiased = unbiased_rho_squared(st.rho_hat, n);
  int clamped = 0;
  st.mi = mi_from_rho_sq(st.rho_sq_unbiased, clamped);
  return st;
}

PairwiseScores pairwise_mi_matrix(const Dataset& data, Mode mode, const PairwiseOptions& opts) {
  const int d = data.cols();
  const SampleCount n = data.rows();
  const double nn = static_cast<double>(n);
  if (mode == Mode::quantized && !data.is_binary())
    throw std::invalid_argument("quantized mode requires {-1, +1} data");
  const double sigma_sq = opts.sigma_sq.value_or(0.0);
  if (!(sigma_sq >= 0.0)) throw std::invalid_argument("channel variance must be >= 0");

  const Eigen::MatrixXd products = opts.threads == 1
                                       ? kernels::column_products_serial(data.samples())
                                       : kernels::column_products(data.samples(), opts.threads);
  if (!products.allFinite()) throw NumericFailure("non-finite column products; check the input data");

  PairwiseScores out{Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d), 0};
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      double mi = 0.0, key = 0.0;
      if (mode == Mode::quantized) {
        // products are exact integers for +-1 data; agreements = (n + S) / 2
        const double agree = (nn + products(i, j)) / 2.0;
        mi = quantized_mi(agree / nn);
        key = mi;
      } else {
        const double rho_hat = products(i, j) / (nn * (1.0 + sigma_sq));
        key = unbiased_rho_squared(rho_hat, n);
        mi = mi_from_rho_sq(key, out.clamped);
      }
      out.mi(i, j) = out.mi(j, i) = mi;
      out.order_key(i, j) = out.order_key(j, i) = key;
    }
  return out;
}

}  // namespace ggm
