#include "ggm/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace ggm {

std::string channel_name(const ChannelSpec& spec) {
  struct Visitor {
    std::string operator()(const NoiselessChannel&) const { return "noiseless"; }
    std::string operator()(const GaussianChannelSpec&) const { return "gaussian"; }
    std::string operator()(const ErasureChannelSpec&) const { return "erasure"; }
    std::string operator()(const BscSpec&) const { return "bsc"; }
  };
  return std::visit(Visitor{}, spec);
}

void validate(const GaussianChannelSpec& spec) {
  if (!(spec.variance > 0.0)) throw std::invalid_argument("channel variance must be > 0");
  for (double m : spec.per_sensor_mean)
    if (!std::isfinite(m)) throw std::invalid_argument("channel mean must be finite");
}

void validate(const ErasureChannelSpec& spec) {
  if (!(spec.erasure_probability >= 0.0 && spec.erasure_probability <= 1.0))
    throw std::invalid_argument("erasure probability must lie in [0, 1]");
}

void validate(const BscSpec& spec) {
  if (!(spec.flip_probability >= 0.0 && spec.flip_probability <= 0.5))
    throw std::invalid_argument("BSC flip probability must lie in [0, 0.5]");
}

void gaussian_noise_column(std::span<double> column, double mean, double variance, Rng& rng) {
  std::normal_distribution<double> noise(mean, std::sqrt(variance));
  for (double& x : column) x += noise(rng);
}

void erase_column(std::span<double> column, double xi, Rng& rng) {
  if (xi <= 0.0) return;
  std::bernoulli_distribution erased(xi);
  for (double& x : column)
    if (erased(rng)) x = ErasureChannelSpec::replacement_symbol;
}

void sign_column(std::span<double> column) {
  for (double& x : column) x = x < 0.0 ? -1.0 : 1.0;
}

void flip_column(std::span<double> column, double epsilon, Rng& rng) {
  for (double x : column)
    if (x != 1.0 && x != -1.0) throw std::invalid_argument("BSC input must be in {-1, +1}");
  if (epsilon <= 0.0) return;
  std::bernoulli_distribution flip(epsilon);
  for (double& x : column)
    if (flip(rng)) x = -x;
}

namespace {

std::span<double> column_span(Eigen::MatrixXd& x, Eigen::Index j) {
  return {x.col(j).data(), static_cast<std::size_t>(x.rows())};
}

}  // namespace

Dataset apply_gaussian(const Dataset& data, const GaussianChannelSpec& spec, Rng& rng) {
  validate(spec);
  if (static_cast<int>(spec.per_sensor_mean.size()) != data.cols())
    throw std::invalid_argument("Gaussian channel has " +
                                std::to_string(spec.per_sensor_mean.size()) +
                                " sensor means for " + std::to_string(data.cols()) + " columns");
  Eigen::MatrixXd y = data.samples();
  for (int j = 0; j < data.cols(); ++j)
    gaussian_noise_column(column_span(y, j), spec.per_sensor_mean[j], spec.variance, rng);
  return Dataset(std::move(y));
}

Dataset apply_erasure(const Dataset& data, const ErasureChannelSpec& spec, Rng& rng) {
  validate(spec);
  Eigen::MatrixXd y = data.samples();
  for (int j = 0; j < data.cols(); ++j) erase_column(column_span(y, j), spec.erasure_probability, rng);
  return Dataset(std::move(y), data.bound());
}

Dataset quantize_sign(const Dataset& data) {
  Eigen::MatrixXd y = data.samples();
  for (int j = 0; j < data.cols(); ++j) sign_column(column_span(y, j));
  return Dataset(std::move(y), data.bound());
}

Dataset apply_bsc(const Dataset& data, const BscSpec& spec, Rng& rng) {
  validate(spec);
  if (!data.is_binary()) throw std::invalid_argument("BSC input must be in {-1, +1}");
  Eigen::MatrixXd y = data.samples();
  for (int j = 0; j < data.cols(); ++j) flip_column(column_span(y, j), spec.flip_probability, rng);
  return Dataset(std::move(y), data.bound());
}

}  // namespace ggm
