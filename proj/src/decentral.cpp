#include "ggm/decentral.hpp"

#include <stdexcept>
#include <string>

#include <omp.h>

#include "ggm/rng.hpp"

namespace ggm {

namespace {

constexpr std::uint64_t kSensorStreamTag = 0x53454e53;

void check_channel(const ChannelSpec& channel, Mode mode, int d) {
  if (std::holds_alternative<BscSpec>(channel) && mode != Mode::quantized)
    throw std::invalid_argument("BSC channel needs quantized mode");
  if (const auto* g = std::get_if<GaussianChannelSpec>(&channel)) {
    validate(*g);
    if (static_cast<int>(g->per_sensor_mean.size()) != d)
      throw std::invalid_argument("Gaussian channel has " +
                                  std::to_string(g->per_sensor_mean.size()) +
                                  " sensor means for " + std::to_string(d) + " sensors");
  }
  if (const auto* e = std::get_if<ErasureChannelSpec>(&channel)) validate(*e);
  if (const auto* b = std::get_if<BscSpec>(&channel)) validate(*b);
}

void send(std::span<double> col, int sensor_index, const ChannelSpec& channel, Mode mode,
          Rng& rng) {
  if (const auto* g = std::get_if<GaussianChannelSpec>(&channel))
    gaussian_noise_column(col, g->per_sensor_mean[sensor_index], g->variance, rng);
  else if (const auto* e = std::get_if<ErasureChannelSpec>(&channel))
    erase_column(col, e->erasure_probability, rng);
  if (mode == Mode::quantized) sign_column(col);
  if (const auto* b = std::get_if<BscSpec>(&channel)) flip_column(col, b->flip_probability, rng);
}

}  // namespace

std::vector<SensorNode> distribute(const Dataset& data) {
  std::vector<SensorNode> sensors;
  sensors.reserve(data.cols());
  for (int j = 0; j < data.cols(); ++j) sensors.push_back({j + 1, data.samples().col(j)});
  return sensors;
}

Dataset collect(const std::vector<SensorNode>& sensors, std::optional<double> bound) {
  if (sensors.empty()) throw std::invalid_argument("no sensors");
  const auto n = sensors.front().column.size();
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(sensors.size()));
  for (std::size_t j = 0; j < sensors.size(); ++j) {
    if (sensors[j].column.size() != n) throw std::invalid_argument("sensor columns differ in length");
    x.col(static_cast<Eigen::Index>(j)) = sensors[j].column;
  }
  return Dataset(std::move(x), bound);
}

FusionCenter transmit_all(const std::vector<SensorNode>& sensors, const ChannelSpec& channel,
                          Mode mode, std::uint64_t seed, int threads) {
  const int d = static_cast<int>(sensors.size());
  if (d == 0) throw std::invalid_argument("no sensors");
  check_channel(channel, mode, d);
  const auto n = sensors.front().column.size();
  for (const auto& s : sensors)
    if (s.column.size() != n) throw std::invalid_argument("sensor columns differ in length");

  Eigen::MatrixXd y(n, d);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  bool bad_input = false;
#pragma omp parallel for num_threads(nthreads) schedule(static) reduction(|| : bad_input)
  for (int j = 0; j < d; ++j) {
    y.col(j) = sensors[j].column;
    Rng rng(derive_seed(seed, kSensorStreamTag, static_cast<std::uint64_t>(sensors[j].id)));
    try {
      send({y.col(j).data(), static_cast<std::size_t>(n)}, j, channel, mode, rng);
    } catch (const std::invalid_argument&) {
      bad_input = true;
    }
  }
  if (bad_input) throw std::invalid_argument("BSC input must be in {-1, +1}");
  return FusionCenter{Dataset(std::move(y)), channel, mode};
}

EstimatedTree fc_estimate(const FusionCenter& fc, int threads) {
  PairwiseOptions opts;
  opts.threads = threads;
  if (const auto* g = std::get_if<GaussianChannelSpec>(&fc.channel);
      g && fc.mode == Mode::continuous)
    opts.sigma_sq = g->variance;
  return chow_liu(fc.received, fc.mode, opts);
}

}  // namespace ggm
