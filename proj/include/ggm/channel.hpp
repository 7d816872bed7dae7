#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ggm/ggm_model.hpp"
#include "ggm/rng.hpp"

namespace ggm {

/// Identity channel.
struct NoiselessChannel {};

/// Additive N(mean_i, variance) noise on sensor i; variance shared.
struct GaussianChannelSpec {
  std::vector<double> per_sensor_mean;
  double variance = 1.0;
};

/// Each symbol lost with probability xi; a lost symbol reads as 1.
struct ErasureChannelSpec {
  static constexpr double replacement_symbol = 1.0;
  double erasure_probability = 0.0;
};

/// Binary symmetric channel on {-1, +1} symbols.
struct BscSpec {
  double flip_probability = 0.0;
};

using ChannelSpec = std::variant<NoiselessChannel, GaussianChannelSpec, ErasureChannelSpec, BscSpec>;

std::string channel_name(const ChannelSpec& spec);
void validate(const GaussianChannelSpec& spec);
void validate(const ErasureChannelSpec& spec);
void validate(const BscSpec& spec);

// Column primitives. Each entry draws independently from `rng`.

void gaussian_noise_column(std::span<double> column, double mean, double variance, Rng& rng);
void erase_column(std::span<double> column, double xi, Rng& rng);
void sign_column(std::span<double> column);
/// Throws std::invalid_argument on an entry outside {-1, +1}.
void flip_column(std::span<double> column, double epsilon, Rng& rng);

// Dataset-level channels. Columns are processed in index order with one
// random stream.

/// Output carries no bound tag.
Dataset apply_gaussian(const Dataset& data, const GaussianChannelSpec& spec, Rng& rng);
/// Preserves the input's bound tag (1 <= M).
Dataset apply_erasure(const Dataset& data, const ErasureChannelSpec& spec, Rng& rng);
/// sign(0) := +1.
Dataset quantize_sign(const Dataset& data);
Dataset apply_bsc(const Dataset& data, const BscSpec& spec, Rng& rng);

}  // namespace ggm
