#pragma once

#include <cstdint>
#include <vector>

#include "ggm/channel.hpp"
#include "ggm/chow_liu.hpp"
#include "ggm/ggm_model.hpp"

namespace ggm {

/// One sensor and the column of samples it observes.
struct SensorNode {
  int id = 1;  // 1-based
  Eigen::VectorXd column;
};

/// What the fusion center holds after every sensor has transmitted.
struct FusionCenter {
  Dataset received;
  ChannelSpec channel;
  Mode mode = Mode::continuous;
};

/// Sensor i (1-based) receives column i-1.
std::vector<SensorNode> distribute(const Dataset& data);

/// Inverse of distribute.
Dataset collect(const std::vector<SensorNode>& sensors, std::optional<double> bound = std::nullopt);

/// Passes every column through `channel`. Sensor i draws from its own stream
/// derive_seed(seed, tag, i), so the result does not depend on the order or
/// thread the sensors run on. Quantized mode takes the sign before a BSC.
/// A BSC in continuous mode throws std::invalid_argument.
FusionCenter transmit_all(const std::vector<SensorNode>& sensors, const ChannelSpec& channel,
                          Mode mode, std::uint64_t seed, int threads = 0);

/// Chow-Liu on the received data. A Gaussian channel's variance is used to
/// normalise the correlation estimate.
EstimatedTree fc_estimate(const FusionCenter& fc, int threads = 1);

}  // namespace ggm
