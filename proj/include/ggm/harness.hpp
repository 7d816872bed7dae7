#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ggm/bounds.hpp"
#include "ggm/channel.hpp"
#include "ggm/ggm_model.hpp"

namespace ggm {

/// The same tree in every trial.
struct FixedTree {
  WeightedTree tree;
};

/// A fresh tree per trial: uniform random topology (or the given one) with
/// U[low, high] edge weights.
struct RandomTree {
  int d = 5;
  double low = 0.1;
  double high = 0.9;
  std::optional<TreeTopology> topology;
};

using TreeSource = std::variant<FixedTree, RandomTree>;

/// What a trial counts as an error.
enum class Metric {
  tree_mismatch,  // estimated tree differs from the truth
  crossover,      // estimated MI of e' >= that of e
};

std::string to_string(Metric m);
Metric parse_metric(const std::string& s);

/// Gaussian-channel bound. t follows the schedule across the sweep: linear
/// from t_low at the first n to t_high at the last, unless t_values gives one
/// value per swept n.
struct Theorem1Overlay {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma_sq = 1.0;
  double M = 3.0;
  double rho_e = 0.0;
  double rho_eprime = 0.0;
  double t_low = 0.1;
  double t_high = 0.14;
  std::vector<double> t_values;
};

struct Theorem2Overlay {
  double beta = 0.0;
  double M = 3.0;
};

struct AlgorithmicOverlay {
  ExternalKnowledge knowledge;
  double beta = 0.0;
  double M = 3.0;
};

/// exp(n D) for the designated pairs. Probabilities come from the fixed
/// three-node tree and the BSC flip probability of the channel.
struct Lemma4Overlay {};

struct BoundOverlays {
  std::optional<Theorem1Overlay> theorem1;
  std::optional<Theorem2Overlay> theorem2;
  std::optional<AlgorithmicOverlay> algorithmic;
  std::optional<Lemma4Overlay> lemma4;
};

struct ExperimentConfig {
  std::string name = "custom";
  TreeSource tree = RandomTree{};
  std::optional<double> bound;  // M applied to generated data
  BoundMode bound_mode = BoundMode::clip;
  ChannelSpec channel = NoiselessChannel{};
  Mode mode = Mode::continuous;
  Metric metric = Metric::tree_mismatch;
  std::optional<CrossoverPairs> pairs;  // required by Metric::crossover
  std::vector<SampleCount> sweep;
  int trials = 1000;
  std::uint64_t seed = 20190101;
  int workers = 0;  // <= 0: OpenMP default
  BoundOverlays overlays;

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

/// True when the trial is free of the configured error (tree recovered, or
/// no crossover). Depends only on (seed, n, trial_index).
bool run_trial(const ExperimentConfig& config, SampleCount n, int trial_index);

struct ErrorEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;  // sqrt(p (1 - p) / trials)
};

/// Fraction of failed trials at n. Trials run on config.workers threads; the
/// result does not depend on the thread count.
ErrorEstimate error_probability(const ExperimentConfig& config, SampleCount n);

struct SweepRow {
  SampleCount n = 0;
  double empirical = 0.0;
  double standard_error = 0.0;
  std::vector<double> bounds;  // aligned with SweepResult::bound_names
};

struct SweepResult {
  std::vector<std::string> bound_names;
  std::vector<SweepRow> rows;
};

/// Bound columns only, no simulation.
SweepResult evaluate_bounds(const ExperimentConfig& config);

SweepResult run_sweep(const ExperimentConfig& config);

/// Header "n,empirical,stderr,<bounds>", 6 significant digits.
void write_sweep_csv(std::ostream& os, const SweepResult& result);

/// Named configurations. Unknown names throw std::invalid_argument.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();
std::string preset_description(const std::string& name);

/// The seven-node tree used by the Gaussian-channel presets.
WeightedTree seven_node_tree();
/// The ten-node tree used by the erasure preset.
WeightedTree ten_node_tree();

/// INI-style config: [experiment], [tree], [channel] and one section per
/// bound overlay. See README for keys. Parse and validation errors throw
/// std::invalid_argument.
ExperimentConfig load_config(std::istream& is);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace ggm
