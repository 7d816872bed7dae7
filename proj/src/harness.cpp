#include "ggm/harness.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "ggm/chow_liu.hpp"
#include "ggm/decentral.hpp"
#include "ggm/estimators.hpp"
#include "ggm/rng.hpp"

namespace ggm {

namespace {

constexpr std::uint64_t kTreeTag = 1;
constexpr std::uint64_t kDataTag = 2;
constexpr std::uint64_t kChannelTag = 3;

int source_node_count(const TreeSource& src) {
  if (const auto* f = std::get_if<FixedTree>(&src)) return f->tree.node_count();
  return std::get<RandomTree>(src).d;
}

WeightedTree trial_tree(const TreeSource& src, Rng& rng) {
  if (const auto* f = std::get_if<FixedTree>(&src)) return f->tree;
  const auto& r = std::get<RandomTree>(src);
  const TreeTopology topo = r.topology ? *r.topology : generate_random_tree(r.d, rng);
  return assign_edge_weights(topo, r.low, r.high, rng);
}

void check_pair(NodePair p, int d, const char* what) {
  if (p.first == p.second || p.first < 0 || p.second >= d)
    throw std::invalid_argument(std::string(what) + " is not a valid node pair");
}

BscCrossoverProbs lemma4_probs(const ExperimentConfig& c) {
  const auto& tree = std::get<FixedTree>(c.tree).tree;
  const Eigen::Matrix3d corr = tree_to_covariance(tree);
  return bsc_crossover_probs(corr, *c.pairs, std::get<BscSpec>(c.channel).flip_probability);
}

double schedule_t(const Theorem1Overlay& o, const std::vector<SampleCount>& sweep, std::size_t k) {
  if (!o.t_values.empty()) return o.t_values[k];
  if (sweep.size() == 1) return o.t_low;
  const double x = static_cast<double>(sweep[k] - sweep.front()) /
                   static_cast<double>(sweep.back() - sweep.front());
  return o.t_low + (o.t_high - o.t_low) * x;
}

}  // namespace

std::string to_string(Metric m) { return m == Metric::tree_mismatch ? "tree_mismatch" : "crossover"; }

Metric parse_metric(const std::string& s) {
  if (s == "tree_mismatch") return Metric::tree_mismatch;
  if (s == "crossover") return Metric::crossover;
  throw std::invalid_argument("unknown metric '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (sweep.empty()) throw std::invalid_argument("sweep must list at least one sample size");
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    if (sweep[k] < 2) throw std::invalid_argument("sample sizes must be >= 2");
    if (k > 0 && sweep[k] <= sweep[k - 1])
      throw std::invalid_argument("sweep must be strictly increasing");
  }
  if (bound && !(*bound >= 3.0)) throw std::invalid_argument("data bound M must be >= 3");

  if (const auto* r = std::get_if<RandomTree>(&tree)) {
    if (r->d < 2) throw std::invalid_argument("tree needs d >= 2");
    if (!(r->low > 0.0 && r->low <= r->high && r->high < 1.0))
      throw std::invalid_argument("weight interval must satisfy 0 < low <= high < 1");
    if (r->topology && r->topology->node_count() != r->d)
      throw std::invalid_argument("topology node count differs from d");
  }
  const int d = source_node_count(tree);

  if (std::holds_alternative<BscSpec>(channel) && mode != Mode::quantized)
    throw std::invalid_argument("BSC channel needs quantized mode");
  if (const auto* g = std::get_if<GaussianChannelSpec>(&channel)) {
    ggm::validate(*g);
    if (static_cast<int>(g->per_sensor_mean.size()) != d)
      throw std::invalid_argument("Gaussian channel needs one mean per sensor");
  }
  if (const auto* e = std::get_if<ErasureChannelSpec>(&channel)) ggm::validate(*e);
  if (const auto* b = std::get_if<BscSpec>(&channel)) ggm::validate(*b);

  if (metric == Metric::crossover || overlays.lemma4) {
    if (!pairs) throw std::invalid_argument("crossover metric and lemma4 need designated pairs");
    check_pair(pairs->e, d, "e");
    check_pair(pairs->e_prime, d, "e'");
    if (pairs->e == pairs->e_prime) throw std::invalid_argument("e and e' must differ");
  }
  if (overlays.lemma4) {
    const auto* f = std::get_if<FixedTree>(&tree);
    if (!f || f->tree.node_count() != 3)
      throw std::invalid_argument("lemma4 overlay needs a fixed three-node tree");
    if (!std::holds_alternative<BscSpec>(channel))
      throw std::invalid_argument("lemma4 overlay needs a BSC channel");
  }
  if (overlays.theorem1 && !overlays.theorem1->t_values.empty() &&
      overlays.theorem1->t_values.size() != sweep.size())
    throw std::invalid_argument("theorem1 t_values needs one value per swept n");
}

bool run_trial(const ExperimentConfig& config, SampleCount n, int trial_index) {
  const std::uint64_t trial_seed =
      derive_seed(config.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial_index));
  Rng tree_rng(derive_seed(trial_seed, kTreeTag));
  Rng data_rng(derive_seed(trial_seed, kDataTag));

  const WeightedTree truth = trial_tree(config.tree, tree_rng);
  SamplingOptions sampling;
  sampling.bound = config.bound;
  sampling.bound_mode = config.bound_mode;
  const Dataset data = sample_dataset(truth, n, sampling, data_rng);

  const FusionCenter fc = transmit_all(distribute(data), config.channel, config.mode,
                                       derive_seed(trial_seed, kChannelTag), 1);
  if (config.metric == Metric::crossover) {
    PairwiseOptions opts;
    opts.threads = 1;
    if (const auto* g = std::get_if<GaussianChannelSpec>(&fc.channel);
        g && fc.mode == Mode::continuous)
      opts.sigma_sq = g->variance;
    const PairwiseScores s = pairwise_mi_matrix(fc.received, fc.mode, opts);
    const auto& e = config.pairs->e;
    const auto& ep = config.pairs->e_prime;
    return s.order_key(ep.first, ep.second) < s.order_key(e.first, e.second);
  }
  return tree_equals(fc_estimate(fc, 1).topology, truth.topology());
}

ErrorEstimate error_probability(const ExperimentConfig& config, SampleCount n) {
  config.validate();
  const int workers = config.workers > 0 ? config.workers : omp_get_max_threads();
  long failures = 0;
  std::exception_ptr error;
#pragma omp parallel for num_threads(workers) schedule(dynamic) reduction(+ : failures)
  for (int k = 0; k < config.trials; ++k) {
    try {
      if (!run_trial(config, n, k)) ++failures;
    } catch (...) {
#pragma omp critical(ggm_trial_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  const double p = static_cast<double>(failures) / config.trials;
  return {p, std::sqrt(p * (1.0 - p) / config.trials)};
}

SweepResult evaluate_bounds(const ExperimentConfig& config) {
  config.validate();
  const int d = source_node_count(config.tree);
  const auto& ov = config.overlays;
  SweepResult out;
  if (ov.theorem1) out.bound_names.push_back("theorem1");
  if (ov.theorem2) out.bound_names.push_back("theorem2");
  if (ov.algorithmic) out.bound_names.push_back("algorithmic");
  if (ov.lemma4) out.bound_names.push_back("lemma4");
  std::optional<BscCrossoverProbs> probs;
  if (ov.lemma4) probs = lemma4_probs(config);

  for (std::size_t k = 0; k < config.sweep.size(); ++k) {
    const SampleCount n = config.sweep[k];
    SweepRow row;
    row.n = n;
    if (ov.theorem1) {
      const auto& o = *ov.theorem1;
      GeneralCaseParams p;
      p.t = schedule_t(o, config.sweep, k);
      p.mu1 = o.mu1;
      p.mu2 = o.mu2;
      p.sigma_sq = o.sigma_sq;
      p.M = o.M;
      p.rho_e = o.rho_e;
      p.rho_eprime = o.rho_eprime;
      p.d = d;
      p.n = n;
      row.bounds.push_back(theorem1_bound(p));
    }
    if (ov.theorem2) row.bounds.push_back(theorem2_bound({ov.theorem2->beta, ov.theorem2->M, d, n, {}}));
    if (ov.algorithmic) {
      const auto& o = *ov.algorithmic;
      row.bounds.push_back(algorithmic_bound(o.knowledge, {o.beta, o.M, d, n, {}}));
    }
    if (probs) row.bounds.push_back(lemma4_bound(*probs, n));
    out.rows.push_back(std::move(row));
  }
  return out;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  SweepResult out = evaluate_bounds(config);
  for (auto& row : out.rows) {
    const ErrorEstimate e = error_probability(config, row.n);
    row.empirical = e.estimate;
    row.standard_error = e.standard_error;
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "n,empirical,stderr";
  for (const auto& name : result.bound_names) os << ',' << name;
  os << '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6g", v);
    os << ',' << buf;
  };
  for (const auto& row : result.rows) {
    os << row.n;
    put(row.empirical);
    put(row.standard_error);
    for (double b : row.bounds) put(b);
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Presets

WeightedTree seven_node_tree() {
  // chain 4-3-2-1-5-6-7 (1-indexed)
  const TreeTopology topo(7, {{3, 2}, {2, 1}, {1, 0}, {0, 4}, {4, 5}, {5, 6}});
  return WeightedTree(topo, std::map<NodePair, double>{{{3, 2}, 0.17},
                                                        {{2, 1}, 0.12},
                                                        {{1, 0}, 0.13},
                                                        {{0, 4}, 0.58},
                                                        {{4, 5}, 0.87},
                                                        {{5, 6}, 0.78}});
}

WeightedTree ten_node_tree() {
  // subtrees {1..6} and {7..10} joined by 4-7 (1-indexed)
  const TreeTopology topo(
      10, {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {3, 5}, {6, 7}, {6, 8}, {7, 9}, {3, 6}});
  return WeightedTree(topo, std::vector<double>(9, 0.5));
}

namespace {

struct PresetEntry {
  const char* name;
  const char* description;
};

constexpr PresetEntry kPresets[] = {
    {"case1", "7-node tree, Gaussian noise N(1,1) on sensors 1,5,6,7 and N(0.05,1) on 2,3,4"},
    {"case2", "as case1 with noise variance 2"},
    {"fig5", "case1 channel with the theorem1 bound, t from 0.1 to 0.14"},
    {"erasure_algorithmic", "10-node tree, erasure xi=0.1, theorem2 and algorithmic bounds"},
    {"bsc_crossover", "3-node chain 0.9/0.1, BSC eps=0.1, crossover of (2,3) by (1,3), lemma4"},
    {"star", "5-node star with U[0.1,0.9] weights, quantized, BSC eps=0.1"},
};

GaussianChannelSpec case_channel(double variance) {
  return {{1.0, 0.05, 0.05, 0.05, 1.0, 1.0, 1.0}, variance};
}

ExperimentConfig gaussian_case(const std::string& name, double variance) {
  ExperimentConfig c;
  c.name = name;
  c.tree = FixedTree{seven_node_tree()};
  c.bound = 3.0;
  c.channel = case_channel(variance);
  c.mode = Mode::continuous;
  c.sweep = {1000, 1800, 2400, 3000, 3200, 4000};
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.name);
  return out;
}

std::string preset_description(const std::string& name) {
  for (const auto& p : kPresets)
    if (name == p.name) return p.description;
  throw std::invalid_argument("unknown preset '" + name + "'");
}

ExperimentConfig preset(const std::string& name) {
  if (name == "case1") return gaussian_case(name, 1.0);
  if (name == "case2") return gaussian_case(name, 2.0);
  if (name == "fig5") {
    ExperimentConfig c = gaussian_case(name, 1.0);
    c.sweep = {1800, 2400, 3000, 3200, 40000, 150000};
    const CrossoverGap gap = tightest_crossover_gap(seven_node_tree());
    Theorem1Overlay t1;
    t1.mu1 = 1.0;
    t1.mu2 = 0.05;
    t1.sigma_sq = 1.0;
    t1.M = 3.0;
    t1.rho_e = gap.rho_e;
    t1.rho_eprime = gap.rho_eprime;
    c.overlays.theorem1 = t1;
    return c;
  }
  if (name == "erasure_algorithmic") {
    ExperimentConfig c;
    c.name = name;
    c.tree = FixedTree{ten_node_tree()};
    c.bound = 3.0;
    const double xi = 0.1;
    c.channel = ErasureChannelSpec{xi};
    c.mode = Mode::continuous;
    c.sweep = {100, 200, 400, 1000, 1600, 20000, 150000};
    const CrossoverGap gap = tightest_crossover_gap(ten_node_tree());
    const double beta = erasure_population_correlation(gap.rho_e, xi) -
                        erasure_population_correlation(gap.rho_eprime, xi);
    c.overlays.theorem2 = Theorem2Overlay{beta, 3.0};
    c.overlays.algorithmic = AlgorithmicOverlay{{{6, 4}, {3, 2}}, beta, 3.0};
    return c;
  }
  if (name == "bsc_crossover") {
    ExperimentConfig c;
    c.name = name;
    c.tree = FixedTree{WeightedTree(make_chain({0, 1, 2}, 3), std::vector<double>{0.9, 0.1})};
    c.channel = BscSpec{0.1};
    c.mode = Mode::quantized;
    c.metric = Metric::crossover;
    c.pairs = CrossoverPairs{{1, 2}, {0, 2}};
    c.sweep = {250, 500, 1000, 2000, 4000, 8000};
    c.overlays.lemma4 = Lemma4Overlay{};
    return c;
  }
  if (name == "star") {
    ExperimentConfig c;
    c.name = name;
    c.tree = RandomTree{5, 0.1, 0.9, make_star(0, 5)};
    c.channel = BscSpec{0.1};
    c.mode = Mode::quantized;
    c.sweep = {250, 500, 1000, 1500, 2000, 3000, 4000, 5000, 6000};
    return c;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace ggm
