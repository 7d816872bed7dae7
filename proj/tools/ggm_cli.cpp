// ggm: tree-structured Gaussian graphical model learning over noisy sensor
// channels. Run `ggm --help` or `ggm <subcommand> --help`.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ggm/bounds.hpp"
#include "ggm/channel.hpp"
#include "ggm/chow_liu.hpp"
#include "ggm/decentral.hpp"
#include "ggm/estimators.hpp"
#include "ggm/ggm_model.hpp"
#include "ggm/harness.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 20190101;
constexpr const char* kSeedEnv = "GGM_SEED";

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::uint64_t env_seed(std::uint64_t fallback) {
  const char* s = std::getenv(kSeedEnv);
  if (!s || !*s) return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0') throw std::invalid_argument(std::string(kSeedEnv) + " must be an unsigned integer");
  return v;
}

/// Writes to `path`, or stdout when empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw std::invalid_argument("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

ggm::NodePair parse_pair(const std::string& s) {
  int i = 0, j = 0;
  char dash = 0;
  std::istringstream in(s);
  if (!(in >> i >> dash >> j) || dash != '-' || i < 1 || j < 1)
    throw std::invalid_argument("expected a 1-indexed pair i-j, got '" + s + "'");
  return ggm::NodePair(i - 1, j - 1);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct SeedOption {
  std::optional<std::uint64_t> flag;
  std::uint64_t resolve(std::uint64_t fallback = kDefaultSeed) const {
    return flag ? *flag : env_seed(fallback);
  }
};

// --- generate ---------------------------------------------------------------

struct GenerateArgs {
  int d = 0;
  double low = 0.1, high = 0.9;
  std::string topology = "random";
  SeedOption seed;
  std::string out;
};

void run_generate(const GenerateArgs& a) {
  ggm::Rng rng(a.seed.resolve());
  std::optional<ggm::TreeTopology> topo;
  if (a.d < 2) throw std::invalid_argument("--d must be >= 2");
  if (!(a.low > 0.0 && a.low <= a.high && a.high < 1.0))
    throw std::invalid_argument("weight interval must satisfy 0 < low <= high < 1");
  if (a.topology == "random") topo = ggm::generate_random_tree(a.d, rng);
  else if (a.topology == "star") topo = ggm::make_star(0, a.d);
  else {
    std::vector<int> order(a.d);
    for (int i = 0; i < a.d; ++i) order[i] = i;
    topo = ggm::make_chain(order, a.d);
  }
  const ggm::WeightedTree tree = ggm::assign_edge_weights(*topo, a.low, a.high, rng);
  Output out(a.out);
  ggm::write_tree(out.stream(), tree);
  const auto [lo, hi] = std::minmax_element(tree.weights().begin(), tree.weights().end());
  std::cerr << "d=" << tree.node_count() << " edges=" << tree.weights().size()
            << " min_weight=" << fmt(*lo) << " max_weight=" << fmt(*hi) << '\n';
}

// --- sample -----------------------------------------------------------------

struct SampleArgs {
  std::string tree;
  ggm::SampleCount n = 0;
  std::optional<double> bound;
  std::string bound_mode = "clip";
  int root = 1;
  SeedOption seed;
  std::string out;
};

void run_sample(const SampleArgs& a) {
  const ggm::WeightedTree tree = ggm::read_tree_file(a.tree);
  ggm::SamplingOptions opts;
  opts.bound = a.bound;
  opts.bound_mode = a.bound_mode == "reject" ? ggm::BoundMode::reject : ggm::BoundMode::clip;
  opts.root = a.root - 1;
  ggm::Rng rng(a.seed.resolve());
  const ggm::Dataset data = ggm::sample_dataset(tree, a.n, opts, rng);
  Output out(a.out);
  ggm::write_dataset_csv(out.stream(), data);
}

// --- corrupt ----------------------------------------------------------------

struct CorruptArgs {
  std::string in;
  std::string channel = "noiseless";
  std::vector<double> means;
  std::optional<double> mean;
  double variance = 1.0;
  double xi = 0.0;
  double epsilon = 0.0;
  bool quantize = false;
  SeedOption seed;
  std::string out;
};

void run_corrupt(const CorruptArgs& a) {
  const ggm::Dataset data = ggm::read_dataset_csv_file(a.in);
  ggm::ChannelSpec spec;
  if (a.channel == "gaussian") {
    ggm::GaussianChannelSpec g;
    g.per_sensor_mean = !a.means.empty() ? a.means
                                         : std::vector<double>(data.cols(), a.mean.value_or(0.0));
    g.variance = a.variance;
    spec = g;
  } else if (a.channel == "erasure") {
    spec = ggm::ErasureChannelSpec{a.xi};
  } else if (a.channel == "bsc") {
    spec = ggm::BscSpec{a.epsilon};
  }
  const ggm::Mode mode = a.quantize || a.channel == "bsc" ? ggm::Mode::quantized : ggm::Mode::continuous;
  const ggm::FusionCenter fc = ggm::transmit_all(ggm::distribute(data), spec, mode, a.seed.resolve());
  Output out(a.out);
  ggm::write_dataset_csv(out.stream(), fc.received);
}

// --- learn ------------------------------------------------------------------

struct LearnArgs {
  std::string in;
  std::string mode = "continuous";
  std::optional<double> sigma_sq;
  std::string truth;
  int workers = 0;
  std::string out;
};

int run_learn(const LearnArgs& a) {
  const ggm::Dataset data = ggm::read_dataset_csv_file(a.in);
  ggm::PairwiseOptions opts;
  opts.sigma_sq = a.sigma_sq;
  opts.threads = a.workers;
  const ggm::Mode mode = ggm::parse_mode(a.mode);
  const ggm::EstimatedTree est = ggm::chow_liu(data, mode, opts);
  Output out(a.out);
  auto& os = out.stream();
  os << "i,j,mi\n";
  for (const auto& e : est.topology.edges())
    os << e.first + 1 << ',' << e.second + 1 << ',' << fmt(est.score_matrix(e.first, e.second)) << '\n';
  if (!a.truth.empty()) {
    const ggm::WeightedTree truth = ggm::read_tree_file(a.truth);
    const bool same = ggm::tree_equals(est.topology, truth.topology());
    std::cerr << "recovered: " << (same ? "yes" : "no") << '\n';
  }
  return 0;
}

// --- bound ------------------------------------------------------------------

struct BoundArgs {
  std::string family;
  int d = 0;
  ggm::SampleCount n = 0;
  double M = 3.0;
  std::optional<double> beta;
  // theorem1
  std::optional<double> t, mu1, mu2, sigma_sq, rho_e, rho_eprime;
  // algorithmic
  std::vector<int> subtrees, neighbors;
  // lemma4
  std::optional<double> rho1, rho2, epsilon;
  std::string e = "2-3", eprime = "1-3";
  bool invert = false;
  std::optional<double> delta;
};

template <typename T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) throw std::invalid_argument(std::string("missing ") + flag);
  return *v;
}

void run_bound(const BoundArgs& a) {
  if (a.invert && !a.delta) throw std::invalid_argument("--invert needs --delta");
  if (a.family == "theorem1") {
    ggm::GeneralCaseParams p;
    p.t = need(a.t, "--t");
    p.mu1 = need(a.mu1, "--mu1");
    p.mu2 = need(a.mu2, "--mu2");
    p.sigma_sq = need(a.sigma_sq, "--sigma-sq");
    p.rho_e = need(a.rho_e, "--rho-e");
    p.rho_eprime = need(a.rho_eprime, "--rho-eprime");
    p.M = a.M;
    p.d = a.d;
    p.n = a.n;
    if (a.invert) std::cout << ggm::sample_complexity(*a.delta, p) << '\n';
    else std::cout << fmt(ggm::theorem1_bound(p)) << '\n';
  } else if (a.family == "theorem2") {
    const ggm::ErasureBoundParams p{need(a.beta, "--beta"), a.M, a.d, a.n, {}};
    if (a.invert) std::cout << ggm::sample_complexity(*a.delta, p) << '\n';
    else std::cout << fmt(ggm::theorem2_bound(p)) << '\n';
  } else if (a.family == "algorithmic") {
    const ggm::ExternalKnowledge k{a.subtrees, a.neighbors};
    int d = a.d;
    if (d == 0)
      for (int s : a.subtrees) d += s;
    const ggm::ErasureBoundParams p{need(a.beta, "--beta"), a.M, d, a.n, {}};
    std::cerr << "prefactor=" << fmt(ggm::algorithmic_prefactor(k, d)) << '\n';
    if (a.invert) std::cout << ggm::sample_complexity(*a.delta, k, p) << '\n';
    else std::cout << fmt(ggm::algorithmic_bound(k, p)) << '\n';
  } else {
    if (a.invert) throw std::invalid_argument("lemma4 has no inversion");
    const ggm::CrossoverPairs pairs{parse_pair(a.e), parse_pair(a.eprime)};
    const auto probs = ggm::bsc_crossover_probs(need(a.rho1, "--rho1"), need(a.rho2, "--rho2"),
                                                pairs, need(a.epsilon, "--epsilon"));
    std::cerr << "p0=" << fmt(probs.p0) << " p1=" << fmt(probs.p1) << " p2=" << fmt(probs.p2)
              << " D=" << fmt(probs.D) << '\n';
    std::cout << fmt(ggm::lemma4_bound(probs, a.n)) << '\n';
  }
}

// --- sweep ------------------------------------------------------------------

struct SweepArgs {
  std::string config;
  std::string preset;
  std::optional<int> trials;
  int workers = 0;
  bool bounds_only = false;
  SeedOption seed;
  std::string out;
};

void run_sweep(const SweepArgs& a) {
  if (a.config.empty() == a.preset.empty())
    throw std::invalid_argument("give exactly one of --config or --preset");
  ggm::ExperimentConfig c = a.config.empty() ? ggm::preset(a.preset) : ggm::load_config_file(a.config);
  c.seed = a.seed.resolve(c.seed);
  if (a.trials) c.trials = *a.trials;
  if (a.workers > 0) c.workers = a.workers;
  c.validate();
  const ggm::SweepResult r = a.bounds_only ? ggm::evaluate_bounds(c) : ggm::run_sweep(c);
  Output out(a.out);
  ggm::write_sweep_csv(out.stream(), r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-structured Gaussian graphical model learning over noisy channels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ggm 1.0");
  app.footer(std::string("Seeds default to ") + std::to_string(kDefaultSeed) + "; set " + kSeedEnv +
             " to change the default. --seed overrides both.");

  auto add_seed = [](CLI::App* sub, SeedOption& s) {
    sub->add_option("--seed", s.flag, "Master seed (overrides " + std::string(kSeedEnv) + ")");
  };

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Random weighted tree");
  g->add_option("--d", gen.d, "Number of nodes")->required();
  g->add_option("--low", gen.low, "Smallest edge weight");
  g->add_option("--high", gen.high, "Largest edge weight");
  g->add_option("--topology", gen.topology, "random, star or chain")
      ->check(CLI::IsMember({"random", "star", "chain"}));
  g->add_option("--out", gen.out, "Tree file (default stdout)");
  add_seed(g, gen.seed);

  SampleArgs smp;
  auto* s = app.add_subcommand("sample", "Draw samples from a tree");
  s->add_option("--tree", smp.tree, "Tree file")->required();
  s->add_option("--n", smp.n, "Sample count")->required();
  s->add_option("--bound", smp.bound, "Data bound M >= 3");
  s->add_option("--bound-mode", smp.bound_mode, "clip or reject")->check(CLI::IsMember({"clip", "reject"}));
  s->add_option("--root", smp.root, "Sampling root (1-indexed)");
  s->add_option("--out", smp.out, "CSV output (default stdout)");
  add_seed(s, smp.seed);

  CorruptArgs cor;
  auto* c = app.add_subcommand("corrupt", "Pass a dataset through a channel");
  c->add_option("--in", cor.in, "Input CSV")->required();
  c->add_option("--channel", cor.channel, "noiseless, gaussian, erasure or bsc")
      ->check(CLI::IsMember({"noiseless", "gaussian", "erasure", "bsc"}));
  c->add_option("--means", cor.means, "Per-sensor Gaussian means")->delimiter(',');
  c->add_option("--mean", cor.mean, "Gaussian mean shared by all sensors");
  c->add_option("--variance", cor.variance, "Gaussian noise variance");
  c->add_option("--xi", cor.xi, "Erasure probability");
  c->add_option("--epsilon", cor.epsilon, "BSC flip probability");
  c->add_flag("--quantize", cor.quantize, "Send signs instead of values");
  c->add_option("--out", cor.out, "CSV output (default stdout)");
  add_seed(c, cor.seed);

  LearnArgs lrn;
  auto* l = app.add_subcommand("learn", "Chow-Liu tree from a dataset");
  l->add_option("--in", lrn.in, "Input CSV")->required();
  l->add_option("--mode", lrn.mode, "continuous or quantized")
      ->check(CLI::IsMember({"continuous", "quantized"}));
  l->add_option("--sigma-sq", lrn.sigma_sq, "Known Gaussian channel variance");
  l->add_option("--truth", lrn.truth, "Tree file to compare against");
  l->add_option("--workers", lrn.workers, "Threads for the pairwise kernel");
  l->add_option("--out", lrn.out, "Edge list output (default stdout)");

  BoundArgs bnd;
  auto* b = app.add_subcommand("bound", "Evaluate or invert an error bound");
  b->add_option("family", bnd.family, "theorem1, theorem2, algorithmic or lemma4")
      ->required()
      ->check(CLI::IsMember({"theorem1", "theorem2", "algorithmic", "lemma4"}));
  b->add_option("--d", bnd.d, "Number of nodes");
  b->add_option("--n", bnd.n, "Sample count");
  b->add_option("--M", bnd.M, "Data bound");
  b->add_option("--beta", bnd.beta, "Correlation gap of the erasure output");
  b->add_option("--t", bnd.t, "Deviation parameter t");
  b->add_option("--mu1", bnd.mu1, "Noise mean on r, i");
  b->add_option("--mu2", bnd.mu2, "Noise mean on s, j");
  b->add_option("--sigma-sq", bnd.sigma_sq, "Noise variance");
  b->add_option("--rho-e", bnd.rho_e, "Correlation of the true edge");
  b->add_option("--rho-eprime", bnd.rho_eprime, "Correlation of the competing pair");
  b->add_option("--subtrees", bnd.subtrees, "Subtree sizes")->delimiter(',');
  b->add_option("--neighbors", bnd.neighbors, "Neighbourhood size bounds")->delimiter(',');
  b->add_option("--rho1", bnd.rho1, "Chain weight 1-2");
  b->add_option("--rho2", bnd.rho2, "Chain weight 2-3");
  b->add_option("--epsilon", bnd.epsilon, "BSC flip probability");
  b->add_option("--e", bnd.e, "True edge (1-indexed i-j)");
  b->add_option("--eprime", bnd.eprime, "Competing pair (1-indexed i-j)");
  b->add_flag("--invert", bnd.invert, "Print the smallest n with bound <= delta");
  b->add_option("--delta", bnd.delta, "Target error probability");

  SweepArgs swp;
  auto* w = app.add_subcommand("sweep", "Monte Carlo error-probability sweep");
  w->add_option("--config", swp.config, "INI config file");
  w->add_option("--preset", swp.preset, "Named preset (see preset-list)");
  w->add_option("--trials", swp.trials, "Trials per sample size");
  w->add_option("--workers", swp.workers, "Worker threads");
  w->add_flag("--bounds-only", swp.bounds_only, "Skip simulation, print bound columns");
  w->add_option("--out", swp.out, "CSV output (default stdout)");
  add_seed(w, swp.seed);

  auto* p = app.add_subcommand("preset-list", "List named presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (g->parsed()) run_generate(gen);
    else if (s->parsed()) run_sample(smp);
    else if (c->parsed()) run_corrupt(cor);
    else if (l->parsed()) return run_learn(lrn);
    else if (b->parsed()) run_bound(bnd);
    else if (w->parsed()) run_sweep(swp);
    else if (p->parsed())
      for (const auto& name : ggm::preset_names())
        std::cout << name << "  " << ggm::preset_description(name) << '\n';
  } catch (const ggm::NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::domain_error& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
