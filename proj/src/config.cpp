#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ggm/harness.hpp"

namespace ggm {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty())
    throw std::invalid_argument("'" + key + "': expected a number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty())
    throw std::invalid_argument("'" + key + "': expected an integer, got '" + v + "'");
  return x;
}

std::vector<double> doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
  return out;
}

std::vector<int> ints(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split(v, ',')) out.push_back(static_cast<int>(to_integer(key, item)));
  return out;
}

/// "i-j", 1-indexed.
NodePair parse_pair(const std::string& key, const std::string& v) {
  const auto dash = v.find('-');
  if (dash == std::string::npos) throw std::invalid_argument("'" + key + "': expected i-j, got '" + v + "'");
  const auto i = to_integer(key, trim(v.substr(0, dash)));
  const auto j = to_integer(key, trim(v.substr(dash + 1)));
  if (i < 1 || j < 1) throw std::invalid_argument("'" + key + "': nodes are 1-indexed");
  return NodePair(static_cast<int>(i - 1), static_cast<int>(j - 1));
}

class Section {
 public:
  Section(const pt::ptree& root, const std::string& name) : name_(name) {
    if (auto s = root.get_child_optional(name)) tree_ = &*s;
  }

  bool present() const { return tree_ != nullptr; }

  std::optional<std::string> get(const std::string& key) const {
    if (!tree_) return std::nullopt;
    auto v = tree_->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return trim(*v);
  }

  std::string full(const std::string& key) const { return name_ + "." + key; }

  double number(const std::string& key, double fallback) const {
    auto v = get(key);
    return v ? to_double(full(key), *v) : fallback;
  }

  void check_keys(std::initializer_list<const char*> allowed) const {
    if (!tree_) return;
    for (const auto& [k, _] : *tree_) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) throw std::invalid_argument("unknown key '" + full(k) + "'");
    }
  }

 private:
  std::string name_;
  const pt::ptree* tree_ = nullptr;
};

std::optional<CrossoverGap> fixed_gap(const ExperimentConfig& c) {
  if (const auto* f = std::get_if<FixedTree>(&c.tree); f && f->tree.node_count() >= 3)
    return tightest_crossover_gap(f->tree);
  return std::nullopt;
}

double auto_beta(const ExperimentConfig& c) {
  const auto gap = fixed_gap(c);
  if (!gap) throw std::invalid_argument("beta = auto needs a fixed tree with d >= 3");
  const double xi = std::holds_alternative<ErasureChannelSpec>(c.channel)
                        ? std::get<ErasureChannelSpec>(c.channel).erasure_probability
                        : 0.0;
  return erasure_population_correlation(gap->rho_e, xi) -
         erasure_population_correlation(gap->rho_eprime, xi);
}

ExperimentConfig parse(const pt::ptree& root, const std::filesystem::path& base) {
  for (const auto& [name, _] : root) {
    static const char* known[] = {"experiment", "tree", "channel", "theorem1",
                                  "theorem2", "algorithmic", "lemma4"};
    bool ok = false;
    for (const char* k : known) ok = ok || name == k;
    if (!ok) throw std::invalid_argument("unknown section [" + name + "]");
  }

  const Section ex(root, "experiment");
  ex.check_keys({"preset", "name", "trials", "seed", "sweep", "metric", "mode", "workers", "pairs"});
  ExperimentConfig c;
  if (auto p = ex.get("preset")) c = preset(*p);
  if (auto v = ex.get("name")) c.name = *v;
  if (auto v = ex.get("trials")) c.trials = static_cast<int>(to_integer(ex.full("trials"), *v));
  if (auto v = ex.get("seed")) c.seed = static_cast<std::uint64_t>(to_integer(ex.full("seed"), *v));
  if (auto v = ex.get("workers")) c.workers = static_cast<int>(to_integer(ex.full("workers"), *v));
  if (auto v = ex.get("metric")) c.metric = parse_metric(*v);
  if (auto v = ex.get("mode")) c.mode = parse_mode(*v);
  if (auto v = ex.get("sweep")) {
    c.sweep.clear();
    for (const auto& item : split(*v, ',')) c.sweep.push_back(to_integer(ex.full("sweep"), item));
  }
  if (auto v = ex.get("pairs")) {
    const auto items = split(*v, ',');
    if (items.size() != 2) throw std::invalid_argument("'experiment.pairs': expected e, e'");
    c.pairs = CrossoverPairs{parse_pair(ex.full("pairs"), items[0]),
                             parse_pair(ex.full("pairs"), items[1])};
  }

  const Section tr(root, "tree");
  tr.check_keys({"source", "file", "d", "edges", "topology", "center", "low", "high", "bound",
                 "bound_mode"});
  if (auto src = tr.get("source")) {
    if (*src == "file") {
      auto f = tr.get("file");
      if (!f) throw std::invalid_argument("'tree.file' is required for source = file");
      std::filesystem::path path(*f);
      if (path.is_relative()) path = base / path;
      c.tree = FixedTree{read_tree_file(path.string())};
    } else if (*src == "edges") {
      auto dv = tr.get("d");
      auto ev = tr.get("edges");
      if (!dv || !ev) throw std::invalid_argument("source = edges needs 'tree.d' and 'tree.edges'");
      const int d = static_cast<int>(to_integer(tr.full("d"), *dv));
      std::map<NodePair, double> weights;
      std::vector<NodePair> edges;
      for (const auto& item : split(*ev, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
          throw std::invalid_argument("'tree.edges': expected i-j:weight, got '" + item + "'");
        const NodePair e = parse_pair(tr.full("edges"), item.substr(0, colon));
        edges.push_back(e);
        weights[e] = to_double(tr.full("edges"), trim(item.substr(colon + 1)));
      }
      c.tree = FixedTree{WeightedTree(TreeTopology(d, edges), weights)};
    } else if (*src == "random") {
      RandomTree r;
      if (const auto* old = std::get_if<RandomTree>(&c.tree)) r = *old;
      if (auto v = tr.get("d")) {
        r.d = static_cast<int>(to_integer(tr.full("d"), *v));
        r.topology.reset();
      }
      r.low = tr.number("low", r.low);
      r.high = tr.number("high", r.high);
      if (auto t = tr.get("topology")) {
        if (*t == "random") {
          r.topology.reset();
        } else if (*t == "star") {
          const int center = static_cast<int>(tr.number("center", 1.0)) - 1;
          if (r.d < 2) throw std::invalid_argument("tree needs d >= 2");
          r.topology = make_star(center, r.d);
        } else if (*t == "chain") {
          if (r.d < 2) throw std::invalid_argument("tree needs d >= 2");
          std::vector<int> order(r.d);
          for (int i = 0; i < r.d; ++i) order[i] = i;
          r.topology = make_chain(order, r.d);
        } else {
          throw std::invalid_argument("'tree.topology' must be random, star or chain");
        }
      }
      c.tree = r;
    } else {
      throw std::invalid_argument("'tree.source' must be file, edges or random");
    }
  }
  if (auto v = tr.get("bound")) {
    if (*v == "none") c.bound.reset();
    else c.bound = to_double(tr.full("bound"), *v);
  }
  if (auto v = tr.get("bound_mode")) {
    if (*v == "clip") c.bound_mode = BoundMode::clip;
    else if (*v == "reject") c.bound_mode = BoundMode::reject;
    else throw std::invalid_argument("'tree.bound_mode' must be clip or reject");
  }

  const Section ch(root, "channel");
  ch.check_keys({"type", "means", "mean", "variance", "xi", "epsilon"});
  if (auto type = ch.get("type")) {
    if (*type == "noiseless") {
      c.channel = NoiselessChannel{};
    } else if (*type == "gaussian") {
      GaussianChannelSpec g;
      if (auto m = ch.get("means")) g.per_sensor_mean = doubles(ch.full("means"), *m);
      else
        g.per_sensor_mean.assign(std::visit([](const auto& s) {
                                   if constexpr (std::is_same_v<std::decay_t<decltype(s)>, FixedTree>)
                                     return s.tree.node_count();
                                   else
                                     return s.d;
                                 }, c.tree),
                                 ch.number("mean", 0.0));
      g.variance = ch.number("variance", 1.0);
      c.channel = g;
    } else if (*type == "erasure") {
      c.channel = ErasureChannelSpec{ch.number("xi", 0.0)};
    } else if (*type == "bsc") {
      c.channel = BscSpec{ch.number("epsilon", 0.0)};
    } else {
      throw std::invalid_argument("'channel.type' must be noiseless, gaussian, erasure or bsc");
    }
  } else if (ch.present()) {
    // adjust the preset's channel in place
    if (auto* g = std::get_if<GaussianChannelSpec>(&c.channel)) {
      if (auto m = ch.get("means")) g->per_sensor_mean = doubles(ch.full("means"), *m);
      g->variance = ch.number("variance", g->variance);
    } else if (auto* e = std::get_if<ErasureChannelSpec>(&c.channel)) {
      e->erasure_probability = ch.number("xi", e->erasure_probability);
    } else if (auto* b = std::get_if<BscSpec>(&c.channel)) {
      b->flip_probability = ch.number("epsilon", b->flip_probability);
    }
  }

  const Section t1(root, "theorem1");
  t1.check_keys({"mu1", "mu2", "sigma_sq", "M", "rho_e", "rho_eprime", "t_low", "t_high", "t_values"});
  if (t1.present()) {
    Theorem1Overlay o = c.overlays.theorem1.value_or(Theorem1Overlay{});
    o.mu1 = t1.number("mu1", o.mu1);
    o.mu2 = t1.number("mu2", o.mu2);
    o.sigma_sq = t1.number("sigma_sq", o.sigma_sq);
    o.M = t1.number("M", o.M);
    const bool have_rho = t1.get("rho_e") && t1.get("rho_eprime");
    if (have_rho) {
      o.rho_e = t1.number("rho_e", 0.0);
      o.rho_eprime = t1.number("rho_eprime", 0.0);
    } else if (auto gap = fixed_gap(c)) {
      o.rho_e = gap->rho_e;
      o.rho_eprime = gap->rho_eprime;
    } else if (!c.overlays.theorem1) {
      throw std::invalid_argument("[theorem1] needs rho_e and rho_eprime for a random tree");
    }
    o.t_low = t1.number("t_low", o.t_low);
    o.t_high = t1.number("t_high", o.t_high);
    if (auto v = t1.get("t_values")) o.t_values = doubles(t1.full("t_values"), *v);
    c.overlays.theorem1 = o;
  }

  const Section t2(root, "theorem2");
  t2.check_keys({"beta", "M"});
  if (t2.present()) {
    Theorem2Overlay o = c.overlays.theorem2.value_or(Theorem2Overlay{});
    auto b = t2.get("beta");
    o.beta = b && *b != "auto" ? to_double(t2.full("beta"), *b) : auto_beta(c);
    o.M = t2.number("M", o.M);
    c.overlays.theorem2 = o;
  }

  const Section al(root, "algorithmic");
  al.check_keys({"subtrees", "neighbors", "beta", "M"});
  if (al.present()) {
    AlgorithmicOverlay o = c.overlays.algorithmic.value_or(AlgorithmicOverlay{});
    if (auto v = al.get("subtrees")) o.knowledge.subtree_sizes = ints(al.full("subtrees"), *v);
    if (auto v = al.get("neighbors")) o.knowledge.neighborhood_bounds = ints(al.full("neighbors"), *v);
    auto b = al.get("beta");
    o.beta = b && *b != "auto" ? to_double(al.full("beta"), *b) : auto_beta(c);
    o.M = al.number("M", o.M);
    c.overlays.algorithmic = o;
  }

  const Section l4(root, "lemma4");
  l4.check_keys({"enabled"});
  if (l4.present()) {
    const auto v = l4.get("enabled").value_or("true");
    if (v == "true") c.overlays.lemma4 = Lemma4Overlay{};
    else if (v == "false") c.overlays.lemma4.reset();
    else throw std::invalid_argument("'lemma4.enabled' must be true or false");
  }

  c.validate();
  return c;
}

}  // namespace

namespace {

// read_ini drops sections without keys; a bare header still enables an overlay
pt::ptree read_sections(std::istream& is, const std::string& origin) {
  std::stringstream text;
  text << is.rdbuf();
  pt::ptree root;
  try {
    pt::read_ini(text, root);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  text.clear();
  text.seekg(0);
  std::string line;
  while (std::getline(text, line)) {
    const std::string t = trim(line);
    if (t.size() > 2 && t.front() == '[' && t.back() == ']') {
      const std::string name = trim(t.substr(1, t.size() - 2));
      if (!root.get_child_optional(pt::ptree::path_type(name, '\0'))) root.push_back({name, pt::ptree()});
    }
  }
  return root;
}

}  // namespace

ExperimentConfig load_config(std::istream& is) {
  return parse(read_sections(is, "config"), std::filesystem::current_path());
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  return parse(read_sections(in, path), std::filesystem::path(path).parent_path());
}

}  // namespace ggm
