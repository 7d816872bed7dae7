#include "ggm/ggm_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <string_view>

#include "union_find.hpp"

namespace ggm {

TreeTopology::TreeTopology(int node_count, std::vector<NodePair> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ < 1) throw std::invalid_argument("tree needs at least one node");
  if (static_cast<int>(edges_.size()) != node_count_ - 1)
    throw std::invalid_argument("tree on " + std::to_string(node_count_) + " nodes needs " +
                                std::to_string(node_count_ - 1) + " edges, got " +
                                std::to_string(edges_.size()));
  std::sort(edges_.begin(), edges_.end());
  detail::UnionFind uf(node_count_);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto e = edges_[k];
    if (e.first < 0 || e.second >= node_count_)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.first == e.second) throw std::invalid_argument("self loop in tree");
    if (k > 0 && edges_[k - 1] == e) throw std::invalid_argument("duplicate edge in tree");
    if (!uf.unite(e.first, e.second)) throw std::invalid_argument("edge set contains a cycle");
  }
}

bool TreeTopology::has_edge(NodePair e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

std::vector<std::vector<int>> TreeTopology::adjacency() const {
  std::vector<std::vector<int>> adj(node_count_);
  for (const auto& e : edges_) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

TreeTopology make_chain(const std::vector<int>& order, int node_count) {
  std::vector<NodePair> edges;
  for (std::size_t k = 1; k < order.size(); ++k) edges.emplace_back(order[k - 1], order[k]);
  return TreeTopology(node_count, std::move(edges));
}

TreeTopology make_star(int center, int node_count) {
  std::vector<NodePair> edges;
  for (int v = 0; v < node_count; ++v)
    if (v != center) edges.emplace_back(center, v);
  return TreeTopology(node_count, std::move(edges));
}

WeightedTree::WeightedTree(TreeTopology topology, const std::map<NodePair, double>& weights)
    : topology_(std::move(topology)) {
  if (weights.size() != topology_.edges().size())
    throw std::invalid_argument("weight map does not match the edge set");
  weights_.reserve(weights.size());
  for (const auto& e : topology_.edges()) {
    auto it = weights.find(e);
    if (it == weights.end()) throw std::invalid_argument("weight map does not match the edge set");
    weights_.push_back(it->second);
  }
  validate();
}

WeightedTree::WeightedTree(TreeTopology topology, std::vector<double> weights)
    : topology_(std::move(topology)), weights_(std::move(weights)) {
  if (weights_.size() != topology_.edges().size())
    throw std::invalid_argument("one weight per edge required");
  validate();
}

void WeightedTree::validate() const {
  for (double w : weights_)
    if (!(w > 0.0 && w < 1.0))
      throw std::invalid_argument("edge weight must lie in (0, 1), got " + std::to_string(w));
}

double WeightedTree::weight(NodePair e) const {
  const auto& es = topology_.edges();
  auto it = std::lower_bound(es.begin(), es.end(), e);
  if (it == es.end() || *it != e) throw std::invalid_argument("not an edge of the tree");
  return weights_[static_cast<std::size_t>(it - es.begin())];
}

Dataset::Dataset(Eigen::MatrixXd samples, std::optional<double> bound)
    : samples_(std::move(samples)), bound_(bound) {
  if (samples_.rows() < 1 || samples_.cols() < 1)
    throw std::invalid_argument("dataset must have at least one row and one column");
  if (bound_) {
    if (!(*bound_ >= 3.0)) throw std::invalid_argument("data bound M must be >= 3");
    if (samples_.cwiseAbs().maxCoeff() > *bound_)
      throw std::invalid_argument("entry exceeds the declared data bound");
  }
}

bool Dataset::is_binary() const {
  return samples_.unaryExpr([](double x) { return (x == 1.0 || x == -1.0) ? 0.0 : 1.0; }).sum() ==
         0.0;
}

TreeTopology decode_pruefer(const std::vector<int>& sequence) {
  const int d = static_cast<int>(sequence.size()) + 2;
  std::vector<int> degree(d, 1);
  for (int v : sequence) {
    if (v < 0 || v >= d) throw std::invalid_argument("Prüfer entry out of range");
    ++degree[v];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
  for (int v = 0; v < d; ++v)
    if (degree[v] == 1) leaves.push(v);

  std::vector<NodePair> edges;
  edges.reserve(d - 1);
  for (int v : sequence) {
    const int leaf = leaves.top();
    leaves.pop();
    edges.emplace_back(leaf, v);
    if (--degree[v] == 1) leaves.push(v);
  }
  const int a = leaves.top();
  leaves.pop();
  edges.emplace_back(a, leaves.top());
  return TreeTopology(d, std::move(edges));
}

TreeTopology generate_random_tree(int node_count, Rng& rng) {
  if (node_count < 2) throw std::invalid_argument("random tree needs d >= 2");
  std::uniform_int_distribution<int> pick(0, node_count - 1);
  std::vector<int> seq(node_count - 2);
  for (auto& v : seq) v = pick(rng);
  return decode_pruefer(seq);
}

WeightedTree assign_edge_weights(const TreeTopology& topology, double low, double high,
                                 Rng& rng) {
  if (!(low > 0.0 && low <= high && high < 1.0))
    throw std::invalid_argument("weight interval must satisfy 0 < low <= high < 1");
  std::vector<double> w(topology.edges().size());
  if (low == high) {
    std::fill(w.begin(), w.end(), low);
  } else {
    std::uniform_real_distribution<double> u(low, high);
    for (auto& x : w) x = u(rng);
  }
  return WeightedTree(topology, std::move(w));
}

namespace {

struct Rooted {
  std::vector<int> order;       // BFS order, order[0] = root
  std::vector<int> parent;      // -1 for the root
  std::vector<double> weight;   // weight of edge to parent
};

Rooted root_tree(const WeightedTree& tree, int root) {
  const int d = tree.node_count();
  if (root < 0 || root >= d) throw std::invalid_argument("root out of range");
  std::vector<std::vector<std::pair<int, double>>> adj(d);
  const auto& es = tree.topology().edges();
  for (std::size_t k = 0; k < es.size(); ++k) {
    adj[es[k].first].emplace_back(es[k].second, tree.weights()[k]);
    adj[es[k].second].emplace_back(es[k].first, tree.weights()[k]);
  }
  Rooted r{{}, std::vector<int>(d, -1), std::vector<double>(d, 0.0)};
  std::vector<bool> seen(d, false);
  std::queue<int> q;
  q.push(root);
  seen[root] = true;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    r.order.push_back(u);
    for (auto [v, w] : adj[u]) {
      if (seen[v]) continue;
      seen[v] = true;
      r.parent[v] = u;
      r.weight[v] = w;
      q.push(v);
    }
  }
  return r;
}

bool row_within(const Eigen::MatrixXd& x, Eigen::Index k, double m) {
  return x.row(k).cwiseAbs().maxCoeff() <= m;
}

// Applies the bound option in place; `redraw(k)` regenerates row k.
template <typename Redraw>
void enforce_bound(Eigen::MatrixXd& x, const SamplingOptions& opts, Redraw&& redraw) {
  if (!opts.bound) return;
  const double m = *opts.bound;
  if (!(m >= 3.0)) throw std::invalid_argument("data bound M must be >= 3");
  if (opts.bound_mode == BoundMode::clip) {
    x = x.cwiseMax(-m).cwiseMin(m);
    return;
  }
  for (Eigen::Index k = 0; k < x.rows(); ++k)
    while (!row_within(x, k, m)) redraw(k);
}

}  // namespace

CorrelationMatrix tree_to_covariance(const WeightedTree& tree) {
  const int d = tree.node_count();
  CorrelationMatrix cov = CorrelationMatrix::Identity(d, d);
  for (int src = 0; src < d; ++src) {
    const Rooted r = root_tree(tree, src);
    for (std::size_t k = 1; k < r.order.size(); ++k) {
      const int v = r.order[k];
      cov(src, v) = cov(src, r.parent[v]) * r.weight[v];
    }
  }
  return cov;
}

bool is_positive_definite(const CorrelationMatrix& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  return llt.info() == Eigen::Success;
}

Dataset sample_dataset(const CorrelationMatrix& cov, SampleCount n, const SamplingOptions& opts,
                       Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  if (cov.rows() != cov.cols()) throw std::invalid_argument("covariance must be square");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericFailure("covariance matrix is not positive definite");
  const Eigen::MatrixXd lower = llt.matrixL();
  const Eigen::Index d = cov.rows();

  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(n, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = 0; k < n; ++k) z(k, j) = normal(rng);
  Eigen::MatrixXd x = z * lower.transpose();

  enforce_bound(x, opts, [&](Eigen::Index k) {
    Eigen::RowVectorXd row(d);
    for (Eigen::Index j = 0; j < d; ++j) row(j) = normal(rng);
    x.row(k) = row * lower.transpose();
  });
  return Dataset(std::move(x), opts.bound);
}

Dataset sample_dataset(const WeightedTree& tree, SampleCount n, const SamplingOptions& opts,
                       Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  const Rooted r = root_tree(tree, opts.root);
  const int d = tree.node_count();
  std::normal_distribution<double> normal;

  Eigen::MatrixXd x(n, d);
  {
    double* root = x.col(r.order[0]).data();
    for (SampleCount k = 0; k < n; ++k) root[k] = normal(rng);
  }
  for (std::size_t s = 1; s < r.order.size(); ++s) {
    const int v = r.order[s];
    const double rho = r.weight[v];
    const double resid = std::sqrt(1.0 - rho * rho);
    const double* par = x.col(r.parent[v]).data();
    double* out = x.col(v).data();
    for (SampleCount k = 0; k < n; ++k) out[k] = rho * par[k] + resid * normal(rng);
  }

  enforce_bound(x, opts, [&](Eigen::Index k) {
    x(k, r.order[0]) = normal(rng);
    for (std::size_t s = 1; s < r.order.size(); ++s) {
      const int v = r.order[s];
      const double rho = r.weight[v];
      x(k, v) = rho * x(k, r.parent[v]) + std::sqrt(1.0 - rho * rho) * normal(rng);
    }
  });
  return Dataset(std::move(x), opts.bound);
}

// ---------------------------------------------------------------------------
// text I/O

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view s, const char* what) {
  s = trim(s);
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument(std::string("cannot parse ") + what + " '" + std::string(s) + "'");
  return value;
}

}  // namespace

void write_tree(std::ostream& os, const WeightedTree& tree) {
  os << "d=" << tree.node_count() << '\n';
  const auto& es = tree.topology().edges();
  for (std::size_t k = 0; k < es.size(); ++k)
    os << es[k].first + 1 << ' ' << es[k].second + 1 << ' ' << format_double(tree.weights()[k])
       << '\n';
}

WeightedTree read_tree(std::istream& is) {
  std::string line;
  std::optional<int> d;
  std::map<NodePair, double> weights;
  std::vector<NodePair> edges;
  while (std::getline(is, line)) {
    auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (!d) {
      if (s.substr(0, 2) != "d=") throw std::invalid_argument("tree file must start with d=<n>");
      d = parse_number<int>(s.substr(2), "node count");
      continue;
    }
    std::istringstream ls{std::string(s)};
    std::string a, b, w;
    if (!(ls >> a >> b >> w)) throw std::invalid_argument("malformed edge line '" + line + "'");
    NodePair e(parse_number<int>(a, "node") - 1, parse_number<int>(b, "node") - 1);
    edges.push_back(e);
    weights[e] = parse_number<double>(w, "weight");
  }
  if (!d) throw std::invalid_argument("empty tree file");
  return WeightedTree(TreeTopology(*d, std::move(edges)), weights);
}

WeightedTree read_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open tree file '" + path + "'");
  return read_tree(in);
}

void write_dataset_csv(std::ostream& os, const Dataset& data) {
  const auto& x = data.samples();
  std::string line;
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    line.clear();
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j) line += ',';
      line += format_double(x(k, j));
    }
    line += '\n';
    os << line;
  }
}

Dataset read_dataset_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    auto s = trim(line);
    if (s.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = s.find(',', start);
      row.push_back(parse_number<double>(s.substr(start, comma - start), "value"));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("ragged CSV row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty dataset");
  Eigen::MatrixXd x(rows.size(), rows.front().size());
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t j = 0; j < rows[k].size(); ++j) x(k, j) = rows[k][j];
  return Dataset(std::move(x));
}

Dataset read_dataset_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open dataset '" + path + "'");
  return read_dataset_csv(in);
}

}  // namespace ggm
