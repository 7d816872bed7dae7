#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ggm/rng.hpp"
#include "ggm/types.hpp"

namespace ggm {

/// Undirected spanning tree over nodes 0..d-1.
///
/// Edges are kept sorted, so two topologies with the same edge set compare
/// equal regardless of the order they were supplied in.
class TreeTopology {
 public:
  /// Throws std::invalid_argument unless `edges` form a spanning tree of d
  /// nodes (d-1 edges, no self loops, no duplicates, acyclic).
  TreeTopology(int node_count, std::vector<NodePair> edges);

  int node_count() const { return node_count_; }
  const std::vector<NodePair>& edges() const { return edges_; }
  bool has_edge(NodePair e) const;

  /// Adjacency lists, neighbours sorted ascending.
  std::vector<std::vector<int>> adjacency() const;

  bool operator==(const TreeTopology&) const = default;

 private:
  int node_count_;
  std::vector<NodePair> edges_;
};

TreeTopology make_chain(const std::vector<int>& order, int node_count);
TreeTopology make_star(int center, int node_count);

/// Tree whose edge weights are correlation coefficients in (0, 1).
class WeightedTree {
 public:
  WeightedTree(TreeTopology topology, const std::map<NodePair, double>& weights);
  /// Weights aligned with topology.edges().
  WeightedTree(TreeTopology topology, std::vector<double> weights);

  const TreeTopology& topology() const { return topology_; }
  int node_count() const { return topology_.node_count(); }
  const std::vector<double>& weights() const { return weights_; }
  double weight(NodePair e) const;

 private:
  void validate() const;

  TreeTopology topology_;
  std::vector<double> weights_;
};

/// d x d symmetric, unit diagonal.
using CorrelationMatrix = Eigen::MatrixXd;

/// n x d sample matrix, column i is the data held by sensor i.
class Dataset {
 public:
  /// Throws std::invalid_argument on an empty matrix, a bound below 3, or an
  /// entry outside [-M, M] when a bound is given.
  explicit Dataset(Eigen::MatrixXd samples, std::optional<double> bound = std::nullopt);

  SampleCount rows() const { return samples_.rows(); }
  int cols() const { return static_cast<int>(samples_.cols()); }
  const Eigen::MatrixXd& samples() const { return samples_; }
  std::optional<double> bound() const { return bound_; }

  bool is_binary() const;

 private:
  Eigen::MatrixXd samples_;
  std::optional<double> bound_;
};

/// Uniform labelled tree on d >= 2 nodes via a random Prüfer sequence.
TreeTopology generate_random_tree(int node_count, Rng& rng);

/// Decodes a Prüfer sequence (values in [0, d)) of length d-2.
TreeTopology decode_pruefer(const std::vector<int>& sequence);

/// Independent U[low, high] weight per edge; requires 0 < low <= high < 1.
WeightedTree assign_edge_weights(const TreeTopology& topology, double low, double high,
                                 Rng& rng);

/// Entry (i, m) is the product of the weights on the path i -> m.
CorrelationMatrix tree_to_covariance(const WeightedTree& tree);

bool is_positive_definite(const CorrelationMatrix& cov);

enum class BoundMode { clip, reject };

struct SamplingOptions {
  std::optional<double> bound;  // M; absent = unbounded
  BoundMode bound_mode = BoundMode::clip;
  int root = 0;  // tree sampler only
};

/// Generic N(0, cov) sampler through a Cholesky factor. Throws NumericFailure
/// when cov is not positive definite.
Dataset sample_dataset(const CorrelationMatrix& cov, SampleCount n,
                       const SamplingOptions& opts, Rng& rng);

/// Root-to-leaf sampler, X_child = rho X_parent + sqrt(1 - rho^2) Z.
Dataset sample_dataset(const WeightedTree& tree, SampleCount n, const SamplingOptions& opts,
                       Rng& rng);

// Text formats.
//   tree:    "d=<n>" then one "i j weight" line per edge, 1-indexed
//   dataset: CSV without header, one sample per row

void write_tree(std::ostream& os, const WeightedTree& tree);
WeightedTree read_tree(std::istream& is);
WeightedTree read_tree_file(const std::string& path);

void write_dataset_csv(std::ostream& os, const Dataset& data);
Dataset read_dataset_csv(std::istream& is);
Dataset read_dataset_csv_file(const std::string& path);

}  // namespace ggm
