#include "ggm/chow_liu.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "union_find.hpp"

namespace ggm {

TreeTopology mwst(const Eigen::MatrixXd& weights) {
  const auto d = static_cast<int>(weights.rows());
  if (d < 2 || weights.cols() != d) throw std::invalid_argument("mwst needs a square matrix, d >= 2");

  struct Candidate {
    double w;
    NodePair e;
  };
  std::vector<Candidate> cands;
  cands.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double w = weights(i, j);
      if (std::isnan(w)) throw std::invalid_argument("NaN weight in mwst input");
      cands.push_back({w, NodePair(i, j)});
    }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.w != b.w) return a.w > b.w;
    return a.e < b.e;
  });

  detail::UnionFind uf(d);
  std::vector<NodePair> edges;
  edges.reserve(d - 1);
  for (const auto& c : cands) {
    if (uf.unite(c.e.first, c.e.second)) {
      edges.push_back(c.e);
      if (static_cast<int>(edges.size()) == d - 1) break;
    }
  }
  return TreeTopology(d, std::move(edges));
}

EstimatedTree chow_liu(const PairwiseScores& scores, Mode mode) {
  return EstimatedTree{mwst(scores.order_key), scores.mi, mode};
}

EstimatedTree chow_liu(const Dataset& data, Mode mode, const PairwiseOptions& opts) {
  if (data.cols() < 2) throw std::invalid_argument("Chow-Liu needs d >= 2");
  if (data.rows() < 2) throw std::invalid_argument("Chow-Liu needs n >= 2");
  return chow_liu(pairwise_mi_matrix(data, mode, opts), mode);
}

bool tree_equals(const TreeTopology& a, const TreeTopology& b) {
  if (a.node_count() != b.node_count()) throw std::invalid_argument("trees differ in node count");
  return a.edges() == b.edges();
}

}  // namespace ggm
