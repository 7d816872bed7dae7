#pragma once

#include <Eigen/Dense>

#include "ggm/estimators.hpp"
#include "ggm/ggm_model.hpp"

namespace ggm {

struct EstimatedTree {
  TreeTopology topology;
  Eigen::MatrixXd score_matrix;  // the MI matrix
  Mode mode = Mode::continuous;
};

/// Maximum-weight spanning tree by Kruskal. Pairs are taken in descending
/// weight; equal weights are ordered by (min node, max node) ascending.
/// Only the upper triangle is read. NaN weights throw std::invalid_argument.
TreeTopology mwst(const Eigen::MatrixXd& weights);

EstimatedTree chow_liu(const Dataset& data, Mode mode, const PairwiseOptions& opts = {});

/// Spanning tree from already computed scores.
EstimatedTree chow_liu(const PairwiseScores& scores, Mode mode);

/// Same edge set. Throws std::invalid_argument on a node-count mismatch.
bool tree_equals(const TreeTopology& a, const TreeTopology& b);

}  // namespace ggm
