#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ggm/ggm_model.hpp"

using namespace ggm;

namespace {

double column_corr(const Eigen::MatrixXd& x, int i, int j) {
  return x.col(i).dot(x.col(j)) / static_cast<double>(x.rows());
}

// Leading principal minors, computed by LU determinants (not Cholesky).
bool leading_minors_positive(const Eigen::MatrixXd& m) {
  for (Eigen::Index k = 1; k <= m.rows(); ++k)
    if (!(m.topLeftCorner(k, k).determinant() > 0.0)) return false;
  return true;
}

}  // namespace

TEST_CASE("TreeTopology validates spanning trees") {
  CHECK_NOTHROW(TreeTopology(3, {{0, 1}, {1, 2}}));
  CHECK_THROWS_AS(TreeTopology(3, {{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(TreeTopology(3, {{0, 0}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(TreeTopology(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(TreeTopology(4, {{0, 1}, {1, 2}, {0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(TreeTopology(3, {{0, 1}, {1, 5}}), std::invalid_argument);
  CHECK(TreeTopology(3, {{2, 1}, {0, 1}}) == TreeTopology(3, {{0, 1}, {1, 2}}));
}

TEST_CASE("Pruefer decoding") {
  const TreeTopology star = decode_pruefer({3, 3, 3});
  CHECK(star == make_star(3, 5));
  const TreeTopology chain = decode_pruefer({1, 2});
  CHECK(chain == make_chain({0, 1, 2, 3}, 4));
  CHECK_THROWS_AS(decode_pruefer({7}), std::invalid_argument);
}

TEST_CASE("generate_random_tree") {
  Rng rng(1);
  SUBCASE("d=2 is a single edge") {
    const auto t = generate_random_tree(2, rng);
    REQUIRE(t.edges().size() == 1);
    CHECK(t.edges()[0] == NodePair(0, 1));
  }
  SUBCASE("d=7 has six edges") { CHECK(generate_random_tree(7, rng).edges().size() == 6); }
  SUBCASE("d < 2 rejected") { CHECK_THROWS_AS(generate_random_tree(1, rng), std::invalid_argument); }
  SUBCASE("d=3 is uniform over the three labelled trees") {
    std::map<std::vector<NodePair>, int> counts;
    const int seeds = 30000;
    for (int s = 0; s < seeds; ++s) {
      Rng r(static_cast<std::uint64_t>(s));
      ++counts[generate_random_tree(3, r).edges()];
    }
    REQUIRE(counts.size() == 3);
    for (const auto& [edges, c] : counts) CHECK(std::abs(c / double(seeds) - 1.0 / 3.0) <= 0.02);
  }
  SUBCASE("d=4 hits all sixteen labelled trees") {
    std::set<std::vector<NodePair>> seen;
    for (int s = 0; s < 2000; ++s) seen.insert(generate_random_tree(4, rng).edges());
    CHECK(seen.size() == 16);
  }
}

TEST_CASE("assign_edge_weights") {
  Rng rng(7);
  const auto topo = generate_random_tree(8, rng);
  SUBCASE("degenerate interval") {
    const WeightedTree t = assign_edge_weights(topo, 0.5, 0.5, rng);
    for (double w : t.weights()) CHECK(w == 0.5);
  }
  SUBCASE("weights inside the interval") {
    for (int k = 0; k < 50; ++k) {
      const WeightedTree t = assign_edge_weights(topo, 0.1, 0.9, rng);
      for (double w : t.weights()) {
        CHECK(w >= 0.1);
        CHECK(w <= 0.9);
      }
    }
  }
  SUBCASE("deterministic under a seed") {
    Rng a(99), b(99);
    CHECK(assign_edge_weights(topo, 0.1, 0.9, a).weights() ==
          assign_edge_weights(topo, 0.1, 0.9, b).weights());
  }
  SUBCASE("intervals outside (0, 1) rejected") {
    CHECK_THROWS_AS(assign_edge_weights(topo, 0.0, 0.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(assign_edge_weights(topo, 0.2, 1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(assign_edge_weights(topo, 0.6, 0.5, rng), std::invalid_argument);
  }
}

TEST_CASE("WeightedTree validation") {
  const TreeTopology t(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(WeightedTree(t, std::vector<double>{0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedTree(t, std::vector<double>{0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedTree(t, std::vector<double>{0.5}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedTree(t, std::map<NodePair, double>{{{0, 1}, 0.5}, {{0, 2}, 0.5}}),
                  std::invalid_argument);
  const WeightedTree w(t, std::map<NodePair, double>{{{1, 0}, 0.3}, {{2, 1}, 0.4}});
  CHECK(w.weight({0, 1}) == 0.3);
  CHECK(w.weight({2, 1}) == 0.4);
  CHECK_THROWS_AS(w.weight({0, 2}), std::invalid_argument);
}

TEST_CASE("tree_to_covariance") {
  SUBCASE("chain path product") {
    const WeightedTree chain(make_chain({0, 1, 2}, 3), std::vector<double>{0.9, 0.1});
    const auto c = tree_to_covariance(chain);
    CHECK(c(0, 2) == doctest::Approx(0.09).epsilon(1e-15));
    CHECK(c(2, 0) == c(0, 2));
    CHECK(c(0, 1) == 0.9);
    CHECK(c(1, 1) == 1.0);
  }
  SUBCASE("star two-hop product") {
    const WeightedTree star(make_star(0, 5), std::vector<double>(4, 0.5));
    const auto c = tree_to_covariance(star);
    CHECK(c(1, 3) == doctest::Approx(0.25));
    CHECK(c(2, 4) == doctest::Approx(0.25));
  }
  SUBCASE("random trees are positive definite with unit diagonal") {
    Rng rng(3);
    for (int k = 0; k < 200; ++k) {
      const int d = 2 + k % 11;
      const auto t = assign_edge_weights(generate_random_tree(d, rng), 0.05, 0.95, rng);
      const auto c = tree_to_covariance(t);
      CHECK(c.diagonal().isOnes());
      CHECK(c.isApprox(c.transpose()));
      CHECK(leading_minors_positive(c));
      CHECK(is_positive_definite(c));
    }
  }
}

TEST_CASE("sample_dataset") {
  SUBCASE("two-node correlation") {
    Rng rng(11);
    const WeightedTree t(make_chain({0, 1}, 2), std::vector<double>{0.5});
    const Dataset x = sample_dataset(t, 200000, {}, rng);
    CHECK(std::abs(column_corr(x.samples(), 0, 1) - 0.5) <= 0.01);
  }
  SUBCASE("clipping at M = 3") {
    Rng rng(12);
    const WeightedTree t(make_chain({0, 1, 2, 3}, 4), std::vector<double>{0.8, 0.3, 0.6});
    SamplingOptions opts;
    opts.bound = 3.0;
    const Dataset x = sample_dataset(t, 100000, opts, rng);
    CHECK(x.samples().cwiseAbs().maxCoeff() <= 3.0);
    CHECK(x.bound() == 3.0);
    const double clipped = (x.samples().array().abs() == 3.0).cast<double>().mean();
    CHECK(clipped <= 0.005);
  }
  SUBCASE("reject mode keeps rows inside the bound") {
    Rng rng(13);
    const WeightedTree t(make_chain({0, 1, 2}, 3), std::vector<double>{0.7, 0.7});
    SamplingOptions opts;
    opts.bound = 3.0;
    opts.bound_mode = BoundMode::reject;
    const Dataset x = sample_dataset(t, 50000, opts, rng);
    CHECK(x.rows() == 50000);
    CHECK(x.samples().cwiseAbs().maxCoeff() < 3.0);
  }
  SUBCASE("independent columns from an identity covariance") {
    Rng rng(14);
    const Dataset x = sample_dataset(Eigen::MatrixXd::Identity(3, 3), 200000, {}, rng);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) CHECK(std::abs(column_corr(x.samples(), i, j)) <= 0.01);
  }
  SUBCASE("unit column variance within three standard errors") {
    // the sample variance of N(0, 1) data has standard error sqrt(2/n)
    Rng rng(15);
    const auto t = assign_edge_weights(generate_random_tree(6, rng), 0.1, 0.9, rng);
    const SampleCount n = 100000;
    const Dataset x = sample_dataset(t, n, {}, rng);
    for (int j = 0; j < 6; ++j)
      CHECK(std::abs(column_corr(x.samples(), j, j) - 1.0) <= 3.0 * std::sqrt(2.0 / double(n)));
  }
  SUBCASE("tree sampler agrees with the Cholesky sampler") {
    Rng rng(16);
    const auto t = assign_edge_weights(generate_random_tree(6, rng), 0.1, 0.9, rng);
    const Dataset a = sample_dataset(t, 100000, {}, rng);
    const Dataset b = sample_dataset(tree_to_covariance(t), 100000, {}, rng);
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j)
        CHECK(std::abs(column_corr(a.samples(), i, j) - column_corr(b.samples(), i, j)) <= 0.02);
  }
  SUBCASE("output does not depend on the root") {
    Rng rng(17);
    const auto t = assign_edge_weights(generate_random_tree(5, rng), 0.1, 0.9, rng);
    SamplingOptions other;
    other.root = 4;
    const Dataset a = sample_dataset(t, 100000, {}, rng);
    const Dataset b = sample_dataset(t, 100000, other, rng);
    const auto cov = tree_to_covariance(t);
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) {
        CHECK(std::abs(column_corr(a.samples(), i, j) - cov(i, j)) <= 0.02);
        CHECK(std::abs(column_corr(b.samples(), i, j) - cov(i, j)) <= 0.02);
      }
  }
  SUBCASE("errors") {
    Rng rng(18);
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(sample_dataset(bad, 10, {}, rng), NumericFailure);
    SamplingOptions low;
    low.bound = 2.0;
    const WeightedTree t(make_chain({0, 1}, 2), std::vector<double>{0.5});
    CHECK_THROWS_AS(sample_dataset(t, 10, low, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_dataset(t, 0, {}, rng), std::invalid_argument);
  }
  SUBCASE("deterministic under a seed") {
    const WeightedTree t(make_chain({0, 1, 2}, 3), std::vector<double>{0.4, 0.6});
    Rng a(5), b(5);
    CHECK(sample_dataset(t, 100, {}, a).samples() == sample_dataset(t, 100, {}, b).samples());
  }
}

TEST_CASE("Dataset") {
  Eigen::MatrixXd x(2, 2);
  x << 1.0, -1.0, -1.0, 1.0;
  CHECK(Dataset(x).is_binary());
  x(0, 0) = 0.5;
  CHECK_FALSE(Dataset(x).is_binary());
  x(0, 0) = 4.0;
  CHECK_THROWS_AS(Dataset(x, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(Dataset(x, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(Dataset(Eigen::MatrixXd(0, 3)), std::invalid_argument);
}

TEST_CASE("tree and dataset text formats round-trip") {
  Rng rng(21);
  const auto t = assign_edge_weights(generate_random_tree(9, rng), 0.1, 0.9, rng);
  std::stringstream ss;
  write_tree(ss, t);
  CHECK(ss.str().rfind("d=9\n", 0) == 0);
  const WeightedTree back = read_tree(ss);
  CHECK(back.topology() == t.topology());
  CHECK(back.weights() == t.weights());

  const Dataset x = sample_dataset(t, 50, {}, rng);
  std::stringstream cs;
  write_dataset_csv(cs, x);
  CHECK(read_dataset_csv(cs).samples() == x.samples());

  std::istringstream one_indexed("d=3\n1 2 0.5\n2 3 0.25\n");
  const WeightedTree parsed = read_tree(one_indexed);
  CHECK(parsed.weight({0, 1}) == 0.5);
  CHECK(parsed.weight({1, 2}) == 0.25);

  std::istringstream bad_header("3\n1 2 0.5\n");
  CHECK_THROWS_AS(read_tree(bad_header), std::invalid_argument);
  std::istringstream bad_line("d=2\n1 x 0.5\n");
  CHECK_THROWS_AS(read_tree(bad_line), std::invalid_argument);
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(read_dataset_csv(ragged), std::invalid_argument);
  std::istringstream junk("1,abc\n");
  CHECK_THROWS_AS(read_dataset_csv(junk), std::invalid_argument);
}
