#include "ggm/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ggm {

namespace {

double clamp_probability(double v) { return std::clamp(v, 0.0, 1.0); }

void check_n(SampleCount n) {
  if (n < 0) throw std::invalid_argument("sample count must be >= 0");
}

double cube(double x) { return x * x * x; }

// Rate c in exp(-c n) of the Hoeffding term with deviation `dev`.
double hoeffding_rate(double dev, const HoeffdingRange& r) {
  if (!(r.width() > 0.0)) throw std::invalid_argument("Hoeffding range must have b_M > a_M");
  return 2.0 * dev * dev / (r.width() * r.width());
}

double lemma2_part1_rate(double t, double sigma_sq, double sigma_L_sq) {
  if (!(sigma_L_sq > 0.0)) throw std::invalid_argument("sigma_L^2 must be > 0");
  const double s = 1.0 + sigma_sq;
  return t * t * s * s / (2.0 * sigma_L_sq);
}

// Smallest n >= 0 with f(n) <= delta for nonincreasing f, given f(hi) <= delta.
template <typename F>
SampleCount smallest_n(F&& f, double delta, SampleCount hi) {
  if (f(0) <= delta) return 0;
  while (f(hi) > delta) hi *= 2;
  SampleCount lo = 0;  // f(lo) > delta
  while (hi - lo > 1) {
    const SampleCount mid = lo + (hi - lo) / 2;
    (f(mid) <= delta ? hi : lo) = mid;
  }
  return hi;
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
}

SampleCount closed_form_n(double prefactor, double rate, double delta) {
  if (prefactor <= delta) return 0;
  const double x = std::ceil(std::log(prefactor / delta) / rate);
  if (!(x < 9.0e18)) throw std::invalid_argument("sample complexity overflows");
  return static_cast<SampleCount>(x);
}

}  // namespace

HoeffdingRange hoeffding_range(double M) {
  if (!(M >= 3.0)) throw std::invalid_argument("data bound M must be >= 3");
  return {-2.0 * M * M, 2.0 * M * M};
}

void GeneralCaseParams::validate() const {
  if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
  if (!(sigma_sq > 0.0)) throw std::invalid_argument("sigma^2 must be > 0");
  if (!(M >= 3.0)) throw std::invalid_argument("data bound M must be >= 3");
  if (!(rho_eprime > 0.0 && rho_eprime < rho_e && rho_e < 1.0))
    throw std::invalid_argument("need 0 < rho_e' < rho_e < 1");
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  check_n(n);
}

void ErasureBoundParams::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  if (!(M >= 3.0)) throw std::invalid_argument("data bound M must be >= 3");
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  check_n(n);
}

double sigma_L_squared(double mu1, double mu2, double sigma_sq) {
  if (!(sigma_sq > 0.0)) throw std::invalid_argument("sigma^2 must be > 0");
  const double s = sigma_sq;
  return 2.0 * mu2 * mu2 * s + 2.0 * (mu1 * mu1 + s) * s + 2.0 * mu1 * mu1 + 2.0 * mu2 * mu2 +
         4.0 * s;
}

double lemma2_part1(double t, SampleCount n, double sigma_sq, double sigma_L_sq) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
  check_n(n);
  const double rate = lemma2_part1_rate(t, sigma_sq, sigma_L_sq);
  return clamp_probability(std::exp(-rate * static_cast<double>(n)));
}

double lemma2_part2(double rho_e, double rho_eprime, double t, SampleCount n, double sigma_sq,
                    double M, std::optional<HoeffdingRange> range) {
  if (!(rho_e - rho_eprime > 0.0)) throw std::invalid_argument("need rho_e > rho_e'");
  if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
  if (!(sigma_sq >= 0.0)) throw std::invalid_argument("sigma^2 must be >= 0");
  check_n(n);
  const double rate = hoeffding_rate(rho_e - rho_eprime + t, range.value_or(hoeffding_range(M)));
  return clamp_probability(std::exp(-rate * static_cast<double>(n)));
}

double theorem1_bound(const GeneralCaseParams& p) {
  p.validate();
  const double part1 = lemma2_part1(p.t, p.n, p.sigma_sq, sigma_L_squared(p.mu1, p.mu2, p.sigma_sq));
  const double part2 =
      lemma2_part2(p.rho_e, p.rho_eprime, p.t, p.n, p.sigma_sq, p.M, p.effective_range());
  return clamp_probability(cube(p.d) * (part1 + part2));
}

double theorem2_bound(const ErasureBoundParams& p) {
  p.validate();
  const double rate = hoeffding_rate(p.beta, p.effective_range());
  return clamp_probability(cube(p.d) * std::exp(-rate * static_cast<double>(p.n)));
}

double erasure_population_correlation(double rho, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("erasure probability must lie in [0, 1]");
  const double keep = 1.0 - xi;
  return keep * keep * rho + xi * xi;
}

// ---------------------------------------------------------------------------

BscCrossoverProbs BscCrossoverProbs::from(double p0, double p1, double p2) {
  if (p0 < 0.0 || p1 < 0.0 || p2 < 0.0) throw std::invalid_argument("negative probability");
  BscCrossoverProbs out{p0, p1, p2, 0.0};
  out.D = std::min(0.0, std::log(p0 + 2.0 * std::sqrt(p1 * p2)));
  return out;
}

double sign_triple_probability(double rho12, double rho13, double rho23, int s1, int s2, int s3) {
  const double pi = std::numbers::pi;
  return 0.125 + (s1 * s2 * std::asin(rho12) + s1 * s3 * std::asin(rho13) +
                  s2 * s3 * std::asin(rho23)) /
                     (4.0 * pi);
}

namespace {

void check_layout_in(const CrossoverPairs& pairs, int nodes) {
  for (const auto& p : {pairs.e, pairs.e_prime}) {
    if (p.first == p.second) throw std::invalid_argument("pair needs two distinct nodes");
    if (p.first < 0 || p.second >= nodes)
      throw std::invalid_argument("pair node out of range");
  }
  if (pairs.e == pairs.e_prime) throw std::invalid_argument("e and e' must differ");
}

}  // namespace

BscCrossoverProbs bsc_crossover_probs(const Eigen::Matrix3d& corr, const CrossoverPairs& pairs,
                                      double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 0.5)) throw std::invalid_argument("epsilon must lie in [0, 0.5]");
  for (const auto& p : {pairs.e, pairs.e_prime})
    if (p.first < 0 || p.second > 2)
      throw Unsupported(
          "exact crossover probabilities need e and e' to share a node; use the Monte Carlo "
          "estimator");
  check_layout_in(pairs, 3);

  std::array<double, 3> p{0.0, 0.0, 0.0};
  for (int a = 0; a < 8; ++a) {
    const std::array<int, 3> s{(a & 1) ? 1 : -1, (a & 2) ? 1 : -1, (a & 4) ? 1 : -1};
    const double ps = sign_triple_probability(corr(0, 1), corr(0, 2), corr(1, 2), s[0], s[1], s[2]);
    for (int b = 0; b < 8; ++b) {
      // one flip per node; a shared node's flip enters both products
      std::array<int, 3> u{};
      double pr = ps;
      for (int k = 0; k < 3; ++k) {
        const bool flipped = (b >> k) & 1;
        pr *= flipped ? epsilon : 1.0 - epsilon;
        u[k] = flipped ? -s[k] : s[k];
      }
      const int pe = u[pairs.e.first] * u[pairs.e.second];
      const int pep = u[pairs.e_prime.first] * u[pairs.e_prime.second];
      if (pe == pep) p[0] += pr;
      else if (pe == -1) p[1] += pr;
      else p[2] += pr;
    }
  }
  return BscCrossoverProbs::from(p[0], p[1], p[2]);
}

BscCrossoverProbs bsc_crossover_probs(double rho1, double rho2, const CrossoverPairs& pairs,
                                      double epsilon) {
  if (!(std::abs(rho1) < 1.0 && std::abs(rho2) < 1.0))
    throw std::invalid_argument("correlations must lie in (-1, 1)");
  Eigen::Matrix3d c;
  c << 1.0, rho1, rho1 * rho2,  //
      rho1, 1.0, rho2,          //
      rho1 * rho2, rho2, 1.0;
  return bsc_crossover_probs(c, pairs, epsilon);
}

BscCrossoverProbs bsc_crossover_probs_monte_carlo(const CorrelationMatrix& corr,
                                                  const CrossoverPairs& pairs, double epsilon,
                                                  SampleCount trials, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 0.5)) throw std::invalid_argument("epsilon must lie in [0, 0.5]");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  check_layout_in(pairs, static_cast<int>(corr.rows()));
  Eigen::LLT<Eigen::MatrixXd> llt(corr);
  if (llt.info() != Eigen::Success) throw NumericFailure("correlation matrix is not positive definite");
  const Eigen::MatrixXd lower = llt.matrixL();
  const Eigen::Index d = corr.rows();

  std::normal_distribution<double> normal;
  std::bernoulli_distribution flip(epsilon);
  Eigen::VectorXd z(d), x(d);
  std::vector<int> u(d);
  SampleCount counts[3] = {0, 0, 0};
  for (SampleCount k = 0; k < trials; ++k) {
    for (Eigen::Index j = 0; j < d; ++j) z(j) = normal(rng);
    x.noalias() = lower * z;
    for (Eigen::Index j = 0; j < d; ++j) u[j] = (x(j) < 0.0 ? -1 : 1) * (flip(rng) ? -1 : 1);
    const int pe = u[pairs.e.first] * u[pairs.e.second];
    const int pep = u[pairs.e_prime.first] * u[pairs.e_prime.second];
    ++counts[pe == pep ? 0 : (pe == -1 ? 1 : 2)];
  }
  const double tt = static_cast<double>(trials);
  return BscCrossoverProbs::from(counts[0] / tt, counts[1] / tt, counts[2] / tt);
}

double lemma4_bound(const BscCrossoverProbs& probs, SampleCount n) {
  check_n(n);
  return clamp_probability(std::exp(static_cast<double>(n) * probs.D));
}

// ---------------------------------------------------------------------------

double algorithmic_prefactor_general(const std::vector<int>& subtree_sizes,
                                     const std::vector<int>& neighborhood_bounds, int d) {
  if (subtree_sizes.empty()) throw std::invalid_argument("at least one subtree size required");
  long total = 0;
  double prefactor = 0.0;
  for (int s : subtree_sizes) {
    if (s < 1) throw std::invalid_argument("subtree sizes must be positive");
    total += s;
    prefactor += cube(s);
  }
  if (total != d)
    throw std::invalid_argument("subtree sizes sum to " + std::to_string(total) + ", expected d = " +
                                std::to_string(d));
  for (int q : neighborhood_bounds) {
    if (q < 1) throw std::invalid_argument("neighbourhood bounds must be positive");
    prefactor += q;
  }
  return prefactor;
}

double algorithmic_prefactor(const ExternalKnowledge& k, int d) {
  if (k.neighborhood_bounds.empty()) throw std::invalid_argument("neighbourhood list is empty");
  if (k.neighborhood_bounds.size() != k.subtree_sizes.size())
    throw std::invalid_argument("subtree and neighbourhood lists must have equal length");
  return algorithmic_prefactor_general(k.subtree_sizes, k.neighborhood_bounds, d);
}

double algorithmic_bound_general(const std::vector<int>& subtree_sizes,
                                 const std::vector<int>& neighborhood_bounds,
                                 const ErasureBoundParams& p) {
  p.validate();
  const double prefactor = algorithmic_prefactor_general(subtree_sizes, neighborhood_bounds, p.d);
  const double e = std::exp(-hoeffding_rate(p.beta, p.effective_range()) * static_cast<double>(p.n));
  return clamp_probability(prefactor * e);
}

double algorithmic_bound(const ExternalKnowledge& k, const ErasureBoundParams& p) {
  p.validate();
  const double e = std::exp(-hoeffding_rate(p.beta, p.effective_range()) * static_cast<double>(p.n));
  const double prefactor = algorithmic_prefactor(k, p.d);
  return clamp_probability(prefactor * e);
}

// ---------------------------------------------------------------------------

SampleCount sample_complexity(double delta, const GeneralCaseParams& p) {
  check_delta(delta);
  p.validate();
  const double rate1 = lemma2_part1_rate(p.t, p.sigma_sq, sigma_L_squared(p.mu1, p.mu2, p.sigma_sq));
  const double rate2 = hoeffding_rate(p.rho_e - p.rho_eprime + p.t, p.effective_range());
  auto bound_at = [&](SampleCount n) {
    GeneralCaseParams q = p;
    q.n = n;
    return theorem1_bound(q);
  };
  const double hi = std::ceil(std::log(2.0 * cube(p.d) / delta) / std::min(rate1, rate2)) + 1.0;
  return smallest_n(bound_at, delta, static_cast<SampleCount>(std::max(1.0, hi)));
}

namespace {

SampleCount erasure_family_complexity(double delta, double prefactor, const ErasureBoundParams& p,
                                      auto&& bound_at) {
  const double rate = hoeffding_rate(p.beta, p.effective_range());
  SampleCount n = closed_form_n(prefactor, rate, delta);
  // the closed form is exact up to floating-point rounding at the boundary
  while (n > 0 && bound_at(n - 1) <= delta) --n;
  while (bound_at(n) > delta) ++n;
  return n;
}

}  // namespace

SampleCount sample_complexity(double delta, const ErasureBoundParams& p) {
  check_delta(delta);
  p.validate();
  auto bound_at = [&](SampleCount n) {
    ErasureBoundParams q = p;
    q.n = n;
    return theorem2_bound(q);
  };
  return erasure_family_complexity(delta, cube(p.d), p, bound_at);
}

SampleCount sample_complexity(double delta, const ExternalKnowledge& k, const ErasureBoundParams& p) {
  check_delta(delta);
  p.validate();
  auto bound_at = [&](SampleCount n) {
    ErasureBoundParams q = p;
    q.n = n;
    return algorithmic_bound(k, q);
  };
  return erasure_family_complexity(delta, algorithmic_prefactor(k, p.d), p, bound_at);
}

// ---------------------------------------------------------------------------

CrossoverGap tightest_crossover_gap(const WeightedTree& tree) {
  const int d = tree.node_count();
  if (d < 3) throw std::invalid_argument("a tree with fewer than 3 nodes has no non-edges");
  const auto adj = tree.topology().adjacency();
  const CorrelationMatrix cov = tree_to_covariance(tree);

  CrossoverGap best;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int a = 0; a < d; ++a) {
    // parents of a BFS rooted at a give every path a -> b
    std::vector<int> parent(d, -1);
    std::vector<int> queue{a};
    parent[a] = a;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (int v : adj[queue[h]])
        if (parent[v] < 0) {
          parent[v] = queue[h];
          queue.push_back(v);
        }
    for (int b = a + 1; b < d; ++b) {
      if (parent[b] == a) continue;  // edge
      for (int v = b; v != a; v = parent[v]) {
        const NodePair e(v, parent[v]);
        const double gap = tree.weight(e) - cov(a, b);
        if (gap < best_gap) {
          best_gap = gap;
          best = CrossoverGap{e, NodePair(a, b), tree.weight(e), cov(a, b)};
        }
      }
    }
  }
  return best;
}

}  // namespace ggm
