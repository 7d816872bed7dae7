#include "ggm/kernels.hpp"

#include <vector>

#include <omp.h>

namespace ggm::kernels {

namespace {

inline double dot(const double* a, const double* b, Eigen::Index n) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

Eigen::MatrixXd column_products_serial(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      p(i, j) = dot(x.col(i).data(), x.col(j).data(), n);
      p(j, i) = p(i, j);
    }
  return p;
}

Eigen::MatrixXd column_products(const Eigen::MatrixXd& x, int threads) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(d * (d - 1) / 2);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) pairs.emplace_back(i, j);

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
  const auto count = static_cast<long>(pairs.size());
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt) if (count > 1 && n * count > 4096)
  for (long q = 0; q < count; ++q) {
    const auto [i, j] = pairs[q];
    const double s = dot(x.col(i).data(), x.col(j).data(), n);
    p(i, j) = s;
    p(j, i) = s;
  }
  return p;
}

}  // namespace ggm::kernels
