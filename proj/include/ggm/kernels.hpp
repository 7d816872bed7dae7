#pragma once

#include <Eigen/Dense>

namespace ggm::kernels {

// Column cross products P(i, j) = sum_k x(k, i) * x(k, j) for i != j.
// The diagonal is left at zero. Both variants accumulate every pair in the
// same row order, so their outputs are bit-identical; the serial one is the
// reference the parallel one is tested against.

Eigen::MatrixXd column_products_serial(const Eigen::MatrixXd& x);

/// OpenMP over pairs. `threads` <= 0 uses the runtime default.
Eigen::MatrixXd column_products(const Eigen::MatrixXd& x, int threads = 0);

}  // namespace ggm::kernels
