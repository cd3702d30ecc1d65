#pragma once

#include <Eigen/Dense>

namespace lsanb {

struct DenseSvd {
  Eigen::MatrixXd u;      // m x p, p = min(m, n)
  Eigen::VectorXd sigma;  // p, descending, nonnegative
  Eigen::MatrixXd v;      // n x p
};

// Thin SVD by Householder bidiagonalization followed by implicit-shift QR
// on the bidiagonal (Golub-Kahan-Reinsch). Throws NonConvergence if a
// singular value fails to converge in 75 sweeps.
DenseSvd dense_svd(const Eigen::MatrixXd& a);

}  // namespace lsanb
