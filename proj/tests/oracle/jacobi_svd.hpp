#pragma once

#include <Eigen/Dense>

namespace lsanb::oracle {

struct JacobiSvd {
  Eigen::MatrixXd u;      // m x p
  Eigen::VectorXd sigma;  // p, descending
  Eigen::MatrixXd v;      // n x p
};

// One-sided (Hestenes) Jacobi: rotate column pairs of A until all are
// mutually orthogonal; the column norms are then the singular values.
// Slow and simple on purpose.
JacobiSvd jacobi_svd(const Eigen::MatrixXd& a);

}  // namespace lsanb::oracle
