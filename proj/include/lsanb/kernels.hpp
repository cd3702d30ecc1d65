#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lsanb/sparse.hpp"

// Data-parallel inner loops. The default versions use OpenMP; the `serial`
// namespace holds the single-threaded references they are tested against.
// Each output element is accumulated in the same order in both versions, so
// results are bit-identical regardless of thread count.
namespace lsanb::kernels {

// y = S * x, x is n x k, y is m x k.
void spmm(const SparseMatrix& s, const Eigen::MatrixXd& x, Eigen::MatrixXd& y);

// y = S^T * x, x is m x k, y is n x k.
void spmm_t(const SparseMatrix& s, const Eigen::MatrixXd& x, Eigen::MatrixXd& y);

// Cosine of every column of S with `ref`. Zero columns give 0.
std::vector<double> column_cosines(const SparseMatrix& s, const Eigen::VectorXd& ref);

namespace serial {
void spmm(const SparseMatrix& s, const Eigen::MatrixXd& x, Eigen::MatrixXd& y);
void spmm_t(const SparseMatrix& s, const Eigen::MatrixXd& x, Eigen::MatrixXd& y);
std::vector<double> column_cosines(const SparseMatrix& s, const Eigen::VectorXd& ref);
}  // namespace serial

}  // namespace lsanb::kernels
