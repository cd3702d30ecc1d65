#include "lsanb/kernels.hpp"

#include <cmath>
#include <cstdint>

#include "lsanb/error.hpp"

namespace lsanb::kernels {

namespace {

void check_spmm(const SparseMatrix& s, const Eigen::MatrixXd& x) {
  if (static_cast<std::size_t>(x.rows()) != s.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "spmm: inner dimensions differ");
  }
}

void check_spmm_t(const SparseMatrix& s, const Eigen::MatrixXd& x) {
  if (static_cast<std::size_t>(x.rows()) != s.rows()) {
    throw Error(ErrorKind::kDimensionMismatch, "spmm_t: inner dimensions differ");
  }
}

inline void spmm_column(const SparseMatrix& s, const Eigen::MatrixXd& x,
                        Eigen::MatrixXd& y, Eigen::Index k) {
  auto out = y.col(k);
  out.setZero();
  for (std::size_t j = 0; j < s.cols(); ++j) {
    const double xj = x(static_cast<Eigen::Index>(j), k);
    if (xj == 0.0) continue;
    for (const auto& e : s.column(j)) out(e.row) += e.value * xj;
  }
}

inline void spmm_t_row(const SparseMatrix& s, const Eigen::MatrixXd& x,
                       Eigen::MatrixXd& y, std::size_t j) {
  const auto col = s.column(j);
  const auto row = static_cast<Eigen::Index>(j);
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    double acc = 0.0;
    for (const auto& e : col) acc += e.value * x(e.row, k);
    y(row, k) = acc;
  }
}

inline double column_cosine(const SparseMatrix& s, const Eigen::VectorXd& ref,
                            double ref_norm, std::size_t j) {
  double dot = 0.0;
  double nn = 0.0;
  for (const auto& e : s.column(j)) {
    dot += e.value * ref(e.row);
    nn += e.value * e.value;
  }
  if (nn == 0.0 || ref_norm == 0.0) return 0.0;
  return dot / (std::sqrt(nn) * ref_norm);
}

}  // namespace

void spmm(const SparseMatrix& s, const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
  check_spmm(s, x);
  y.resize(static_cast<Eigen::Index>(s.rows()), x.cols());
  const Eigen::Index k_cols = x.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index k = 0; k < k_cols; ++k) spmm_column(s, x, y, k);
}

void spmm_t(const SparseMatrix& s, const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
  check_spmm_t(s, x);
  y.resize(static_cast<Eigen::Index>(s.cols()), x.cols());
  const auto n = static_cast<std::int64_t>(s.cols());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t j = 0; j < n; ++j) spmm_t_row(s, x, y, static_cast<std::size_t>(j));
}

std::vector<double> column_cosines(const SparseMatrix& s, const Eigen::VectorXd& ref) {
  const double ref_norm = ref.norm();
  std::vector<double> out(s.cols());
  const auto n = static_cast<std::int64_t>(s.cols());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t j = 0; j < n; ++j) {
    out[static_cast<std::size_t>(j)] = column_cosine(s, ref, ref_norm, static_cast<std::size_t>(j));
  }
  return out;
}

namespace serial {

void spmm(const SparseMatrix& s, const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
  check_spmm(s, x);
  y.resize(static_cast<Eigen::Index>(s.rows()), x.cols());
  for (Eigen::Index k = 0; k < x.cols(); ++k) spmm_column(s, x, y, k);
}

void spmm_t(const SparseMatrix& s, const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
  check_spmm_t(s, x);
  y.resize(static_cast<Eigen::Index>(s.cols()), x.cols());
  for (std::size_t j = 0; j < s.cols(); ++j) spmm_t_row(s, x, y, j);
}

std::vector<double> column_cosines(const SparseMatrix& s, const Eigen::VectorXd& ref) {
  const double ref_norm = ref.norm();
  std::vector<double> out(s.cols());
  for (std::size_t j = 0; j < s.cols(); ++j) out[j] = column_cosine(s, ref, ref_norm, j);
  return out;
}

}  // namespace serial

}  // namespace lsanb::kernels
