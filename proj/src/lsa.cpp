#include "lsanb/lsa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "lsanb/dense_svd.hpp"
#include "lsanb/error.hpp"
#include "lsanb/kernels.hpp"
#include "lsanb/rng.hpp"

namespace lsanb {

namespace {

constexpr double kDropRatio = 1e-12;

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

void fix_signs(LsaSpace& space) {
  for (Eigen::Index k = 0; k < space.u.cols(); ++k) {
    Eigen::Index arg = 0;
    space.u.col(k).cwiseAbs().maxCoeff(&arg);
    if (space.u(arg, k) < 0.0) {
      space.u.col(k) = -space.u.col(k);
      space.v.col(k) = -space.v.col(k);
    }
  }
}

}  // namespace

LsaSpace LsaSpace::truncated(std::size_t f) const {
  const auto k = static_cast<Eigen::Index>(std::min(f, rank()));
  return LsaSpace{u.leftCols(k), sigma.head(k), v.leftCols(k)};
}

LsaSpace truncated_svd(const SparseMatrix& s, std::size_t f, std::uint64_t seed,
                       const SvdOptions& options, SvdDiagnostics* diag) {
  const std::size_t m = s.rows();
  const std::size_t n = s.cols();
  if (f == 0) throw Error(ErrorKind::kInvalidConfig, "truncated_svd: rank must be at least 1");
  if (f > std::min(m, n)) {
    throw Error(ErrorKind::kRankTooLarge,
                "rank " + std::to_string(f) + " exceeds min(m, n) = " +
                    std::to_string(std::min(m, n)));
  }
  if (s.nnz() == 0) throw Error(ErrorKind::kZeroMatrix, "truncated_svd: matrix is zero");

  const auto width = static_cast<Eigen::Index>(
      std::min<std::size_t>(f + static_cast<std::size_t>(std::max(options.oversample, 0)),
                            std::min(m, n)));
  const auto rows = static_cast<Eigen::Index>(m);
  const auto cols = static_cast<Eigen::Index>(n);
  const auto fi = static_cast<Eigen::Index>(f);

  auto engine = SeedTree(seed).child("svd.sketch").engine();
  std::normal_distribution<double> normal;
  Eigen::MatrixXd omega(cols, width);
  for (Eigen::Index c = 0; c < width; ++c) {
    for (Eigen::Index r = 0; r < cols; ++r) omega(r, c) = normal(engine);
  }

  Eigen::MatrixXd y;
  Eigen::MatrixXd z;
  kernels::spmm(s, omega, y);
  Eigen::MatrixXd q = orthonormalize(y);

  auto power_step = [&] {
    kernels::spmm_t(s, q, z);
    z = orthonormalize(z);
    kernels::spmm(s, z, y);
    q = orthonormalize(y);
  };

  const int warmup = std::max(options.power_iters, 0);
  for (int it = 0; it < warmup; ++it) power_step();

  const int max_iters = std::max(options.max_iters, warmup);
  int iterations = warmup;
  LsaSpace space;
  double residual = 0.0;
  for (;;) {
    // Rayleigh-Ritz on B = Q^T S. With B^T = S^T Q = Q2 R and R = Ur Sigma Vr^T,
    // B = Vr Sigma (Q2 Ur)^T.
    kernels::spmm_t(s, q, z);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    const Eigen::MatrixXd q2 = qr.householderQ() * Eigen::MatrixXd::Identity(z.rows(), z.cols());
    const Eigen::MatrixXd r = qr.matrixQR().topRows(z.cols()).triangularView<Eigen::Upper>();
    const DenseSvd small = dense_svd(r);
    space.u = q * small.v.leftCols(fi);
    space.sigma = small.sigma.head(fi);
    space.v = q2 * small.u.leftCols(fi);

    // ||S v_i - sigma_i u_i||; S^T u_i = sigma_i v_i holds by construction.
    Eigen::MatrixXd sv;
    kernels::spmm(s, space.v, sv);
    const double sigma1 = space.sigma(0);
    residual = 0.0;
    if (sigma1 > 0.0) {
      for (Eigen::Index k = 0; k < fi; ++k) {
        const double res = (sv.col(k) - space.sigma(k) * space.u.col(k)).norm() / sigma1;
        residual = std::max(residual, res);
      }
    }
    if (residual <= options.tol || width == std::min(rows, cols)) break;
    if (iterations >= max_iters) {
      throw Error(ErrorKind::kNonConvergence,
                  "truncated_svd: residual " + std::to_string(residual) + " after " +
                      std::to_string(iterations) + " iterations (tolerance " +
                      std::to_string(options.tol) + ")");
    }
    // q2 already spans S^T q; finish the power step from it.
    kernels::spmm(s, q2, y);
    q = orthonormalize(y);
    ++iterations;
  }

  // Drop numerically zero triplets.
  const double floor = kDropRatio * space.sigma(0);
  Eigen::Index keep = 0;
  while (keep < fi && space.sigma(keep) > floor) ++keep;
  if (keep == 0) throw Error(ErrorKind::kZeroMatrix, "truncated_svd: matrix is numerically zero");
  if (keep < fi) space = space.truncated(static_cast<std::size_t>(keep));

  fix_signs(space);
  if (diag != nullptr) *diag = SvdDiagnostics{iterations, residual};
  return space;
}

Eigen::MatrixXd low_rank_reconstruct(const LsaSpace& space) {
  return space.u * space.sigma.asDiagonal() * space.v.transpose();
}

ProjectedVector project(std::span<const SparseEntry> x, const LsaSpace& space) {
  Eigen::VectorXd coords = Eigen::VectorXd::Zero(space.sigma.size());
  for (const auto& e : x) {
    if (e.row >= space.terms()) {
      throw Error(ErrorKind::kDimensionMismatch, "project: term index out of range");
    }
    coords += e.value * space.u.row(e.row).transpose();
  }
  coords.array() /= space.sigma.array();
  return ProjectedVector{std::move(coords)};
}

Eigen::MatrixXd project_columns(const SparseMatrix& s, const LsaSpace& space) {
  if (s.rows() != space.terms()) {
    throw Error(ErrorKind::kDimensionMismatch, "project_columns: term count differs from space");
  }
  Eigen::MatrixXd out;
  kernels::spmm_t(s, space.u, out);
  out *= space.sigma.cwiseInverse().asDiagonal();
  return out;
}

double cosine_similarity(const ProjectedVector& a, const ProjectedVector& b) {
  if (a.coords.size() != b.coords.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "cosine_similarity: ranks differ");
  }
  const double na = a.coords.norm();
  const double nb = b.coords.norm();
  if (na == 0.0 || nb == 0.0) throw Error(ErrorKind::kZeroVector, "cosine_similarity: zero vector");
  return std::clamp(a.coords.dot(b.coords) / (na * nb), -1.0, 1.0);
}

std::vector<double> term_loadings(const LsaSpace& space) {
  const Eigen::MatrixXd scaled = space.u * space.sigma.asDiagonal();
  std::vector<double> out(static_cast<std::size_t>(scaled.rows()));
  for (Eigen::Index t = 0; t < scaled.rows(); ++t) out[static_cast<std::size_t>(t)] = scaled.row(t).norm();
  return out;
}

std::vector<std::size_t> select_terms(const LsaSpace& space, std::size_t k) {
  const std::size_t m = space.terms();
  if (k == 0 || k > m) {
    throw Error(ErrorKind::kKTooLarge,
                "select_terms: k = " + std::to_string(k) + " not in [1, " + std::to_string(m) + "]");
  }
  const std::vector<double> score = term_loadings(space);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  order.resize(k);
  return order;
}

std::size_t choose_rank(std::span<const double> sigma, double energy, double total_energy) {
  if (!(energy > 0.0 && energy <= 1.0)) {
    throw Error(ErrorKind::kInvalidConfig, "choose_rank: energy must be in (0, 1]");
  }
  if (sigma.empty()) throw Error(ErrorKind::kInvalidConfig, "choose_rank: no singular values");
  const double target = energy * total_energy;
  double acc = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    acc += sigma[i] * sigma[i];
    if (acc >= target) return i + 1;
  }
  return sigma.size();
}

std::size_t choose_rank(std::span<const double> sigma, double energy) {
  double total = 0.0;
  for (double x : sigma) total += x * x;
  return choose_rank(sigma, energy, total);
}

}  // namespace lsanb
