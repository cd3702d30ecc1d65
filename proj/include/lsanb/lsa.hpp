#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lsanb/sparse.hpp"

namespace lsanb {

// Truncated factors of a term-document matrix: S ~ U_f diag(sigma_f) V_f^T.
// Columns of u and v are orthonormal, sigma is strictly positive and
// non-increasing, and the largest-magnitude entry of every column of u is
// positive.
struct LsaSpace {
  Eigen::MatrixXd u;      // m x f
  Eigen::VectorXd sigma;  // f
  Eigen::MatrixXd v;      // n x f

  std::size_t rank() const noexcept { return static_cast<std::size_t>(sigma.size()); }
  std::size_t terms() const noexcept { return static_cast<std::size_t>(u.rows()); }

  // Leading `f` triplets.
  LsaSpace truncated(std::size_t f) const;
};

struct ProjectedVector {
  Eigen::VectorXd coords;
};

struct SvdOptions {
  int oversample = 10;
  int power_iters = 7;
  // Largest residual ||S v_i - sigma_i u_i|| allowed, relative to sigma_1.
  double tol = 1e-10;
  // Total subspace iterations, including the initial power_iters.
  int max_iters = 300;
};

struct SvdDiagnostics {
  int iterations = 0;
  double residual = 0.0;
};

// Randomized block subspace iteration: Gaussian sketch with `oversample`
// extra columns, `power_iters` orthonormalized power iterations, then
// Rayleigh-Ritz through a dense SVD of the projected problem. Iterates
// further until the residual meets `tol`. Triplets with
// sigma <= 1e-12 * sigma_1 are dropped, so the result can have rank < f.
LsaSpace truncated_svd(const SparseMatrix& s, std::size_t f, std::uint64_t seed,
                       const SvdOptions& options = {}, SvdDiagnostics* diag = nullptr);

Eigen::MatrixXd low_rank_reconstruct(const LsaSpace& space);

// x^T U_f Sigma_f^{-1}
ProjectedVector project(std::span<const SparseEntry> x, const LsaSpace& space);
// One row per column of `s`.
Eigen::MatrixXd project_columns(const SparseMatrix& s, const LsaSpace& space);

double cosine_similarity(const ProjectedVector& a, const ProjectedVector& b);

// Terms ordered by ||row_t(U_f Sigma_f)||_2 descending, ties by index.
std::vector<std::size_t> select_terms(const LsaSpace& space, std::size_t k);
std::vector<double> term_loadings(const LsaSpace& space);

// Smallest f whose leading sigma^2 mass reaches `energy` of `total_energy`.
// The first overload takes the total from `sigma` itself.
std::size_t choose_rank(std::span<const double> sigma, double energy);
std::size_t choose_rank(std::span<const double> sigma, double energy, double total_energy);

}  // namespace lsanb
