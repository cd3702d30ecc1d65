#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "gen.hpp"
#include "jacobi_svd.hpp"
#include "lsanb/dense_svd.hpp"
#include "lsanb/error.hpp"
#include "lsanb/lsa.hpp"

using namespace lsanb;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no lsanb::Error thrown";
  return ErrorKind::kIo;
}

void expect_orthonormal(const Eigen::MatrixXd& q, double tol) {
  const Eigen::MatrixXd g = q.transpose() * q;
  EXPECT_LT((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff(), tol);
}

}  // namespace

TEST(DenseSvd, MatchesJacobiOracle) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index m = 1 + trial % 9;
    const Eigen::Index n = 1 + (trial * 5) % 11;
    const Eigen::MatrixXd a = gen::random_dense(rng, m, n);
    const auto got = dense_svd(a);
    const auto ref = oracle::jacobi_svd(a);
    ASSERT_EQ(got.sigma.size(), ref.sigma.size());
    for (Eigen::Index i = 0; i < got.sigma.size(); ++i)
      EXPECT_NEAR(got.sigma(i), ref.sigma(i), 1e-12 * ref.sigma(0));
    const Eigen::MatrixXd back = got.u * got.sigma.asDiagonal() * got.v.transpose();
    EXPECT_LT((back - a).cwiseAbs().maxCoeff(), 1e-12 * (1 + a.cwiseAbs().maxCoeff()));
    expect_orthonormal(got.v, 1e-12);
  }
}

TEST(TruncatedSvd, Identity) {
  const auto s = gen::from_dense(Eigen::MatrixXd::Identity(3, 3));
  const auto sp = truncated_svd(s, 3, 1);
  ASSERT_EQ(sp.rank(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(sp.sigma(i), 1.0, 1e-12);
}

TEST(TruncatedSvd, DiagonalRankOne) {
  Eigen::MatrixXd d(2, 2);
  d << 3, 0, 0, 2;
  const auto sp = truncated_svd(gen::from_dense(d), 1, 1);
  ASSERT_EQ(sp.rank(), 1u);
  EXPECT_NEAR(sp.sigma(0), 3.0, 1e-12);
  Eigen::MatrixXd want(2, 2);
  want << 3, 0, 0, 0;
  EXPECT_LT((low_rank_reconstruct(sp) - want).cwiseAbs().maxCoeff(), 1e-10);

  const auto full = truncated_svd(gen::from_dense(d), 2, 1);
  EXPECT_LT((low_rank_reconstruct(full) - d).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(TruncatedSvd, ZeroSingularValueDropped) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 2, 4;
  const auto sp = truncated_svd(gen::from_dense(a), 2, 9);
  ASSERT_EQ(sp.rank(), 1u);
  EXPECT_NEAR(sp.sigma(0), 5.0, 1e-12);
}

TEST(TruncatedSvd, Errors) {
  Eigen::MatrixXd d(2, 3);
  d << 1, 0, 0, 0, 1, 0;
  EXPECT_EQ(kind_of([&] { truncated_svd(gen::from_dense(d), 3, 1); }), ErrorKind::kRankTooLarge);
  EXPECT_EQ(kind_of([&] { truncated_svd(gen::from_dense(Eigen::MatrixXd::Zero(3, 3)), 1, 1); }),
            ErrorKind::kZeroMatrix);
  std::mt19937_64 rng(2);
  const auto s = gen::random_sparse(rng, 40, 30, 0.3);
  SvdOptions strict;
  strict.power_iters = 1;
  strict.max_iters = 1;
  strict.tol = 1e-15;
  try {
    truncated_svd(s, 3, 1, strict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNonConvergence);
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
}

TEST(TruncatedSvd, RankFiveReconstruction) {
  std::mt19937_64 rng(31);
  // nonnegative factors keep the product a valid term-document matrix
  const Eigen::MatrixXd a = gen::random_dense(rng, 20, 5).cwiseAbs() * gen::random_dense(rng, 5, 10).cwiseAbs();
  const auto sp = truncated_svd(gen::from_dense(a), 5, 4);
  EXPECT_LT((a - low_rank_reconstruct(sp)).norm(), 1e-8);
}

TEST(TruncatedSvd, PropertyInvariantsAgainstOracle) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t m = 5 + static_cast<std::size_t>(trial) * 3;
    const std::size_t n = 4 + static_cast<std::size_t>(trial * 7) % 30;
    const auto s = gen::random_sparse(rng, m, n, 0.35);
    if (s.nnz() == 0) continue;
    const std::size_t f = 1 + static_cast<std::size_t>(trial) % std::min(m, n);
    const auto sp = truncated_svd(s, f, static_cast<std::uint64_t>(trial));
    const auto ref = oracle::jacobi_svd(gen::to_dense(s));
    ASSERT_LE(sp.rank(), f);
    for (std::size_t i = 0; i < sp.rank(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      EXPECT_NEAR(sp.sigma(k), ref.sigma(k), 1e-9 * ref.sigma(0));
      EXPECT_GT(sp.sigma(k), 0.0);
      if (k > 0) EXPECT_LE(sp.sigma(k), sp.sigma(k - 1));
      Eigen::Index arg = 0;
      sp.u.col(k).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(sp.u(arg, k), 0.0);
    }
    expect_orthonormal(sp.u, 1e-8);
    expect_orthonormal(sp.v, 1e-8);
  }
}

TEST(TruncatedSvd, DeterministicForSeed) {
  std::mt19937_64 rng(41);
  const auto s = gen::random_sparse(rng, 50, 40, 0.2);
  const auto a = truncated_svd(s, 6, 99);
  const auto b = truncated_svd(s, 6, 99);
  EXPECT_TRUE(a.u == b.u);
  EXPECT_TRUE(a.sigma == b.sigma);
  EXPECT_TRUE(a.v == b.v);
}

TEST(Project, Examples) {
  Eigen::MatrixXd d(2, 2);
  d << 3, 0, 0, 2;
  const auto sp = truncated_svd(gen::from_dense(d), 2, 1);
  EXPECT_TRUE(project({}, sp).coords.isZero());
  const std::vector<SparseEntry> e1{{1, 1.0}};
  const auto p = project(e1, sp);
  for (Eigen::Index i = 0; i < 2; ++i) EXPECT_NEAR(p.coords(i), sp.u(1, i) / sp.sigma(i), 1e-15);
}

TEST(Project, TrainingColumnsGiveRowsOfV) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = gen::random_sparse(rng, 30, 18, 0.4);
    const auto sp = truncated_svd(s, 18, 5);
    const Eigen::MatrixXd rows = project_columns(s, sp);
    for (std::size_t j = 0; j < s.cols(); ++j) {
      const auto p = project(s.column(j), sp);
      const auto r = static_cast<Eigen::Index>(j);
      EXPECT_LT((p.coords.transpose() - sp.v.row(r)).cwiseAbs().maxCoeff(), 1e-8);
      EXPECT_LT((rows.row(r) - sp.v.row(r)).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(Cosine, Examples) {
  auto pv = [](double a, double b) { return ProjectedVector{Eigen::Vector2d(a, b)}; };
  EXPECT_NEAR(cosine_similarity(pv(1, 0), pv(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(cosine_similarity(pv(2, 0), pv(5, 0)), 1.0, 1e-15);
  EXPECT_NEAR(cosine_similarity(pv(1, 1), pv(1, 0)), 0.70711, 1e-5);
  EXPECT_EQ(kind_of([&] { cosine_similarity(pv(0, 0), pv(1, 0)); }), ErrorKind::kZeroVector);
  EXPECT_EQ(kind_of([&] { cosine_similarity(pv(1, 0), ProjectedVector{Eigen::Vector3d(1, 0, 0)}); }),
            ErrorKind::kDimensionMismatch);
}

TEST(SelectTerms, Examples) {
  Eigen::MatrixXd d(3, 2);
  d << 3, 0, 0, 2, 0, 0;
  const auto sp = truncated_svd(gen::from_dense(d), 2, 1);
  EXPECT_EQ(select_terms(sp, 1), (std::vector<std::size_t>{0}));
  EXPECT_EQ(select_terms(sp, 3), (std::vector<std::size_t>{0, 1, 2}));  // zero row last
  EXPECT_EQ(kind_of([&] { select_terms(sp, 4); }), ErrorKind::kKTooLarge);
  EXPECT_EQ(kind_of([&] { select_terms(sp, 0); }), ErrorKind::kKTooLarge);
}

TEST(SelectTerms, MatchesDenseOracleAndScaleInvariant) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd a = gen::random_dense(rng, 30, 10);
    Eigen::MatrixXd pos = a.cwiseAbs();
    const auto s = gen::from_dense(pos);
    const auto sp = truncated_svd(s, 10, 3);
    const auto ref = oracle::jacobi_svd(pos);
    const Eigen::MatrixXd us = ref.u * ref.sigma.asDiagonal();
    std::vector<double> score(30);
    for (Eigen::Index t = 0; t < 30; ++t) score[static_cast<std::size_t>(t)] = us.row(t).norm();
    std::vector<std::size_t> want(30);
    std::iota(want.begin(), want.end(), 0);
    std::stable_sort(want.begin(), want.end(),
                     [&](std::size_t x, std::size_t y) { return score[x] > score[y]; });
    want.resize(10);
    EXPECT_EQ(select_terms(sp, 10), want);

    const auto scaled = truncated_svd(gen::from_dense(pos * 7.5), 10, 3);
    EXPECT_EQ(select_terms(scaled, 10), want);
  }
}

TEST(ChooseRank, Examples) {
  const std::vector<double> ones{1, 1, 1, 1};
  EXPECT_EQ(choose_rank(ones, 0.5), 2u);
  const std::vector<double> big_small{10, 0.1};
  EXPECT_EQ(choose_rank(big_small, 0.9), 1u);
  const std::vector<double> three{3, 2, 1};
  EXPECT_EQ(choose_rank(three, 0.9), 2u);
  EXPECT_EQ(choose_rank(three, 0.9, 100.0), 3u);  // total beyond the probe: capped
  EXPECT_EQ(kind_of([&] { choose_rank(three, 0.0); }), ErrorKind::kInvalidConfig);
}
