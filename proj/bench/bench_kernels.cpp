// Serial reference vs OpenMP kernels on a term-document sized matrix.
#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "lsanb/kernels.hpp"

namespace {

using lsanb::SparseEntry;
using lsanb::SparseMatrix;

const SparseMatrix& matrix() {
  static const SparseMatrix s = [] {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::uint32_t> row(0, 2999);
    std::uniform_real_distribution<double> val(0.5, 4.0);
    SparseMatrix m(3000, lsanb::MatrixKind::kTfIdf);
    std::vector<SparseEntry> col;
    for (int j = 0; j < 1500; ++j) {
      std::vector<std::uint32_t> rows(40);
      for (auto& r : rows) r = row(rng);
      std::sort(rows.begin(), rows.end());
      rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
      col.clear();
      for (auto r : rows) col.push_back({r, val(rng)});
      m.push_column(col);
    }
    return m;
  }();
  return s;
}

Eigen::MatrixXd block(Eigen::Index rows, Eigen::Index cols) {
  return Eigen::MatrixXd::Random(rows, cols);
}

template <auto Fn>
void run_spmm(benchmark::State& state) {
  const auto& s = matrix();
  const Eigen::MatrixXd x = block(static_cast<Eigen::Index>(s.cols()), state.range(0));
  Eigen::MatrixXd y;
  for (auto _ : state) {
    Fn(s, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

template <auto Fn>
void run_spmm_t(benchmark::State& state) {
  const auto& s = matrix();
  const Eigen::MatrixXd x = block(static_cast<Eigen::Index>(s.rows()), state.range(0));
  Eigen::MatrixXd y;
  for (auto _ : state) {
    Fn(s, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

template <auto Fn>
void run_cosines(benchmark::State& state) {
  const auto& s = matrix();
  const Eigen::VectorXd ref = Eigen::VectorXd::Random(static_cast<Eigen::Index>(s.rows()));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(s, ref));
}

}  // namespace

BENCHMARK(run_spmm<lsanb::kernels::serial::spmm>)->Name("spmm/serial")->Arg(16)->Arg(310);
BENCHMARK(run_spmm<lsanb::kernels::spmm>)->Name("spmm/omp")->Arg(16)->Arg(310);
BENCHMARK(run_spmm_t<lsanb::kernels::serial::spmm_t>)->Name("spmm_t/serial")->Arg(16)->Arg(310);
BENCHMARK(run_spmm_t<lsanb::kernels::spmm_t>)->Name("spmm_t/omp")->Arg(16)->Arg(310);
BENCHMARK(run_cosines<lsanb::kernels::serial::column_cosines>)->Name("column_cosines/serial");
BENCHMARK(run_cosines<lsanb::kernels::column_cosines>)->Name("column_cosines/omp");

BENCHMARK_MAIN();
