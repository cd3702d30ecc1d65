#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lsanb/corpus.hpp"
#include "lsanb/sparse.hpp"

// Hand-rolled generators for the property tests.
namespace lsanb::gen {

inline SparseMatrix random_sparse(std::mt19937_64& rng, std::size_t m, std::size_t n,
                                  double density, MatrixKind kind = MatrixKind::kTfIdf) {
  std::bernoulli_distribution keep(density);
  std::uniform_real_distribution<double> val(0.1, 3.0);
  std::uniform_int_distribution<int> count(1, 5);
  SparseMatrix s(m, kind);
  std::vector<SparseEntry> col;
  for (std::size_t j = 0; j < n; ++j) {
    col.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (!keep(rng)) continue;
      const double v = kind == MatrixKind::kCounts ? count(rng) : val(rng);
      col.push_back({static_cast<std::uint32_t>(i), v});
    }
    s.push_column(col);
  }
  return s;
}

inline SparseMatrix from_dense(const Eigen::MatrixXd& a, MatrixKind kind = MatrixKind::kTfIdf) {
  SparseMatrix s(static_cast<std::size_t>(a.rows()), kind);
  std::vector<SparseEntry> col;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    col.clear();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != 0.0) col.push_back({static_cast<std::uint32_t>(i), a(i, j)});
    }
    s.push_column(col);
  }
  return s;
}

inline Eigen::MatrixXd to_dense(const SparseMatrix& s) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.rows()),
                                            static_cast<Eigen::Index>(s.cols()));
  for (std::size_t j = 0; j < s.cols(); ++j) {
    for (const auto& e : s.column(j)) a(e.row, static_cast<Eigen::Index>(j)) = e.value;
  }
  return a;
}

inline Eigen::MatrixXd random_dense(std::mt19937_64& rng, Eigen::Index m, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(m, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < m; ++i) a(i, j) = g(rng);
  return a;
}

// Classes with disjoint word pools "c<class>w<i>".
inline LabeledCorpus separable_corpus(std::mt19937_64& rng, int classes, int docs_per_class,
                                      int words_per_class = 8, int doc_len = 6) {
  std::vector<Document> docs;
  std::vector<int> labels;
  std::vector<std::string> names;
  std::uniform_int_distribution<int> pick(0, words_per_class - 1);
  for (int c = 0; c < classes; ++c) {
    names.push_back("class" + std::string(1, static_cast<char>('a' + c)));
    for (int d = 0; d < docs_per_class; ++d) {
      Document doc;
      doc.id = names.back() + "/doc" + std::to_string(d) + ".txt";
      for (int t = 0; t < doc_len; ++t) {
        doc.tokens.push_back("c" + std::string(1, static_cast<char>('a' + c)) + "w" +
                             std::string(1, static_cast<char>('a' + pick(rng))));
      }
      for (const auto& tok : doc.tokens) doc.raw_text += tok + " ";
      docs.push_back(std::move(doc));
      labels.push_back(c);
    }
  }
  return LabeledCorpus(std::move(docs), std::move(labels), std::move(names));
}

}  // namespace lsanb::gen
