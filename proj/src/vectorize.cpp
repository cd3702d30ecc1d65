#include "lsanb/vectorize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "lsanb/error.hpp"
#include "lsanb/kernels.hpp"

namespace lsanb {

namespace {

constexpr std::size_t kMinOutlierClassSize = 3;

void require_kind(const SparseMatrix& m, MatrixKind kind, const char* op) {
  if (m.kind() != kind) {
    throw Error(ErrorKind::kInvalidConfig,
                std::string(op) + ": unexpected matrix kind");
  }
}

}  // namespace

double TfIdfModel::idf(std::size_t term) const {
  const std::size_t df = term < doc_freq.size() ? doc_freq[term] : 0;
  if (df == 0 || n_train == 0) return 0.0;
  const auto n = static_cast<double>(n_train);
  const auto d = static_cast<double>(df);
  switch (form) {
    case IdfForm::kLog:
      return std::log(n / d);
    case IdfForm::kSmoothLog:
      return std::log((1.0 + n) / (1.0 + d)) + 1.0;
  }
  return 0.0;
}

SparseMatrix count_matrix(const std::vector<TokenList>& docs, const Vocabulary& vocab) {
  SparseMatrix out(vocab.size(), MatrixKind::kCounts);
  std::map<std::uint32_t, double> counts;
  std::vector<SparseEntry> column;
  for (const auto& tokens : docs) {
    counts.clear();
    for (const auto& t : tokens) {
      if (auto k = vocab.find(t)) counts[static_cast<std::uint32_t>(*k)] += 1.0;
    }
    column.clear();
    for (const auto& [row, value] : counts) column.push_back({row, value});
    out.push_column(column);
  }
  return out;
}

SparseMatrix count_matrix(const LabeledCorpus& corpus, const Vocabulary& vocab) {
  std::vector<TokenList> docs;
  docs.reserve(corpus.size());
  for (const auto& d : corpus.documents()) docs.push_back(d.tokens);
  return count_matrix(docs, vocab);
}

TfIdfModel fit_tfidf(const SparseMatrix& counts, IdfForm form) {
  require_kind(counts, MatrixKind::kCounts, "fit_tfidf");
  TfIdfModel model;
  model.doc_freq.assign(counts.rows(), 0);
  model.n_train = counts.cols();
  model.form = form;
  for (std::size_t j = 0; j < counts.cols(); ++j) {
    for (const auto& e : counts.column(j)) ++model.doc_freq[e.row];
  }
  return model;
}

SparseMatrix apply_tfidf(const SparseMatrix& counts, const TfIdfModel& model) {
  require_kind(counts, MatrixKind::kCounts, "apply_tfidf");
  if (counts.rows() != model.doc_freq.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "apply_tfidf: vocabulary size differs from model");
  }
  std::vector<double> idf(counts.rows());
  for (std::size_t t = 0; t < idf.size(); ++t) idf[t] = model.idf(t);

  SparseMatrix out(counts.rows(), MatrixKind::kTfIdf);
  std::vector<SparseEntry> column;
  for (std::size_t j = 0; j < counts.cols(); ++j) {
    column.clear();
    for (const auto& e : counts.column(j)) {
      const double w = e.value * idf[e.row];
      if (w > 0.0) column.push_back({e.row, w});
    }
    out.push_column(column);
  }
  return out;
}

std::vector<std::size_t> detect_outliers(const SparseMatrix& tfidf,
                                         const std::vector<int>& labels,
                                         double threshold_sigma) {
  require_kind(tfidf, MatrixKind::kTfIdf, "detect_outliers");
  if (labels.size() != tfidf.cols()) {
    throw Error(ErrorKind::kLengthMismatch, "detect_outliers: labels do not match columns");
  }
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t j = 0; j < labels.size(); ++j) members[labels[j]].push_back(j);

  std::vector<std::size_t> flagged;
  for (const auto& [label, cols] : members) {
    if (cols.size() < kMinOutlierClassSize) continue;
    const SparseMatrix sub = tfidf.select_columns(cols);

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(tfidf.rows()));
    for (std::size_t j = 0; j < sub.cols(); ++j) {
      double nn = 0.0;
      for (const auto& e : sub.column(j)) nn += e.value * e.value;
      if (nn == 0.0) continue;
      const double inv = 1.0 / std::sqrt(nn);
      for (const auto& e : sub.column(j)) centroid(e.row) += e.value * inv;
    }
    centroid /= static_cast<double>(sub.cols());

    const std::vector<double> sims = kernels::column_cosines(sub, centroid);
    double mean = 0.0;
    for (double s : sims) mean += s;
    mean /= static_cast<double>(sims.size());
    double var = 0.0;
    for (double s : sims) var += (s - mean) * (s - mean);
    const double sd = std::sqrt(var / static_cast<double>(sims.size()));
    // Rounding slack so that exactly tied similarities never flag.
    const double cutoff = mean - threshold_sigma * sd - 1e-12;
    for (std::size_t i = 0; i < sims.size(); ++i) {
      if (sims[i] < cutoff) flagged.push_back(cols[i]);
    }
  }
  std::sort(flagged.begin(), flagged.end());
  return flagged;
}

}  // namespace lsanb
