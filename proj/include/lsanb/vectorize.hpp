#pragma once

#include <cstddef>
#include <vector>

#include "lsanb/corpus.hpp"
#include "lsanb/sparse.hpp"

namespace lsanb {

enum class IdfForm {
  kLog,        // ln(n / df)
  kSmoothLog,  // ln((1 + n) / (1 + df)) + 1
};

struct TfIdfModel {
  std::vector<std::size_t> doc_freq;  // per term; 0 for terms unseen in training
  std::size_t n_train = 0;
  IdfForm form = IdfForm::kLog;

  double idf(std::size_t term) const;
};

// Term occurrence counts, one column per document. Tokens outside `vocab`
// are skipped.
SparseMatrix count_matrix(const LabeledCorpus& corpus, const Vocabulary& vocab);
SparseMatrix count_matrix(const std::vector<TokenList>& docs, const Vocabulary& vocab);

TfIdfModel fit_tfidf(const SparseMatrix& counts, IdfForm form = IdfForm::kLog);

// tf * idf; zero weights (df == n_train under kLog, or unseen terms) are not
// stored.
SparseMatrix apply_tfidf(const SparseMatrix& counts, const TfIdfModel& model);

// Per class, cosine of each member with the centroid of the class's
// unit-normalized columns. Members more than `threshold_sigma` population
// standard deviations below the class mean similarity are flagged. Classes
// with fewer than 3 members flag nothing. Result is sorted ascending.
std::vector<std::size_t> detect_outliers(const SparseMatrix& tfidf,
                                         const std::vector<int>& labels,
                                         double threshold_sigma);

}  // namespace lsanb
