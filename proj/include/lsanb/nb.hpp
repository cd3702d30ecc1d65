#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lsanb/sparse.hpp"

namespace lsanb {

enum class EventModel { kMultinomial, kBernoulli, kGaussian };

enum class WordProbEstimator {
  kDocCount,   // (1 + n_{c,k}) / (n_all + n_c), documents containing the word
  kWordCount,  // (1 + N_{c,k}) / (N_all + N_c), word occurrences
};

enum class PriorForm {
  kLaplace,  // (1 + n_c) / (l + n_all)
  kLiteral,  // (1 + n_c) / (1 + n_all), not normalized across classes
};

struct NbConfig {
  EventModel event_model = EventModel::kMultinomial;
  WordProbEstimator estimator = WordProbEstimator::kDocCount;
  PriorForm prior_form = PriorForm::kLaplace;
  double variance_floor = 1e-9;  // gaussian only
};

inline constexpr double kProbClamp = 1e-12;

// Raw training counts behind the estimates. Per-term tables are
// classes x terms; empty for the gaussian model.
struct NbTrainingStats {
  std::vector<std::int64_t> docs_in_class;  // n_j
  std::int64_t docs_total = 0;              // n_all
  std::int64_t num_classes = 0;             // l
  std::vector<std::vector<std::int64_t>> docs_with_term;  // n_{c_j,k}
  std::vector<std::int64_t> words_in_class;               // N_j
  std::vector<std::vector<std::int64_t>> term_count;      // N_{c_j,k}
  std::int64_t words_total = 0;                           // N_all
};

struct NbModel {
  NbConfig config;
  std::vector<std::string> class_names;
  std::vector<double> log_prior;
  Eigen::MatrixXd log_word_prob;    // classes x terms
  Eigen::MatrixXd log_word_absent;  // classes x terms, bernoulli only
  Eigen::VectorXd absent_total;     // per class sum of log_word_absent
  Eigen::MatrixXd gauss_mean;       // classes x dims, gaussian only
  Eigen::MatrixXd gauss_var;        // classes x dims, gaussian only
  NbTrainingStats stats;

  std::size_t num_classes() const noexcept { return class_names.size(); }
  // Vocabulary size, or latent dimension for the gaussian model.
  std::size_t num_features() const noexcept;
};

std::vector<double> class_prior(std::span<const int> labels, std::size_t num_classes,
                                PriorForm form = PriorForm::kLaplace);

std::vector<double> word_prob_doc_count(std::span<const std::int64_t> docs_with_term,
                                        std::int64_t docs_in_class, std::int64_t docs_total);
std::vector<double> word_prob_word_count(std::span<const std::int64_t> term_count,
                                         std::int64_t words_in_class, std::int64_t words_total);

// Clamps into [kProbClamp, 1 - kProbClamp].
double clamp_probability(double p);

// Count-based models (multinomial, bernoulli). `counts` columns are documents.
NbModel train(const SparseMatrix& counts, std::span<const int> labels,
              std::vector<std::string> class_names, const NbConfig& config);

// Gaussian model over rows of `coords` (one document per row).
NbModel train(const Eigen::MatrixXd& coords, std::span<const int> labels,
              std::vector<std::string> class_names, const NbConfig& config);

std::vector<double> log_likelihood(std::span<const SparseEntry> doc, const NbModel& model);
std::vector<double> log_likelihood(const Eigen::VectorXd& coords, const NbModel& model);

std::vector<double> posterior(std::span<const SparseEntry> doc, const NbModel& model);
std::vector<double> posterior(const Eigen::VectorXd& coords, const NbModel& model);

int classify(std::span<const SparseEntry> doc, const NbModel& model);
int classify(const Eigen::VectorXd& coords, const NbModel& model);

// Index of the largest score; scores within rounding of the maximum count as
// tied and the lowest index wins.
int argmax_with_ties(std::span<const double> scores);

struct Prediction {
  int label = 0;
  double probability = 0.0;
};

// One prediction per column / row; parallel over documents.
std::vector<Prediction> predict_columns(const SparseMatrix& docs, const NbModel& model);
std::vector<Prediction> predict_rows(const Eigen::MatrixXd& coords, const NbModel& model);

}  // namespace lsanb
