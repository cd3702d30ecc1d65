#include "lsanb/nb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lsanb/error.hpp"

namespace lsanb {

namespace {

constexpr double kTieTolerance = 1e-12;

void check_labels(std::span<const int> labels, std::size_t num_classes, std::size_t n_docs) {
  if (num_classes == 0) throw Error(ErrorKind::kInvalidConfig, "naive bayes: no classes");
  if (labels.size() != n_docs) {
    throw Error(ErrorKind::kLengthMismatch,
                "naive bayes: " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(n_docs) + " documents");
  }
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= num_classes) {
      throw Error(ErrorKind::kInvalidConfig, "naive bayes: label out of range");
    }
  }
}

std::vector<double> scores(std::vector<double> ll, const NbModel& model) {
  for (std::size_t j = 0; j < ll.size(); ++j) ll[j] += model.log_prior[j];
  return ll;
}

std::vector<double> softmax(const std::vector<double>& s) {
  const double mx = *std::max_element(s.begin(), s.end());
  std::vector<double> out(s.size());
  double total = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    out[j] = std::exp(s[j] - mx);
    total += out[j];
  }
  for (double& p : out) p /= total;
  return out;
}

Prediction predict_one(const std::vector<double>& s) {
  const int label = argmax_with_ties(s);
  return Prediction{label, softmax(s)[static_cast<std::size_t>(label)]};
}

}  // namespace

std::size_t NbModel::num_features() const noexcept {
  if (config.event_model == EventModel::kGaussian) {
    return static_cast<std::size_t>(gauss_mean.cols());
  }
  return static_cast<std::size_t>(log_word_prob.cols());
}

std::vector<double> class_prior(std::span<const int> labels, std::size_t num_classes,
                                PriorForm form) {
  check_labels(labels, num_classes, labels.size());
  std::vector<double> counts(num_classes, 0.0);
  for (int label : labels) counts[static_cast<std::size_t>(label)] += 1.0;
  const auto n_all = static_cast<double>(labels.size());
  const double denom =
      (form == PriorForm::kLaplace ? static_cast<double>(num_classes) : 1.0) + n_all;
  std::vector<double> out(num_classes);
  for (std::size_t j = 0; j < num_classes; ++j) out[j] = (1.0 + counts[j]) / denom;
  return out;
}

std::vector<double> word_prob_doc_count(std::span<const std::int64_t> docs_with_term,
                                        std::int64_t docs_in_class, std::int64_t docs_total) {
  const std::int64_t denom = docs_total + docs_in_class;
  if (denom <= 0) throw Error(ErrorKind::kEmptyTraining, "word probability: no training documents");
  std::vector<double> out(docs_with_term.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = static_cast<double>(1 + docs_with_term[k]) / static_cast<double>(denom);
  }
  return out;
}

std::vector<double> word_prob_word_count(std::span<const std::int64_t> term_count,
                                         std::int64_t words_in_class, std::int64_t words_total) {
  const std::int64_t denom = words_total + words_in_class;
  if (denom <= 0) throw Error(ErrorKind::kEmptyTraining, "word probability: no training words");
  std::vector<double> out(term_count.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = static_cast<double>(1 + term_count[k]) / static_cast<double>(denom);
  }
  return out;
}

double clamp_probability(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

NbModel train(const SparseMatrix& counts, std::span<const int> labels,
              std::vector<std::string> class_names, const NbConfig& config) {
  if (config.event_model == EventModel::kGaussian) {
    throw Error(ErrorKind::kInvalidConfig, "gaussian naive bayes trains on projected coordinates");
  }
  if (counts.kind() != MatrixKind::kCounts) {
    throw Error(ErrorKind::kInvalidConfig, "naive bayes trains on raw counts");
  }
  if (counts.cols() == 0) throw Error(ErrorKind::kEmptyTraining, "naive bayes: no training documents");
  const std::size_t l = class_names.size();
  const std::size_t v = counts.rows();
  check_labels(labels, l, counts.cols());

  NbTrainingStats st;
  st.num_classes = static_cast<std::int64_t>(l);
  st.docs_total = static_cast<std::int64_t>(counts.cols());
  st.docs_in_class.assign(l, 0);
  st.words_in_class.assign(l, 0);
  st.docs_with_term.assign(l, std::vector<std::int64_t>(v, 0));
  st.term_count.assign(l, std::vector<std::int64_t>(v, 0));
  for (std::size_t d = 0; d < counts.cols(); ++d) {
    const auto c = static_cast<std::size_t>(labels[d]);
    ++st.docs_in_class[c];
    for (const auto& e : counts.column(d)) {
      const auto n = static_cast<std::int64_t>(std::llround(e.value));
      st.docs_with_term[c][e.row] += 1;
      st.term_count[c][e.row] += n;
      st.words_in_class[c] += n;
      st.words_total += n;
    }
  }

  NbModel model;
  model.config = config;
  model.class_names = std::move(class_names);
  const auto prior = class_prior(labels, l, config.prior_form);
  model.log_prior.resize(l);
  for (std::size_t j = 0; j < l; ++j) model.log_prior[j] = std::log(prior[j]);

  const auto rows = static_cast<Eigen::Index>(l);
  const auto cols = static_cast<Eigen::Index>(v);
  model.log_word_prob.resize(rows, cols);
  const bool bernoulli = config.event_model == EventModel::kBernoulli;
  if (bernoulli) {
    model.log_word_absent.resize(rows, cols);
    model.absent_total.setZero(rows);
  }
  for (std::size_t j = 0; j < l; ++j) {
    const auto p = config.estimator == WordProbEstimator::kDocCount
                       ? word_prob_doc_count(st.docs_with_term[j], st.docs_in_class[j], st.docs_total)
                       : word_prob_word_count(st.term_count[j], st.words_in_class[j], st.words_total);
    const auto row = static_cast<Eigen::Index>(j);
    for (std::size_t k = 0; k < v; ++k) {
      const double pk = clamp_probability(p[k]);
      const auto col = static_cast<Eigen::Index>(k);
      model.log_word_prob(row, col) = std::log(pk);
      if (bernoulli) {
        model.log_word_absent(row, col) = std::log1p(-pk);
        model.absent_total(row) += model.log_word_absent(row, col);
      }
    }
  }
  model.stats = std::move(st);
  return model;
}

NbModel train(const Eigen::MatrixXd& coords, std::span<const int> labels,
              std::vector<std::string> class_names, const NbConfig& config) {
  if (config.event_model != EventModel::kGaussian) {
    throw Error(ErrorKind::kInvalidConfig, "count-based naive bayes trains on a count matrix");
  }
  if (coords.rows() == 0) throw Error(ErrorKind::kEmptyTraining, "naive bayes: no training documents");
  const std::size_t l = class_names.size();
  check_labels(labels, l, static_cast<std::size_t>(coords.rows()));

  NbModel model;
  model.config = config;
  model.class_names = std::move(class_names);
  model.stats.num_classes = static_cast<std::int64_t>(l);
  model.stats.docs_total = coords.rows();
  model.stats.docs_in_class.assign(l, 0);

  const auto rows = static_cast<Eigen::Index>(l);
  const Eigen::Index dims = coords.cols();
  model.gauss_mean.setZero(rows, dims);
  model.gauss_var.setZero(rows, dims);
  for (Eigen::Index d = 0; d < coords.rows(); ++d) {
    const int c = labels[static_cast<std::size_t>(d)];
    ++model.stats.docs_in_class[static_cast<std::size_t>(c)];
    model.gauss_mean.row(c) += coords.row(d);
  }
  for (Eigen::Index c = 0; c < rows; ++c) {
    const auto n = model.stats.docs_in_class[static_cast<std::size_t>(c)];
    if (n > 0) model.gauss_mean.row(c) /= static_cast<double>(n);
  }
  for (Eigen::Index d = 0; d < coords.rows(); ++d) {
    const int c = labels[static_cast<std::size_t>(d)];
    model.gauss_var.row(c) += (coords.row(d) - model.gauss_mean.row(c)).array().square().matrix();
  }
  for (Eigen::Index c = 0; c < rows; ++c) {
    const auto n = model.stats.docs_in_class[static_cast<std::size_t>(c)];
    if (n > 0) {
      model.gauss_var.row(c) /= static_cast<double>(n);
    } else {
      // No members: a unit-variance density around the origin.
      model.gauss_var.row(c).setOnes();
    }
    model.gauss_var.row(c) = model.gauss_var.row(c).cwiseMax(config.variance_floor);
  }

  const auto prior = class_prior(labels, l, config.prior_form);
  model.log_prior.resize(l);
  for (std::size_t j = 0; j < l; ++j) model.log_prior[j] = std::log(prior[j]);
  return model;
}

std::vector<double> log_likelihood(std::span<const SparseEntry> doc, const NbModel& model) {
  if (model.config.event_model == EventModel::kGaussian) {
    throw Error(ErrorKind::kDimensionMismatch, "gaussian model expects projected coordinates");
  }
  const auto v = static_cast<std::size_t>(model.log_word_prob.cols());
  for (const auto& e : doc) {
    if (e.row >= v) throw Error(ErrorKind::kDimensionMismatch, "document term index outside vocabulary");
  }
  const std::size_t l = model.num_classes();
  std::vector<double> out(l, 0.0);
  const bool bernoulli = model.config.event_model == EventModel::kBernoulli;
  for (std::size_t j = 0; j < l; ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    double acc = bernoulli ? model.absent_total(row) : 0.0;
    for (const auto& e : doc) {
      if (bernoulli) {
        acc += model.log_word_prob(row, e.row) - model.log_word_absent(row, e.row);
      } else {
        acc += e.value * model.log_word_prob(row, e.row);
      }
    }
    out[j] = acc;
  }
  return out;
}

std::vector<double> log_likelihood(const Eigen::VectorXd& coords, const NbModel& model) {
  if (model.config.event_model != EventModel::kGaussian) {
    throw Error(ErrorKind::kDimensionMismatch, "count-based model expects a count vector");
  }
  if (coords.size() != model.gauss_mean.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "coordinate dimension differs from model");
  }
  const double log_two_pi = std::log(2.0 * std::numbers::pi);
  std::vector<double> out(model.num_classes());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    double acc = 0.0;
    for (Eigen::Index d = 0; d < coords.size(); ++d) {
      const double var = model.gauss_var(row, d);
      const double diff = coords(d) - model.gauss_mean(row, d);
      acc -= 0.5 * (log_two_pi + std::log(var) + diff * diff / var);
    }
    out[j] = acc;
  }
  return out;
}

std::vector<double> posterior(std::span<const SparseEntry> doc, const NbModel& model) {
  return softmax(scores(log_likelihood(doc, model), model));
}

std::vector<double> posterior(const Eigen::VectorXd& coords, const NbModel& model) {
  return softmax(scores(log_likelihood(coords, model), model));
}

int argmax_with_ties(std::span<const double> s) {
  const double mx = *std::max_element(s.begin(), s.end());
  const double tol = kTieTolerance * std::max(1.0, std::abs(mx));
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] >= mx - tol) return static_cast<int>(j);
  }
  return 0;
}

int classify(std::span<const SparseEntry> doc, const NbModel& model) {
  return argmax_with_ties(scores(log_likelihood(doc, model), model));
}

int classify(const Eigen::VectorXd& coords, const NbModel& model) {
  return argmax_with_ties(scores(log_likelihood(coords, model), model));
}

std::vector<Prediction> predict_columns(const SparseMatrix& docs, const NbModel& model) {
  // Exceptions must not escape the parallel region.
  if (model.config.event_model == EventModel::kGaussian || docs.rows() > model.num_features()) {
    throw Error(ErrorKind::kDimensionMismatch, "predict: documents do not match the model vocabulary");
  }
  std::vector<Prediction> out(docs.cols());
  const auto n = static_cast<std::int64_t>(docs.cols());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t d = 0; d < n; ++d) {
    const auto idx = static_cast<std::size_t>(d);
    out[idx] = predict_one(scores(log_likelihood(docs.column(idx), model), model));
  }
  return out;
}

std::vector<Prediction> predict_rows(const Eigen::MatrixXd& coords, const NbModel& model) {
  if (model.config.event_model != EventModel::kGaussian ||
      static_cast<std::size_t>(coords.cols()) != model.num_features()) {
    throw Error(ErrorKind::kDimensionMismatch, "predict: coordinates do not match the model");
  }
  std::vector<Prediction> out(static_cast<std::size_t>(coords.rows()));
  const auto n = static_cast<std::int64_t>(coords.rows());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t d = 0; d < n; ++d) {
    const Eigen::VectorXd row = coords.row(d).transpose();
    out[static_cast<std::size_t>(d)] = predict_one(scores(log_likelihood(row, model), model));
  }
  return out;
}

}  // namespace lsanb
