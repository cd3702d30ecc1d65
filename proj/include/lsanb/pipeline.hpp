#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsanb/corpus.hpp"
#include "lsanb/eval.hpp"
#include "lsanb/lsa.hpp"
#include "lsanb/nb.hpp"
#include "lsanb/vectorize.hpp"

namespace lsanb {

enum class LsaMode {
  kOff,         // plain Naive Bayes on counts
  kTermSelect,  // NB on counts restricted to the top-loading LSA terms
  kGaussian,    // gaussian NB on projected LSA coordinates
};

struct RankRule {
  enum class Kind { kFixed, kEnergy } kind = Kind::kEnergy;
  std::size_t fixed = 0;
  double energy = 0.9;
  std::size_t cap = 300;
};

struct PipelineConfig {
  std::string stopword_path;  // empty: built-in list
  double outlier_sigma = 2.0;
  bool outlier_on_test = false;
  LsaMode lsa_mode = LsaMode::kTermSelect;
  RankRule lsa_rank;
  std::size_t select_k = 0;  // 0: min(m, 1000)
  IdfForm idf = IdfForm::kLog;
  NbConfig nb;
  SvdOptions svd{.oversample = 10, .power_iters = 7, .tol = 2e-2, .max_iters = 100};
  UndefinedMetric undefined = UndefinedMetric::kRaise;
  std::uint64_t seed = 0;

  // Throws InvalidConfig on out-of-range fields.
  void validate() const;
};

inline constexpr std::size_t kDefaultSelectK = 1000;

nlohmann::ordered_json to_json(const PipelineConfig& config);
PipelineConfig pipeline_config_from_json(const nlohmann::ordered_json& j);
std::string config_digest(const PipelineConfig& config);

std::string to_string(LsaMode mode);
LsaMode parse_lsa_mode(const std::string& s);
std::string to_string(EventModel m);
EventModel parse_event_model(const std::string& s);
std::string to_string(WordProbEstimator e);
WordProbEstimator parse_estimator(const std::string& s);
std::string to_string(PriorForm f);
PriorForm parse_prior_form(const std::string& s);
std::string to_string(IdfForm f);
IdfForm parse_idf_form(const std::string& s);

// Everything needed to classify new text.
struct TrainedModel {
  PipelineConfig config;
  std::vector<std::string> class_names;
  Vocabulary vocab;
  TfIdfModel tfidf;                       // fitted after outlier removal
  std::vector<std::string> removed_outliers;  // training document ids
  std::optional<LsaSpace> space;          // u and sigma only; v is not kept
  std::vector<std::size_t> selected_terms;  // ascending, term_select only
  NbModel nb;
};

using StageTimings = std::vector<std::pair<std::string, double>>;  // seconds

TrainedModel train_pipeline(const LabeledCorpus& train, const PipelineConfig& config,
                            StageTimings* timings = nullptr);

std::vector<Prediction> predict(const TrainedModel& model, const std::vector<TokenList>& docs);

struct ModelEvaluation {
  EvalReport report;
  std::vector<int> predictions;        // over the evaluated test documents
  std::vector<std::size_t> evaluated;  // indices into the test corpus
};

// Classifies `test` (class names must be a subset of the model's; labels are
// remapped by name) and evaluates against its labels. Honors
// outlier_on_test.
ModelEvaluation evaluate_model(const TrainedModel& model, const LabeledCorpus& test,
                               StageTimings* timings = nullptr,
                               const std::vector<std::size_t>* fixed_split = nullptr);

struct RunResult {
  EvalReport report;
  std::optional<EvalReport> baseline_report;
  StageTimings timings;
  std::string model_digest;
  std::vector<int> predictions;  // over the evaluated test documents
  std::vector<std::size_t> evaluated;  // indices into the test corpus
  std::size_t lsa_rank = 0;
};

// Trains on `train`, evaluates on `test`. With `with_baseline` and an LSA
// mode, also trains and evaluates plain NB on the same split.
RunResult run(const LabeledCorpus& train, const LabeledCorpus& test, const PipelineConfig& config,
              bool with_baseline = false);

// `config` with LSA switched off (gaussian NB falls back to multinomial).
PipelineConfig baseline_config(const PipelineConfig& config);

struct SyntheticSpec {
  std::size_t n_classes = 6;
  // Either docs_per_class (split 80/20 per class) or explicit train/test sizes.
  std::vector<std::size_t> docs_per_class;
  std::vector<std::size_t> train_per_class;
  std::vector<std::size_t> test_per_class;
  std::size_t vocab_per_class = 150;
  std::size_t shared_noise_vocab = 600;
  std::size_t doc_length = 60;
  double noise_fraction = 0.4;
  std::uint64_t seed = 42;
  std::vector<std::string> class_names;  // default class_1..class_n

  void validate() const;
  // Table 2/3 shaped parameters.
  static SyntheticSpec table_shape(double noise_fraction, std::uint64_t seed);
};

struct SyntheticCorpus {
  LabeledCorpus train;
  LabeledCorpus test;
};

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec);

}  // namespace lsanb
