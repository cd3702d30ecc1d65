#include "lsanb/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

#include "lsanb/error.hpp"
#include "lsanb/model_io.hpp"
#include "lsanb/rng.hpp"

namespace lsanb {

namespace {

template <typename Fn>
auto timed_stage(const char* name, StageTimings* timings, Fn&& fn) -> decltype(fn()) {
  const auto start = std::chrono::steady_clock::now();
  auto record = [&] {
    if (timings == nullptr) return;
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    timings->emplace_back(name, dt.count());
  };
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record();
    } else {
      auto result = fn();
      record();
      return result;
    }
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(name);
  }
}

LabeledCorpus filtered(const LabeledCorpus& corpus, const StopwordSet& stopwords) {
  std::vector<Document> docs;
  docs.reserve(corpus.size());
  for (const auto& d : corpus.documents()) {
    docs.push_back(Document{d.id, {}, remove_stopwords(d.tokens, stopwords)});
  }
  return LabeledCorpus(std::move(docs), corpus.labels(), corpus.class_names());
}

std::vector<TokenList> token_lists(const LabeledCorpus& corpus) {
  std::vector<TokenList> out;
  out.reserve(corpus.size());
  for (const auto& d : corpus.documents()) out.push_back(d.tokens);
  return out;
}

StopwordSet configured_stopwords(const PipelineConfig& config) {
  if (config.stopword_path.empty()) return default_stopwords();
  return load_stopwords(config.stopword_path);
}

template <typename Enum>
Enum parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, Enum>> table,
                const char* what) {
  for (const auto& [name, value] : table) {
    if (s == name) return value;
  }
  throw Error(ErrorKind::kInvalidConfig, std::string("unknown ") + what + ": " + s);
}

}  // namespace

std::string to_string(LsaMode mode) {
  switch (mode) {
    case LsaMode::kOff: return "off";
    case LsaMode::kTermSelect: return "term_select";
    case LsaMode::kGaussian: return "gaussian";
  }
  return "?";
}
LsaMode parse_lsa_mode(const std::string& s) {
  return parse_enum<LsaMode>(
      s, {{"off", LsaMode::kOff}, {"term_select", LsaMode::kTermSelect}, {"gaussian", LsaMode::kGaussian}},
      "lsa mode");
}
std::string to_string(EventModel m) {
  switch (m) {
    case EventModel::kMultinomial: return "multinomial";
    case EventModel::kBernoulli: return "bernoulli";
    case EventModel::kGaussian: return "gaussian";
  }
  return "?";
}
EventModel parse_event_model(const std::string& s) {
  return parse_enum<EventModel>(s,
                                {{"multinomial", EventModel::kMultinomial},
                                 {"bernoulli", EventModel::kBernoulli},
                                 {"gaussian", EventModel::kGaussian}},
                                "event model");
}
std::string to_string(WordProbEstimator e) {
  return e == WordProbEstimator::kDocCount ? "doc_count" : "word_count";
}
WordProbEstimator parse_estimator(const std::string& s) {
  return parse_enum<WordProbEstimator>(
      s, {{"doc_count", WordProbEstimator::kDocCount}, {"word_count", WordProbEstimator::kWordCount}},
      "word probability estimator");
}
std::string to_string(PriorForm f) { return f == PriorForm::kLaplace ? "laplace" : "literal"; }
PriorForm parse_prior_form(const std::string& s) {
  return parse_enum<PriorForm>(s, {{"laplace", PriorForm::kLaplace}, {"literal", PriorForm::kLiteral}},
                               "prior form");
}
std::string to_string(IdfForm f) { return f == IdfForm::kLog ? "log" : "smooth_log"; }
IdfForm parse_idf_form(const std::string& s) {
  return parse_enum<IdfForm>(s, {{"log", IdfForm::kLog}, {"smooth_log", IdfForm::kSmoothLog}}, "idf form");
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kInvalidConfig, msg); };
  if (!(outlier_sigma >= 0.0) || !std::isfinite(outlier_sigma)) fail("outlier_sigma must be >= 0");
  if (lsa_rank.kind == RankRule::Kind::kFixed && lsa_rank.fixed == 0) fail("fixed lsa rank must be >= 1");
  if (lsa_rank.kind == RankRule::Kind::kEnergy && !(lsa_rank.energy > 0.0 && lsa_rank.energy <= 1.0)) {
    fail("lsa energy must be in (0, 1]");
  }
  if (lsa_rank.cap == 0) fail("lsa rank cap must be >= 1");
  if (!(nb.variance_floor > 0.0)) fail("variance_floor must be > 0");
  if (svd.oversample < 0 || svd.power_iters < 0 || svd.max_iters < 1) fail("bad svd iteration settings");
  if (!(svd.tol > 0.0)) fail("svd tolerance must be > 0");
  const bool gaussian_nb = nb.event_model == EventModel::kGaussian;
  if (gaussian_nb != (lsa_mode == LsaMode::kGaussian)) {
    fail("the gaussian event model is used exactly when lsa_mode is gaussian");
  }
}

nlohmann::ordered_json to_json(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["stopword_path"] = c.stopword_path;
  j["outlier_sigma"] = c.outlier_sigma;
  j["outlier_on_test"] = c.outlier_on_test;
  j["lsa_mode"] = to_string(c.lsa_mode);
  j["lsa_rank"] = c.lsa_rank.kind == RankRule::Kind::kFixed ? "fixed" : "energy";
  j["lsa_fixed_rank"] = c.lsa_rank.fixed;
  j["lsa_energy"] = c.lsa_rank.energy;
  j["lsa_rank_cap"] = c.lsa_rank.cap;
  j["select_k"] = c.select_k;
  j["idf"] = to_string(c.idf);
  j["event_model"] = to_string(c.nb.event_model);
  j["estimator"] = to_string(c.nb.estimator);
  j["prior_form"] = to_string(c.nb.prior_form);
  j["variance_floor"] = c.nb.variance_floor;
  j["svd_oversample"] = c.svd.oversample;
  j["svd_power_iters"] = c.svd.power_iters;
  j["svd_tol"] = c.svd.tol;
  j["svd_max_iters"] = c.svd.max_iters;
  j["zero_undefined"] = c.undefined == UndefinedMetric::kZeroFill;
  j["seed"] = c.seed;
  return j;
}

PipelineConfig pipeline_config_from_json(const nlohmann::ordered_json& j) {
  try {
    PipelineConfig c;
    c.stopword_path = j.at("stopword_path").get<std::string>();
    c.outlier_sigma = j.at("outlier_sigma").get<double>();
    c.outlier_on_test = j.at("outlier_on_test").get<bool>();
    c.lsa_mode = parse_lsa_mode(j.at("lsa_mode").get<std::string>());
    const auto rank = j.at("lsa_rank").get<std::string>();
    if (rank != "fixed" && rank != "energy") throw Error(ErrorKind::kInvalidConfig, "bad lsa_rank: " + rank);
    c.lsa_rank.kind = rank == "fixed" ? RankRule::Kind::kFixed : RankRule::Kind::kEnergy;
    c.lsa_rank.fixed = j.at("lsa_fixed_rank").get<std::size_t>();
    c.lsa_rank.energy = j.at("lsa_energy").get<double>();
    c.lsa_rank.cap = j.at("lsa_rank_cap").get<std::size_t>();
    c.select_k = j.at("select_k").get<std::size_t>();
    c.idf = parse_idf_form(j.at("idf").get<std::string>());
    c.nb.event_model = parse_event_model(j.at("event_model").get<std::string>());
    c.nb.estimator = parse_estimator(j.at("estimator").get<std::string>());
    c.nb.prior_form = parse_prior_form(j.at("prior_form").get<std::string>());
    c.nb.variance_floor = j.at("variance_floor").get<double>();
    c.svd.oversample = j.at("svd_oversample").get<int>();
    c.svd.power_iters = j.at("svd_power_iters").get<int>();
    c.svd.tol = j.at("svd_tol").get<double>();
    c.svd.max_iters = j.at("svd_max_iters").get<int>();
    c.undefined = j.at("zero_undefined").get<bool>() ? UndefinedMetric::kZeroFill : UndefinedMetric::kRaise;
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("bad pipeline config: ") + e.what());
  }
}

std::string config_digest(const PipelineConfig& config) { return sha256_hex(to_json(config).dump()); }

TrainedModel train_pipeline(const LabeledCorpus& train, const PipelineConfig& config,
                            StageTimings* timings) {
  timed_stage("config", nullptr, [&] { config.validate(); });
  if (train.empty()) throw Error(ErrorKind::kEmptyTraining, "no training documents").with_stage("preprocess");

  TrainedModel model;
  model.config = config;
  model.class_names = train.class_names();

  const LabeledCorpus docs = timed_stage("preprocess", timings, [&] {
    return filtered(train, configured_stopwords(config));
  });

  std::vector<int> labels = train.labels();
  SparseMatrix counts = timed_stage("vectorize", timings, [&] {
    model.vocab = build_vocabulary(docs);
    return count_matrix(docs, model.vocab);
  });

  SparseMatrix weights = timed_stage("outliers", timings, [&] {
    if (config.outlier_sigma > 0.0) {
      const TfIdfModel all_docs = fit_tfidf(counts, config.idf);
      const auto flagged = detect_outliers(apply_tfidf(counts, all_docs), labels, config.outlier_sigma);
      if (!flagged.empty()) {
        std::vector<bool> drop(counts.cols(), false);
        for (std::size_t j : flagged) {
          drop[j] = true;
          model.removed_outliers.push_back(train.documents()[j].id);
        }
        std::vector<std::size_t> keep;
        std::vector<int> kept_labels;
        for (std::size_t j = 0; j < counts.cols(); ++j) {
          if (drop[j]) continue;
          keep.push_back(j);
          kept_labels.push_back(labels[j]);
        }
        counts = counts.select_columns(keep);
        labels = std::move(kept_labels);
      }
    }
    model.tfidf = fit_tfidf(counts, config.idf);
    return apply_tfidf(counts, model.tfidf);
  });

  if (config.lsa_mode != LsaMode::kOff) {
    timed_stage("lsa", timings, [&] {
      const std::size_t limit = std::min(weights.rows(), weights.cols());
      const std::uint64_t svd_seed = SeedTree(config.seed).child("lsa").seed();
      if (config.lsa_rank.kind == RankRule::Kind::kFixed) {
        model.space = truncated_svd(weights, config.lsa_rank.fixed, svd_seed, config.svd);
      } else {
        const std::size_t probe = std::min(config.lsa_rank.cap, limit);
        LsaSpace space = truncated_svd(weights, probe, svd_seed, config.svd);
        const std::vector<double> sigma(space.sigma.data(), space.sigma.data() + space.sigma.size());
        const std::size_t f = choose_rank(sigma, config.lsa_rank.energy, weights.frobenius_norm_sq());
        model.space = space.truncated(f);
      }
      // v is only needed to fit; keep the model small.
      model.space->v.resize(0, static_cast<Eigen::Index>(model.space->rank()));
      if (config.lsa_mode == LsaMode::kTermSelect) {
        const std::size_t m = weights.rows();
        const std::size_t k = config.select_k == 0 ? std::min(m, kDefaultSelectK) : config.select_k;
        model.selected_terms = select_terms(*model.space, k);
        std::sort(model.selected_terms.begin(), model.selected_terms.end());
      }
    });
  }

  timed_stage("nb_train", timings, [&] {
    switch (config.lsa_mode) {
      case LsaMode::kOff:
        model.nb = lsanb::train(counts, labels, model.class_names, config.nb);
        break;
      case LsaMode::kTermSelect:
        model.nb = lsanb::train(counts.select_rows(model.selected_terms), labels, model.class_names,
                                   config.nb);
        break;
      case LsaMode::kGaussian:
        model.nb = lsanb::train(project_columns(weights, *model.space), labels, model.class_names, config.nb);
        break;
    }
  });
  return model;
}

std::vector<Prediction> predict(const TrainedModel& model, const std::vector<TokenList>& docs) {
  const SparseMatrix counts = count_matrix(docs, model.vocab);
  switch (model.config.lsa_mode) {
    case LsaMode::kOff:
      return predict_columns(counts, model.nb);
    case LsaMode::kTermSelect:
      return predict_columns(counts.select_rows(model.selected_terms), model.nb);
    case LsaMode::kGaussian:
      return predict_rows(project_columns(apply_tfidf(counts, model.tfidf), *model.space), model.nb);
  }
  return {};
}

ModelEvaluation evaluate_model(const TrainedModel& model, const LabeledCorpus& test,
                               StageTimings* timings, const std::vector<std::size_t>* fixed_split) {
  std::vector<int> actual_all;
  actual_all.reserve(test.size());
  for (int label : test.labels()) {
    const std::string& name = test.class_names()[static_cast<std::size_t>(label)];
    auto it = std::find(model.class_names.begin(), model.class_names.end(), name);
    if (it == model.class_names.end()) {
      throw Error(ErrorKind::kInvalidConfig, "test class '" + name + "' is unknown to the model")
          .with_stage("evaluate");
    }
    actual_all.push_back(static_cast<int>(it - model.class_names.begin()));
  }
  const std::vector<TokenList> docs = token_lists(test);

  ModelEvaluation out;
  if (fixed_split != nullptr) {
    out.evaluated = *fixed_split;
  } else {
    timed_stage("outliers_test", timings, [&] {
      std::vector<bool> drop(test.size(), false);
      if (model.config.outlier_on_test && model.config.outlier_sigma > 0.0) {
        const SparseMatrix w = apply_tfidf(count_matrix(docs, model.vocab), model.tfidf);
        for (std::size_t j : detect_outliers(w, actual_all, model.config.outlier_sigma)) drop[j] = true;
      }
      for (std::size_t j = 0; j < test.size(); ++j) {
        if (!drop[j]) out.evaluated.push_back(j);
      }
    });
  }

  std::vector<TokenList> eval_docs;
  std::vector<int> actual;
  for (std::size_t j : out.evaluated) {
    eval_docs.push_back(docs[j]);
    actual.push_back(actual_all[j]);
  }
  out.predictions = timed_stage("classify", timings, [&] {
    std::vector<int> labels;
    for (const auto& p : predict(model, eval_docs)) labels.push_back(p.label);
    return labels;
  });
  out.report = timed_stage("evaluate", timings, [&] {
    return evaluate(out.predictions, actual, model.class_names, model.config.undefined);
  });
  return out;
}

RunResult run(const LabeledCorpus& train, const LabeledCorpus& test, const PipelineConfig& config,
              bool with_baseline) {
  RunResult result;
  const TrainedModel model = train_pipeline(train, config, &result.timings);
  if (model.space) result.lsa_rank = model.space->rank();
  result.model_digest = model_digest(model);

  const LabeledCorpus test_filtered = timed_stage("preprocess_test", &result.timings, [&] {
    return filtered(test, configured_stopwords(config));
  });
  ModelEvaluation eval = evaluate_model(model, test_filtered, &result.timings);
  result.report = std::move(eval.report);
  result.predictions = std::move(eval.predictions);
  result.evaluated = std::move(eval.evaluated);

  if (with_baseline && config.lsa_mode != LsaMode::kOff) {
    StageTimings baseline_timings;
    const TrainedModel baseline = train_pipeline(train, baseline_config(config), &baseline_timings);
    ModelEvaluation b = evaluate_model(baseline, test_filtered, &baseline_timings, &result.evaluated);
    result.baseline_report = std::move(b.report);
    for (auto& [name, seconds] : baseline_timings) result.timings.emplace_back("baseline_" + name, seconds);
  }
  return result;
}

PipelineConfig baseline_config(const PipelineConfig& config) {
  PipelineConfig plain = config;
  plain.lsa_mode = LsaMode::kOff;
  if (plain.nb.event_model == EventModel::kGaussian) plain.nb.event_model = EventModel::kMultinomial;
  return plain;
}

}  // namespace lsanb
