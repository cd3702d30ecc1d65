#include "lsanb/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lsanb/error.hpp"
#include "lsanb/model_io.hpp"

namespace lsanb::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Raised for argument problems detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

struct PipelineFlags {
  std::string config_path;
  std::optional<std::string> stopwords;
  std::optional<double> outlier_sigma;
  std::optional<bool> outlier_on_test;
  std::optional<std::string> lsa_mode;
  std::optional<std::string> lsa_rank;
  std::optional<std::size_t> lsa_rank_cap;
  std::optional<std::size_t> select_k;
  std::optional<std::string> idf;
  std::optional<std::string> event_model;
  std::optional<std::string> estimator;
  std::optional<std::string> prior_form;
  std::optional<double> svd_tol;
  std::optional<int> svd_max_iters;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path, "key = value pipeline config file");
    app.add_option("--stopwords", stopwords, "stopword file, one word per line");
    app.add_option("--outlier-sigma", outlier_sigma, "outlier threshold in std devs (0 disables)");
    app.add_option("--outlier-on-test", outlier_on_test, "also drop outliers from test data");
    app.add_option("--lsa-mode", lsa_mode, "off | term_select | gaussian");
    app.add_option("--lsa-rank", lsa_rank, "fixed:N or energy:X");
    app.add_option("--lsa-rank-cap", lsa_rank_cap, "upper bound for energy-chosen rank");
    app.add_option("--select-k", select_k, "terms kept by term_select (0: min(m, 1000))");
    app.add_option("--idf", idf, "log | smooth_log");
    app.add_option("--event-model", event_model, "multinomial | bernoulli | gaussian");
    app.add_option("--estimator", estimator, "doc_count | word_count");
    app.add_option("--prior-form", prior_form, "laplace | literal");
    app.add_option("--svd-tol", svd_tol, "relative residual tolerance of the truncated SVD");
    app.add_option("--svd-max-iters", svd_max_iters, "subspace iteration cap");
    app.add_option("--seed", seed, "seed for every stochastic step");
  }

  PipelineConfig resolve() const {
    PipelineConfig c = config_path.empty() ? PipelineConfig{} : load_config_file(config_path);
    if (stopwords) c.stopword_path = *stopwords;
    if (outlier_sigma) c.outlier_sigma = *outlier_sigma;
    if (outlier_on_test) c.outlier_on_test = *outlier_on_test;
    if (lsa_mode) {
      c.lsa_mode = parse_lsa_mode(*lsa_mode);
      if (c.lsa_mode == LsaMode::kGaussian && !event_model) c.nb.event_model = EventModel::kGaussian;
      if (c.lsa_mode != LsaMode::kGaussian && c.nb.event_model == EventModel::kGaussian && !event_model) {
        c.nb.event_model = EventModel::kMultinomial;
      }
    }
    if (lsa_rank) {
      const auto colon = lsa_rank->find(':');
      const std::string kind = lsa_rank->substr(0, colon);
      const std::string value = colon == std::string::npos ? "" : lsa_rank->substr(colon + 1);
      try {
        if (kind == "fixed") {
          c.lsa_rank.kind = RankRule::Kind::kFixed;
          c.lsa_rank.fixed = std::stoul(value);
        } else if (kind == "energy") {
          c.lsa_rank.kind = RankRule::Kind::kEnergy;
          c.lsa_rank.energy = std::stod(value);
        } else {
          throw UsageError("--lsa-rank must be fixed:N or energy:X");
        }
      } catch (const std::logic_error&) {
        throw UsageError("--lsa-rank must be fixed:N or energy:X");
      }
    }
    if (lsa_rank_cap) c.lsa_rank.cap = *lsa_rank_cap;
    if (select_k) c.select_k = *select_k;
    if (idf) c.idf = parse_idf_form(*idf);
    if (event_model) c.nb.event_model = parse_event_model(*event_model);
    if (estimator) c.nb.estimator = parse_estimator(*estimator);
    if (prior_form) c.nb.prior_form = parse_prior_form(*prior_form);
    if (svd_tol) c.svd.tol = *svd_tol;
    if (svd_max_iters) c.svd.max_iters = *svd_max_iters;
    if (seed) c.seed = *seed;
    c.validate();
    return c;
  }
};

LabeledCorpus load_stage(const fs::path& dir) {
  try {
    // Stopwords are applied later by the pipeline's preprocess stage.
    return load_corpus(dir, StopwordSet{});
  } catch (const Error& e) {
    throw e.with_stage("load");
  }
}

json timings_json(const StageTimings& timings) {
  json j = json::object();
  for (const auto& [name, seconds] : timings) j[name] = seconds;
  return j;
}

void print_timings(std::ostream& out, const StageTimings& timings) {
  for (const auto& [name, seconds] : timings) out << fmt::format("  {:<26} {:.3f}s\n", name, seconds);
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  f << content;
  if (!f) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

// --- train -----------------------------------------------------------------

struct TrainArgs {
  std::string train_dir;
  std::string out_model;
  PipelineFlags flags;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const PipelineConfig config = a.flags.resolve();
  const LabeledCorpus corpus = load_stage(a.train_dir);
  StageTimings timings;
  const TrainedModel model = train_pipeline(corpus, config, &timings);
  save_model(model, a.out_model);

  out << "stage timings\n";
  print_timings(out, timings);
  out << fmt::format("documents        {} ({} classes)\n", corpus.size(), corpus.num_classes());
  out << fmt::format("outliers removed {}\n", model.removed_outliers.size());
  out << fmt::format("vocabulary       {} terms\n", model.vocab.size());
  out << fmt::format("lsa mode         {}\n", to_string(config.lsa_mode));
  if (model.space) out << fmt::format("lsa rank         {}\n", model.space->rank());
  if (!model.selected_terms.empty()) out << fmt::format("selected terms   {}\n", model.selected_terms.size());
  out << fmt::format("model            {}\n", a.out_model);
  out << fmt::format("digest           {}\n", model_digest(model));
  return kExitOk;
}

// --- predict ---------------------------------------------------------------

struct PredictArgs {
  std::string model;
  std::string input;
};

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  const TrainedModel model = load_model(a.model);
  std::vector<std::pair<std::string, fs::path>> files;
  const fs::path input(a.input);
  std::error_code ec;
  if (fs::is_directory(input, ec)) {
    for (fs::recursive_directory_iterator it(input, ec), end; !ec && it != end; it.increment(ec)) {
      if (it->is_regular_file() && it->path().extension() == ".txt") {
        files.emplace_back(fs::relative(it->path(), input).generic_string(), it->path());
      }
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(input, ec)) {
    files.emplace_back(input.filename().string(), input);
  } else {
    throw Error(ErrorKind::kIo, "input not found: " + a.input);
  }
  if (files.empty()) throw Error(ErrorKind::kEmptyCorpus, "no .txt documents under " + a.input);

  std::vector<std::string> ids;
  std::vector<TokenList> docs;
  for (const auto& [id, path] : files) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    if (f) ss << f.rdbuf();
    const std::string text = ss.str();
    if (!f || f.bad()) {
      err << "skipping unreadable file: " << path.string() << "\n";
      continue;
    }
    if (!is_valid_utf8(text)) {
      err << "skipping non-UTF-8 file: " << path.string() << "\n";
      continue;
    }
    ids.push_back(id);
    docs.push_back(tokenize(text));
  }
  if (docs.empty()) throw Error(ErrorKind::kIo, "no input document could be read");

  const auto preds = predict(model, docs);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    out << ids[i] << '\t' << model.class_names[static_cast<std::size_t>(preds[i].label)] << '\t'
        << fmt::format("{:.6f}", preds[i].probability) << '\n';
  }
  return kExitOk;
}

// --- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::string model;
  std::string test_dir;
  std::string report_out;
  std::string train_dir;
  bool baseline = false;
  bool zero_undefined = false;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  if (a.baseline && a.train_dir.empty()) throw UsageError("--baseline requires --train-dir");
  TrainedModel model = load_model(a.model);
  if (a.zero_undefined) model.config.undefined = UndefinedMetric::kZeroFill;

  const LabeledCorpus test = load_stage(a.test_dir);
  StageTimings timings;
  const ModelEvaluation main = evaluate_model(model, test, &timings);

  std::optional<EvalReport> baseline;
  if (a.baseline) {
    const LabeledCorpus train = load_stage(a.train_dir);
    StageTimings bt;
    const TrainedModel plain = train_pipeline(train, baseline_config(model.config), &bt);
    baseline = evaluate_model(plain, test, &bt, &main.evaluated).report;
    for (auto& [name, seconds] : bt) timings.emplace_back("baseline_" + name, seconds);
  }

  const std::string method = model.config.lsa_mode == LsaMode::kOff ? "NB" : "LSA+NB";
  std::string text = render_text(main.report, fmt::format("method: {} ({} documents)", method,
                                                          main.evaluated.size()));
  json j;
  j["method"] = method;
  j["documents"] = main.evaluated.size();
  json body = to_json(main.report);
  for (auto& [k, v] : body.items()) j[k] = v;
  j["timings"] = timings_json(timings);
  j["config_digest"] = config_digest(model.config);
  if (baseline) {
    text += "\n" + render_text(*baseline, "method: NB (baseline)");
    text += "\n" + render_comparison(main.report, *baseline);
    j["baseline"] = to_json(*baseline);
    j["delta"] = {{"precision", main.report.macro_precision - baseline->macro_precision},
                  {"recall", main.report.macro_recall - baseline->macro_recall}};
  }

  fs::path prefix(a.report_out);
  if (prefix.extension() == ".json" || prefix.extension() == ".txt") prefix.replace_extension();
  write_file(fs::path(prefix.string() + ".txt"), text);
  write_file(fs::path(prefix.string() + ".json"), j.dump(2) + "\n");

  out << text;
  out << "stage timings\n";
  print_timings(out, timings);
  return kExitOk;
}

// --- generate --------------------------------------------------------------

struct GenerateArgs {
  std::string out_dir;
  std::string preset;
  std::optional<std::size_t> n_classes;
  std::vector<std::size_t> docs_per_class;
  std::vector<std::size_t> train_per_class;
  std::vector<std::size_t> test_per_class;
  std::vector<std::string> class_names;
  std::optional<std::size_t> vocab_per_class;
  std::optional<std::size_t> noise_vocab;
  std::optional<std::size_t> doc_length;
  std::optional<double> noise_fraction;
  std::uint64_t seed = 42;
};

SyntheticSpec generator_spec(const GenerateArgs& a) {
  SyntheticSpec spec;
  if (a.preset == "table") {
    spec = SyntheticSpec::table_shape(spec.noise_fraction, a.seed);
  } else if (!a.preset.empty()) {
    throw UsageError("unknown preset: " + a.preset);
  }
  if (!a.docs_per_class.empty() || !a.train_per_class.empty() || !a.test_per_class.empty()) {
    spec.docs_per_class = a.docs_per_class;
    spec.train_per_class = a.train_per_class;
    spec.test_per_class = a.test_per_class;
    spec.n_classes = std::max({a.docs_per_class.size(), a.train_per_class.size(), a.test_per_class.size()});
    if (a.class_names.empty()) spec.class_names.clear();
  }
  if (a.n_classes) spec.n_classes = *a.n_classes;
  if (!a.class_names.empty()) spec.class_names = a.class_names;
  if (a.vocab_per_class) spec.vocab_per_class = *a.vocab_per_class;
  if (a.noise_vocab) spec.shared_noise_vocab = *a.noise_vocab;
  if (a.doc_length) spec.doc_length = *a.doc_length;
  if (a.noise_fraction) spec.noise_fraction = *a.noise_fraction;
  spec.seed = a.seed;
  if (spec.docs_per_class.empty() && spec.train_per_class.empty()) {
    throw UsageError("give --preset table, --docs-per-class, or --train-per-class/--test-per-class");
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return spec;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const SyntheticSpec spec = generator_spec(a);
  const SyntheticCorpus corpus = generate_synthetic_corpus(spec);
  const fs::path root(a.out_dir);
  for (const auto& [name, part] : {std::pair{"train", &corpus.train}, std::pair{"test", &corpus.test}}) {
    for (const auto& doc : part->documents()) write_file(root / name / doc.id, doc.raw_text);
  }
  out << fmt::format("wrote {} training and {} test documents under {}\n", corpus.train.size(),
                     corpus.test.size(), root.string());
  return kExitOk;
}

// --- inspect ---------------------------------------------------------------

struct InspectArgs {
  std::string model;
  std::size_t top = 8;
  std::size_t dims = 10;
};

int cmd_inspect(const InspectArgs& a, std::ostream& out) {
  const TrainedModel model = load_model(a.model);
  out << fmt::format("format version   {}\n", kModelFormatVersion);
  out << fmt::format("digest           {}\n", model_digest(model));
  out << fmt::format("config digest    {}\n", config_digest(model.config));
  out << "config           " << to_json(model.config).dump() << "\n";
  out << fmt::format("classes          {}\n", model.class_names.size());
  for (std::size_t j = 0; j < model.class_names.size(); ++j) {
    out << fmt::format("  {:<20} {} training documents, prior {:.6f}\n", model.class_names[j],
                       model.nb.stats.docs_in_class[j], std::exp(model.nb.log_prior[j]));
  }
  out << fmt::format("vocabulary       {} terms\n", model.vocab.size());
  out << fmt::format("outliers removed {}\n", model.removed_outliers.size());
  out << fmt::format("event model      {}\n", to_string(model.config.nb.event_model));
  if (!model.selected_terms.empty()) out << fmt::format("selected terms   {}\n", model.selected_terms.size());
  if (!model.space) {
    out << "lsa              off\n";
    return kExitOk;
  }
  const LsaSpace& space = *model.space;
  out << fmt::format("lsa rank         {}\n", space.rank());
  const auto dims = static_cast<Eigen::Index>(std::min(a.dims, space.rank()));
  for (Eigen::Index k = 0; k < dims; ++k) {
    std::vector<std::size_t> order(space.terms());
    for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
    const auto col = space.u.col(k);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return std::abs(col(static_cast<Eigen::Index>(x))) > std::abs(col(static_cast<Eigen::Index>(y)));
    });
    out << fmt::format("dim {:>3}  sigma {:.6f} :", k + 1, space.sigma(k));
    for (std::size_t i = 0; i < std::min(a.top, order.size()); ++i) {
      out << fmt::format(" {}({:+.3f})", model.vocab.term(order[i]), col(static_cast<Eigen::Index>(order[i])));
    }
    out << "\n";
  }
  return kExitOk;
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text) {
  json j = to_json(PipelineConfig{});
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kInvalidConfig, fmt::format("config line {}: expected key = value", lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (!j.contains(key)) throw Error(ErrorKind::kInvalidConfig, "unknown config key: " + key);
    auto& slot = j[key];
    try {
      if (slot.is_boolean()) {
        if (value != "true" && value != "false") throw std::invalid_argument("bool");
        slot = value == "true";
      } else if (slot.is_number_unsigned()) {
        if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
        slot = std::stoull(value);
      } else if (slot.is_number_integer()) {
        slot = std::stoll(value);
      } else if (slot.is_number_float()) {
        slot = std::stod(value);
      } else {
        slot = value;
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kInvalidConfig, fmt::format("config line {}: bad value for {}", lineno, key));
    }
  }
  PipelineConfig c;
  try {
    c = pipeline_config_from_json(j);
  } catch (const Error& e) {
    throw Error(ErrorKind::kInvalidConfig, e.what());
  }
  return c;
}

PipelineConfig load_config_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"LSA + Naive Bayes text categorization"};
  app.name("lsanb");
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "train a model from a corpus directory");
  train_cmd->add_option("--train-dir", train.train_dir, "<root>/<class>/<doc>.txt")->required();
  train_cmd->add_option("--out-model", train.out_model, "model file to write")->required();
  train.flags.add_to(*train_cmd);

  PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand("predict", "classify a file or a directory of .txt files");
  predict_cmd->add_option("--model", predict_args.model)->required();
  predict_cmd->add_option("--input", predict_args.input)->required();

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "macro precision/recall on a labeled test directory");
  eval_cmd->add_option("--model", eval.model)->required();
  eval_cmd->add_option("--test-dir", eval.test_dir)->required();
  eval_cmd->add_option("--report-out", eval.report_out, "report path prefix (.txt and .json)")->required();
  eval_cmd->add_option("--train-dir", eval.train_dir, "training data for --baseline");
  eval_cmd->add_flag("--baseline", eval.baseline, "also evaluate plain Naive Bayes");
  eval_cmd->add_flag("--zero-undefined", eval.zero_undefined, "count undefined per-class metrics as 0");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "write a seeded synthetic corpus");
  gen_cmd->add_option("--out-dir", gen.out_dir)->required();
  gen_cmd->add_option("--preset", gen.preset, "table: six classes shaped like the reference experiment");
  gen_cmd->add_option("--n-classes", gen.n_classes);
  gen_cmd->add_option("--docs-per-class", gen.docs_per_class, "per-class totals, split 80/20")->delimiter(',');
  gen_cmd->add_option("--train-per-class", gen.train_per_class)->delimiter(',');
  gen_cmd->add_option("--test-per-class", gen.test_per_class)->delimiter(',');
  gen_cmd->add_option("--class-names", gen.class_names)->delimiter(',');
  gen_cmd->add_option("--vocab-per-class", gen.vocab_per_class);
  gen_cmd->add_option("--noise-vocab", gen.noise_vocab);
  gen_cmd->add_option("--doc-length", gen.doc_length);
  gen_cmd->add_option("--noise-fraction", gen.noise_fraction);
  gen_cmd->add_option("--seed", gen.seed);

  InspectArgs inspect;
  auto* inspect_cmd = app.add_subcommand("inspect", "print model metadata and top-loading terms");
  inspect_cmd->add_option("--model", inspect.model)->required();
  inspect_cmd->add_option("--top", inspect.top, "terms per latent dimension");
  inspect_cmd->add_option("--dims", inspect.dims, "latent dimensions to list");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "lsanb: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*train_cmd) return cmd_train(train, out);
    if (*predict_cmd) return cmd_predict(predict_args, out, err);
    if (*eval_cmd) return cmd_evaluate(eval, out);
    if (*gen_cmd) return cmd_generate(gen, out);
    if (*inspect_cmd) return cmd_inspect(inspect, out);
  } catch (const UsageError& e) {
    err << "lsanb: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInvalidConfig && e.stage().empty()) {
      err << "lsanb: invalid configuration: " << e.what() << "\n";
      return kExitUsage;
    }
    err << "lsanb: error";
    if (!e.stage().empty()) err << " [" << e.stage() << "]";
    err << ": " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "lsanb: error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace lsanb::cli
