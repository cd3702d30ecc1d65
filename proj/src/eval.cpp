#include "lsanb/eval.hpp"

#include <fmt/format.h>

#include "lsanb/error.hpp"

namespace lsanb {

namespace {

std::string class_label(std::span<const std::string> names, std::size_t i) {
  return i < names.size() ? names[i] : "#" + std::to_string(i);
}

// Mean of num[i] / den[i]. A zero denominator raises or counts as 0.0.
double macro_ratio(const std::vector<std::int64_t>& num, const std::vector<std::int64_t>& den,
                   UndefinedMetric policy, std::span<const std::string> names,
                   const char* metric) {
  if (num.empty()) throw Error(ErrorKind::kInvalidConfig, "no classes to average");
  double sum = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (den[i] == 0) {
      if (policy == UndefinedMetric::kRaise) {
        throw Error(ErrorKind::kUndefinedForClass,
                    std::string(metric) + " undefined for class " + class_label(names, i));
      }
      continue;
    }
    sum += static_cast<double>(num[i]) / static_cast<double>(den[i]);
  }
  return sum / static_cast<double>(num.size());
}

}  // namespace

ConfusionCounts confusion_counts(std::span<const int> predicted, std::span<const int> actual,
                                 std::size_t num_classes) {
  if (predicted.size() != actual.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                fmt::format("{} predictions for {} documents", predicted.size(), actual.size()));
  }
  if (predicted.empty()) throw Error(ErrorKind::kInvalidConfig, "no documents to evaluate");
  ConfusionCounts c;
  c.tp.assign(num_classes, 0);
  c.fp.assign(num_classes, 0);
  c.fn.assign(num_classes, 0);
  c.tn.assign(num_classes, 0);
  const auto total = static_cast<std::int64_t>(predicted.size());
  for (std::size_t d = 0; d < predicted.size(); ++d) {
    const int p = predicted[d];
    const int a = actual[d];
    if (p < 0 || a < 0 || static_cast<std::size_t>(p) >= num_classes ||
        static_cast<std::size_t>(a) >= num_classes) {
      throw Error(ErrorKind::kInvalidConfig, "class index out of range");
    }
    if (p == a) {
      ++c.tp[static_cast<std::size_t>(p)];
    } else {
      ++c.fp[static_cast<std::size_t>(p)];
      ++c.fn[static_cast<std::size_t>(a)];
    }
  }
  for (std::size_t i = 0; i < num_classes; ++i) c.tn[i] = total - c.tp[i] - c.fp[i] - c.fn[i];
  return c;
}

double macro_precision(const ConfusionCounts& c, UndefinedMetric policy,
                       std::span<const std::string> class_names) {
  std::vector<std::int64_t> den(c.num_classes());
  for (std::size_t i = 0; i < den.size(); ++i) den[i] = c.tp[i] + c.fp[i];
  return macro_ratio(c.tp, den, policy, class_names, "precision");
}

double macro_recall(const ConfusionCounts& c, UndefinedMetric policy,
                    std::span<const std::string> class_names) {
  std::vector<std::int64_t> den(c.num_classes());
  for (std::size_t i = 0; i < den.size(); ++i) den[i] = c.tp[i] + c.fn[i];
  return macro_ratio(c.tp, den, policy, class_names, "recall");
}

EvalReport evaluate(std::span<const int> predicted, std::span<const int> actual,
                    const std::vector<std::string>& class_names, UndefinedMetric policy) {
  const ConfusionCounts c = confusion_counts(predicted, actual, class_names.size());
  EvalReport report;
  report.macro_precision = macro_precision(c, policy, class_names);
  report.macro_recall = macro_recall(c, policy, class_names);
  for (std::size_t i = 0; i < c.num_classes(); ++i) {
    ClassMetrics m;
    m.name = class_names[i];
    m.tp = c.tp[i];
    m.fp = c.fp[i];
    m.fn = c.fn[i];
    m.tn = c.tn[i];
    m.precision_undefined = m.tp + m.fp == 0;
    m.recall_undefined = m.tp + m.fn == 0;
    m.precision = m.precision_undefined ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
    m.recall = m.recall_undefined ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    report.per_class.push_back(std::move(m));
  }
  return report;
}

std::string render_text(const EvalReport& report, const std::string& title) {
  std::size_t width = 5;
  for (const auto& m : report.per_class) width = std::max(width, m.name.size());
  std::string out = title + "\n";
  out += fmt::format("{:<{}}  {:>6} {:>6} {:>6} {:>6}  {:>9}  {:>9}\n", "class", width, "TP", "FP",
                     "FN", "TN", "precision", "recall");
  for (const auto& m : report.per_class) {
    out += fmt::format("{:<{}}  {:>6} {:>6} {:>6} {:>6}  {:>9.6f}{} {:>9.6f}{}\n", m.name, width,
                       m.tp, m.fp, m.fn, m.tn, m.precision, m.precision_undefined ? "*" : " ",
                       m.recall, m.recall_undefined ? "*" : " ");
  }
  out += fmt::format("macro precision  {:.6f}\n", report.macro_precision);
  out += fmt::format("macro recall     {:.6f}\n", report.macro_recall);
  bool any_undefined = false;
  for (const auto& m : report.per_class) any_undefined |= m.precision_undefined || m.recall_undefined;
  if (any_undefined) out += "* undefined, counted as 0\n";
  return out;
}

std::string render_comparison(const EvalReport& lsa, const EvalReport& baseline) {
  std::string out = "comparison\n";
  out += fmt::format("{:<12}  {:>9}  {:>9}\n", "method", "precision", "recall");
  out += fmt::format("{:<12}  {:>9.6f}  {:>9.6f}\n", "LSA+NB", lsa.macro_precision, lsa.macro_recall);
  out += fmt::format("{:<12}  {:>9.6f}  {:>9.6f}\n", "NB", baseline.macro_precision,
                     baseline.macro_recall);
  out += fmt::format("{:<12}  {:>+9.6f}  {:>+9.6f}\n", "difference",
                     lsa.macro_precision - baseline.macro_precision,
                     lsa.macro_recall - baseline.macro_recall);
  return out;
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["macro_precision"] = report.macro_precision;
  j["macro_recall"] = report.macro_recall;
  auto& per_class = j["per_class"] = nlohmann::ordered_json::array();
  for (const auto& m : report.per_class) {
    nlohmann::ordered_json c;
    c["name"] = m.name;
    c["tp"] = m.tp;
    c["fp"] = m.fp;
    c["fn"] = m.fn;
    c["tn"] = m.tn;
    c["precision"] = m.precision;
    c["recall"] = m.recall;
    if (m.precision_undefined) c["precision_undefined"] = true;
    if (m.recall_undefined) c["recall_undefined"] = true;
    per_class.push_back(std::move(c));
  }
  return j;
}

}  // namespace lsanb
