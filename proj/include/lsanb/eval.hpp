#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lsanb {

// One-vs-rest counts per class.
struct ConfusionCounts {
  std::vector<std::int64_t> tp, fp, fn, tn;

  std::size_t num_classes() const noexcept { return tp.size(); }
};

enum class UndefinedMetric {
  kRaise,     // UndefinedForClass
  kZeroFill,  // use 0.0 and mark the class
};

ConfusionCounts confusion_counts(std::span<const int> predicted, std::span<const int> actual,
                                 std::size_t num_classes);

// Class names are only used in error messages; may be empty.
double macro_precision(const ConfusionCounts& c, UndefinedMetric policy = UndefinedMetric::kRaise,
                       std::span<const std::string> class_names = {});
double macro_recall(const ConfusionCounts& c, UndefinedMetric policy = UndefinedMetric::kRaise,
                    std::span<const std::string> class_names = {});

struct ClassMetrics {
  std::string name;
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  bool precision_undefined = false;
  bool recall_undefined = false;
};

struct EvalReport {
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  std::vector<ClassMetrics> per_class;
};

EvalReport evaluate(std::span<const int> predicted, std::span<const int> actual,
                    const std::vector<std::string>& class_names,
                    UndefinedMetric policy = UndefinedMetric::kRaise);

// Plain-text table; every real printed with 6 decimals.
std::string render_text(const EvalReport& report, const std::string& title);
// Two-method precision/recall comparison with a difference row.
std::string render_comparison(const EvalReport& lsa, const EvalReport& baseline);

nlohmann::ordered_json to_json(const EvalReport& report);

}  // namespace lsanb
