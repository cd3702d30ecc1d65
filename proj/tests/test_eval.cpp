#include <gtest/gtest.h>

#include <random>

#include "lsanb/error.hpp"
#include "lsanb/eval.hpp"

using namespace lsanb;

namespace {

// Predictions realizing (assigned, correct) per class; the wrong assignments
// are taken from the next class round-robin.
struct Built {
  std::vector<int> predicted, actual;
};

Built from_assignments(const std::vector<std::pair<int, int>>& assigned_correct) {
  Built b;
  const int l = static_cast<int>(assigned_correct.size());
  for (int c = 0; c < l; ++c) {
    const auto [assigned, correct] = assigned_correct[static_cast<std::size_t>(c)];
    for (int i = 0; i < assigned; ++i) {
      b.predicted.push_back(c);
      b.actual.push_back(i < correct ? c : (c + 1) % l);
    }
  }
  return b;
}

}  // namespace

TEST(Confusion, PerfectPredictions) {
  const std::vector<int> y{0, 1, 2, 1};
  const auto c = confusion_counts(y, y, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(c.fp[i], 0);
    EXPECT_EQ(c.fn[i], 0);
  }
  EXPECT_EQ(macro_precision(c), 1.0);
  EXPECT_EQ(macro_recall(c), 1.0);
}

TEST(Confusion, PaperTableFourCounts) {
  const auto b = from_assignments({{91, 90}, {58, 50}, {25, 21}, {48, 47}, {16, 12}, {32, 32}});
  const auto c = confusion_counts(b.predicted, b.actual, 6);
  EXPECT_EQ(c.tp[2], 21);
  EXPECT_EQ(c.fp[2], 4);
  EXPECT_EQ(c.tp[5], 32);
  EXPECT_EQ(c.fp[5], 0);
  const double want = (90.0 / 91 + 50.0 / 58 + 21.0 / 25 + 47.0 / 48 + 12.0 / 16 + 32.0 / 32) / 6;
  EXPECT_NEAR(macro_precision(c), want, 1e-15);
  EXPECT_NEAR(macro_precision(c), 0.903374, 1e-6);
}

TEST(Macro, Examples) {
  // precision 0.5 and 1.0
  const std::vector<int> pred{0, 0, 1};
  const std::vector<int> act{0, 1, 1};
  EXPECT_NEAR(macro_precision(confusion_counts(pred, act, 2)), 0.75, 1e-15);

  // class 0 never predicted but present: recall (0 + 1) / 2
  const std::vector<int> p2{1, 1, 1};
  const std::vector<int> a2{0, 0, 1};
  EXPECT_NEAR(macro_recall(confusion_counts(p2, a2, 2)), 0.5, 1e-15);

  // (tp=3, fn=1) and (tp=1, fn=3)
  const std::vector<int> p4{0, 0, 0, 1, 1, 0, 0, 0};
  const std::vector<int> a4{0, 0, 0, 0, 1, 1, 1, 1};
  EXPECT_NEAR(macro_recall(confusion_counts(p4, a4, 2)), 0.5, 1e-15);
}

TEST(Macro, UndefinedClass) {
  const std::vector<int> pred{1, 1};
  const std::vector<int> act{0, 1};
  const auto c = confusion_counts(pred, act, 2);
  const std::vector<std::string> names{"war", "stock"};
  try {
    macro_precision(c, UndefinedMetric::kRaise, names);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUndefinedForClass);
    EXPECT_NE(std::string(e.what()).find("war"), std::string::npos);
  }
  EXPECT_NEAR(macro_precision(c, UndefinedMetric::kZeroFill), 0.25, 1e-15);
  const auto r = evaluate(pred, act, names, UndefinedMetric::kZeroFill);
  EXPECT_TRUE(r.per_class[0].precision_undefined);
  EXPECT_NE(render_text(r, "x").find('*'), std::string::npos);
}

TEST(Confusion, LengthMismatch) {
  const std::vector<int> a{0, 1};
  const std::vector<int> b{0};
  try {
    confusion_counts(a, b, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kLengthMismatch);
  }
}

TEST(Confusion, PropertyCountsConsistent) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 300; ++trial) {
    const int l = 1 + trial % 6;
    std::uniform_int_distribution<int> cls(0, l - 1);
    const std::size_t n = 1 + static_cast<std::size_t>(trial) % 40;
    std::vector<int> p(n), a(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = cls(rng);
      a[i] = cls(rng);
    }
    const auto c = confusion_counts(p, a, static_cast<std::size_t>(l));
    std::int64_t tp = 0, fn = 0;
    for (int i = 0; i < l; ++i) {
      const auto k = static_cast<std::size_t>(i);
      ASSERT_EQ(c.tp[k] + c.fp[k] + c.fn[k] + c.tn[k], static_cast<std::int64_t>(n));
      tp += c.tp[k];
      fn += c.fn[k];
    }
    ASSERT_EQ(tp + fn, static_cast<std::int64_t>(n));

    std::vector<std::string> names;
    for (int i = 0; i < l; ++i) names.push_back("c" + std::to_string(i));
    const auto r = evaluate(p, a, names, UndefinedMetric::kZeroFill);
    double sp = 0, sr = 0;
    for (const auto& m : r.per_class) {
      if (!m.precision_undefined) sp += m.precision;
      if (!m.recall_undefined) sr += m.recall;
    }
    // zero-filled classes count as 0 in the mean
    ASSERT_NEAR(r.macro_precision, sp / l, 1e-12);
    ASSERT_NEAR(r.macro_recall, sr / l, 1e-12);
  }
}

TEST(Render, SixDecimalsAndComparison) {
  const auto b = from_assignments({{91, 90}, {58, 50}, {25, 21}, {48, 47}, {16, 12}, {32, 32}});
  const std::vector<std::string> names{"computer", "social", "war", "political", "human_rights", "stock"};
  const auto r = evaluate(b.predicted, b.actual, names);
  const auto text = render_text(r, "LSA+NB");
  for (const char* s : {"0.989011", "0.862069", "0.840000", "0.979167", "0.750000", "1.000000", "0.903374"})
    EXPECT_NE(text.find(s), std::string::npos) << s;
  const auto cmp = render_comparison(r, r);
  EXPECT_NE(cmp.find("LSA+NB"), std::string::npos);
  EXPECT_NE(cmp.find("NB"), std::string::npos);
  EXPECT_NE(cmp.find("0.000000"), std::string::npos);
  const auto j = to_json(r);
  EXPECT_DOUBLE_EQ(j["macro_precision"].get<double>(), r.macro_precision);
  EXPECT_EQ(j["per_class"].size(), 6u);
}
