#pragma once

#include <memory>
#include <vector>

#include "lsanb/nb.hpp"

namespace lsanb::oracle {

// Tiny training set over `num_terms` terms; docs are dense count vectors.
struct NbInstance {
  int num_terms = 0;
  int num_classes = 2;
  std::vector<std::vector<int>> docs;
  std::vector<int> labels;
};

// Direct evaluation of the Naive Bayes decision rule in exact rational
// arithmetic: prior times the product of per-term probabilities, argmax with
// the lowest index on exact ties. Probabilities equal to 1 are replaced by
// the double nearest 1 - 1e-12, as the classifier does.
class ExactNb {
 public:
  ExactNb(const NbInstance& inst, EventModel event, WordProbEstimator estimator, PriorForm prior);
  ~ExactNb();
  int classify(const std::vector<int>& doc) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

inline int exact_classify(const NbInstance& inst, EventModel event, WordProbEstimator estimator,
                          PriorForm prior, const std::vector<int>& doc) {
  return ExactNb(inst, event, estimator, prior).classify(doc);
}

}  // namespace lsanb::oracle
