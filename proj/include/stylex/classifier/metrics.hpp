#pragma once

#include <cstddef>

#include "stylex/classifier/boosting.hpp"

namespace stylex {

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f_measure = 0;
};

// Confusion counts are stated for the actionable class; the non-actionable
// class mirrors them (its TP is TN, its FP is FN and so on). A ratio whose
// denominator is zero is reported as 0.
struct EvalReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  ClassMetrics actionable;
  ClassMetrics non_actionable;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
};

inline ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassMetrics m;
  m.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  m.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.f_measure = m.precision + m.recall == 0
                    ? 0.0
                    : 2 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

inline EvalReport make_report(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
  EvalReport r{tp, fp, fn, tn, {}, {}};
  r.actionable = class_metrics(tp, fp, fn);
  r.non_actionable = class_metrics(tn, fn, fp);
  return r;
}

// Scores every row of the (unbalanced) test corpus.
inline EvalReport evaluate(const BoostedTreeModel& model, const Corpus& test_corpus, EventType event) {
  if (test_corpus.rows.empty()) throw Error("cannot evaluate on an empty corpus");
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (const auto& row : test_corpus.rows) {
    const bool actual = is_positive(row, event);
    const bool predicted = model.predict(row.features).label;
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }
  return make_report(tp, fp, fn, tn);
}

}  // namespace stylex
