#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stylex/classifier/tree.hpp"
#include "stylex/dataset/corpus.hpp"

namespace stylex {

struct BoostingConfig {
  std::size_t boosting_rounds = 10;
  std::size_t min_leaf_size = 5;
  std::size_t max_depth = 20;

  TreeConfig tree() const { return {min_leaf_size, max_depth}; }
  bool operator==(const BoostingConfig&) const = default;
};

struct BoostingStage {
  DecisionTree tree;
  double weight = 0;

  bool operator==(const BoostingStage&) const = default;
};

struct Prediction {
  bool label = false;
  double score = 0;
};

// Binary actionable model for one event type: a weighted vote of boosted
// trees. Never empty once trained or loaded.
struct BoostedTreeModel {
  EventType event = EventType::click;
  std::vector<BoostingStage> stages;
  BoostingConfig config;
  std::uint64_t seed = 0;
  std::vector<FeatureSpec> feature_schema;

  // Weight-normalized vote of the stages. Ties at 0.5 count as actionable.
  Prediction predict_row(const std::vector<FeatureValue>& row) const {
    double total = 0, positive = 0;
    for (const auto& s : stages) {
      total += s.weight;
      if (s.tree.predict(row)) positive += s.weight;
    }
    Prediction p;
    p.score = total > 0 ? positive / total : 0.0;
    p.label = p.score >= 0.5;
    return p;
  }

  Prediction predict(const FeatureVector& fv) const { return predict_row(to_feature_row(fv)); }

  bool operator==(const BoostedTreeModel&) const = default;
};

inline Prediction predict(const BoostedTreeModel& model, const FeatureVector& fv) {
  return model.predict(fv);
}

inline TrainingTable make_training_table(const Corpus& corpus, EventType event) {
  TrainingTable t;
  t.schema = feature_schema();
  t.rows.reserve(corpus.rows.size());
  t.labels.reserve(corpus.rows.size());
  for (const auto& row : corpus.rows) {
    t.rows.push_back(to_feature_row(row.features));
    t.labels.push_back(is_positive(row, event));
  }
  return t;
}

// Discrete exponential boosting (AdaBoost.M1) over gain-ratio trees. The
// first stage is the unboosted tree; later stages see misclassified rows
// up-weighted by exp(alpha). Training stops early on a perfect stage or one
// no better than chance. The procedure has no random steps; the seed is
// recorded with the model for provenance.
inline BoostedTreeModel train_boosted(const TrainingTable& table, EventType event,
                                      const BoostingConfig& config, std::uint64_t seed) {
  if (table.schema != feature_schema())
    throw SchemaError("training schema does not match the 68-feature schema");
  if (table.rows.size() != table.labels.size()) throw SchemaError("rows and labels differ in length");
  if (config.boosting_rounds == 0) throw ConfigError("boosting_rounds must be at least 1");
  if (config.min_leaf_size == 0) throw ConfigError("min_leaf_size must be at least 1");
  const std::size_t n = table.rows.size();
  const auto positives = static_cast<std::size_t>(std::count(table.labels.begin(), table.labels.end(), true));
  if (positives == 0 || positives == n)
    throw EmptyClassError("training data for '" + std::string(to_string(event)) +
                          "' contains a single class");

  const auto enc = tree_detail::encode(table);
  BoostedTreeModel model;
  model.event = event;
  model.config = config;
  model.seed = seed;
  model.feature_schema = table.schema;

  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<bool> wrong(n);
  constexpr double kErrorFloor = 1e-10;
  for (std::size_t round = 0; round < config.boosting_rounds; ++round) {
    DecisionTree tree = tree_detail::TreeGrower(enc, w, config.tree()).grow();
    double err = 0;
    for (std::size_t i = 0; i < n; ++i) {
      wrong[i] = tree.predict(table.rows[i]) != table.labels[i];
      if (wrong[i]) err += w[i];
    }
    if (err >= 0.5) {
      if (model.stages.empty()) model.stages.push_back({std::move(tree), 1.0});
      break;
    }
    const double e = std::max(err, kErrorFloor);
    const double alpha = std::log((1 - e) / e);
    model.stages.push_back({std::move(tree), alpha});
    if (err <= 0) break;

    const double up = std::exp(alpha);
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (wrong[i]) w[i] *= up;
      total += w[i];
    }
    for (double& x : w) x /= total;
  }
  return model;
}

inline BoostedTreeModel train(const Corpus& train_corpus, EventType event,
                              const BoostingConfig& config = {}, std::uint64_t seed = 0) {
  return train_boosted(make_training_table(train_corpus, event), event, config, seed);
}

// Share of training samples (in percent) that pass through at least one split
// on each feature, averaged over stages. Sorted descending, schema order on
// ties; every schema feature is listed.
inline std::vector<std::pair<std::string, double>> predictor_importance(const BoostedTreeModel& model) {
  const std::size_t nf = model.feature_schema.size();
  std::vector<double> usage(nf, 0.0);
  for (const auto& stage : model.stages) {
    const DecisionTree& t = stage.tree;
    if (t.nodes.empty() || t.training_samples == 0) continue;
    std::vector<double> through(nf, 0.0);
    struct Item {
      std::size_t node;
      std::vector<bool> above;
    };
    std::vector<Item> stack{{0, std::vector<bool>(nf, false)}};
    while (!stack.empty()) {
      Item it = std::move(stack.back());
      stack.pop_back();
      const TreeNode& node = t.nodes[it.node];
      if (node.is_leaf()) continue;
      auto f = static_cast<std::size_t>(node.feature);
      if (!it.above[f]) {
        through[f] += static_cast<double>(node.samples);
        it.above[f] = true;
      }
      stack.push_back({static_cast<std::size_t>(node.left), it.above});
      stack.push_back({static_cast<std::size_t>(node.right), std::move(it.above)});
    }
    for (std::size_t f = 0; f < nf; ++f)
      usage[f] += through[f] / static_cast<double>(t.training_samples);
  }
  std::vector<std::pair<std::string, double>> out;
  const double stages = model.stages.empty() ? 1.0 : static_cast<double>(model.stages.size());
  for (std::size_t f = 0; f < nf; ++f)
    out.emplace_back(model.feature_schema[f].name, 100.0 * usage[f] / stages);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

}  // namespace stylex
