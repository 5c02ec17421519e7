#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "stylex/core/feature_schema.hpp"
#include "stylex/core/types.hpp"
#include "stylex/error.hpp"

namespace stylex {

// Rows in schema order plus binary labels.
struct TrainingTable {
  std::vector<FeatureSpec> schema;
  std::vector<std::vector<FeatureValue>> rows;
  std::vector<bool> labels;

  std::size_t size() const noexcept { return rows.size(); }
};

struct TreeConfig {
  std::size_t min_leaf_size = 5;
  std::size_t max_depth = 20;
};

// Internal nodes test one feature: numeric features go left when
// value <= threshold, categorical ones when the value is in left_values.
// Categorical values never seen at a node follow the child that received more
// training samples there.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0;
  std::vector<std::string> left_values;
  std::vector<std::string> right_values;
  bool unseen_left = true;
  std::int32_t left = -1;
  std::int32_t right = -1;

  std::size_t samples = 0;
  bool label = false;
  double probability = 0;

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::size_t training_samples = 0;

  const TreeNode& leaf_for(const std::vector<FeatureValue>& row) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
      const TreeNode& n = nodes[i];
      const FeatureValue& v = row[static_cast<std::size_t>(n.feature)];
      bool go_left;
      if (const auto* d = std::get_if<double>(&v)) {
        go_left = *d <= n.threshold;
      } else {
        const auto& s = std::get<std::string>(v);
        if (std::binary_search(n.left_values.begin(), n.left_values.end(), s))
          go_left = true;
        else if (std::binary_search(n.right_values.begin(), n.right_values.end(), s))
          go_left = false;
        else
          go_left = n.unseen_left;
      }
      i = static_cast<std::size_t>(go_left ? n.left : n.right);
    }
    return nodes[i];
  }

  bool predict(const std::vector<FeatureValue>& row) const { return leaf_for(row).label; }

  // Share of the training set that reached the leaf.
  double leaf_share(const TreeNode& leaf) const {
    return training_samples == 0 ? 0.0
                                 : static_cast<double>(leaf.samples) /
                                       static_cast<double>(training_samples);
  }

  std::size_t depth() const {
    std::size_t best = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
      auto [i, d] = stack.back();
      stack.pop_back();
      best = std::max(best, d);
      if (!nodes[i].is_leaf()) {
        stack.push_back({static_cast<std::size_t>(nodes[i].left), d + 1});
        stack.push_back({static_cast<std::size_t>(nodes[i].right), d + 1});
      }
    }
    return best;
  }

  bool operator==(const DecisionTree&) const = default;
};

namespace tree_detail {

inline double entropy(double pos, double total) {
  if (total <= 0) return 0;
  double p = pos / total, q = 1 - p;
  double h = 0;
  if (p > 0) h -= p * std::log2(p);
  if (q > 0) h -= q * std::log2(q);
  return h;
}

inline double split_information(double left, double total) {
  return entropy(left, total);
}

// Column-wise view of a TrainingTable with categorical values interned.
struct EncodedTable {
  std::vector<std::vector<double>> numeric;        // per feature, empty if categorical
  std::vector<std::vector<std::int32_t>> category; // per feature, empty if numeric
  std::vector<std::vector<std::string>> dictionary;
  std::vector<bool> labels;
  std::size_t features = 0;

  bool is_numeric(std::size_t f) const { return !numeric[f].empty(); }
};

inline EncodedTable encode(const TrainingTable& table) {
  EncodedTable enc;
  enc.features = table.schema.size();
  enc.numeric.resize(enc.features);
  enc.category.resize(enc.features);
  enc.dictionary.resize(enc.features);
  enc.labels = table.labels;
  for (std::size_t f = 0; f < enc.features; ++f) {
    const bool categorical = table.schema[f].kind == FeatureKind::categorical;
    std::unordered_map<std::string, std::int32_t> ids;
    for (const auto& row : table.rows) {
      if (row.size() != enc.features) throw SchemaError("row width does not match schema");
      const FeatureValue& v = row[f];
      if (categorical) {
        const auto* s = std::get_if<std::string>(&v);
        if (!s) throw SchemaError("feature '" + table.schema[f].name + "' expects a string value");
        auto [it, inserted] = ids.emplace(*s, static_cast<std::int32_t>(enc.dictionary[f].size()));
        if (inserted) enc.dictionary[f].push_back(*s);
        enc.category[f].push_back(it->second);
      } else {
        const auto* d = std::get_if<double>(&v);
        if (!d) throw SchemaError("feature '" + table.schema[f].name + "' expects a numeric value");
        enc.numeric[f].push_back(*d);
      }
    }
  }
  return enc;
}

struct Candidate {
  bool valid = false;
  std::size_t feature = 0;
  double gain = 0;
  double ratio = 0;
  double threshold = 0;
  std::vector<std::int32_t> left_categories;
};

class TreeGrower {
 public:
  TreeGrower(const EncodedTable& table, const std::vector<double>& weights, TreeConfig config)
      : table_(table), weights_(weights), config_(config) {}

  DecisionTree grow() {
    DecisionTree tree;
    tree.training_samples = table_.labels.size();
    std::vector<std::size_t> all(table_.labels.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    tree_ = &tree;
    build(all, 0);
    return tree;
  }

 private:
  static constexpr double kMinGain = 1e-12;

  std::int32_t build(const std::vector<std::size_t>& idx, std::size_t depth) {
    double w = 0, wpos = 0;
    for (std::size_t i : idx) {
      w += weights_[i];
      if (table_.labels[i]) wpos += weights_[i];
    }
    const auto self = static_cast<std::int32_t>(tree_->nodes.size());
    tree_->nodes.emplace_back();
    {
      TreeNode& node = tree_->nodes.back();
      node.samples = idx.size();
      node.label = wpos >= w - wpos;
      node.probability = w > 0 ? wpos / w : 0.0;
    }
    const bool pure = wpos <= 0 || wpos >= w;
    if (pure || depth >= config_.max_depth || idx.size() < 2 * config_.min_leaf_size) return self;

    Candidate best = choose_split(idx, w, wpos);
    if (!best.valid) return self;

    std::vector<bool> left_cat;
    if (!table_.is_numeric(best.feature)) {
      left_cat.assign(table_.dictionary[best.feature].size(), false);
      for (auto c : best.left_categories) left_cat[static_cast<std::size_t>(c)] = true;
    }
    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) {
      bool go_left = table_.is_numeric(best.feature)
                         ? table_.numeric[best.feature][i] <= best.threshold
                         : left_cat[static_cast<std::size_t>(table_.category[best.feature][i])];
      (go_left ? left : right).push_back(i);
    }

    {
      TreeNode& node = tree_->nodes[static_cast<std::size_t>(self)];
      node.feature = static_cast<std::int32_t>(best.feature);
      if (table_.is_numeric(best.feature)) {
        node.threshold = best.threshold;
      } else {
        std::vector<bool> seen(table_.dictionary[best.feature].size(), false);
        for (std::size_t i : idx) seen[static_cast<std::size_t>(table_.category[best.feature][i])] = true;
        for (std::size_t c = 0; c < seen.size(); ++c) {
          if (!seen[c]) continue;
          (left_cat[c] ? node.left_values : node.right_values).push_back(table_.dictionary[best.feature][c]);
        }
        std::sort(node.left_values.begin(), node.left_values.end());
        std::sort(node.right_values.begin(), node.right_values.end());
      }
      node.unseen_left = left.size() >= right.size();
    }
    std::int32_t l = build(left, depth + 1);
    std::int32_t r = build(right, depth + 1);
    tree_->nodes[static_cast<std::size_t>(self)].left = l;
    tree_->nodes[static_cast<std::size_t>(self)].right = r;
    return self;
  }

  Candidate choose_split(const std::vector<std::size_t>& idx, double w, double wpos) const {
    const double parent_h = entropy(wpos, w);
    std::vector<Candidate> cands;
    for (std::size_t f = 0; f < table_.features; ++f) {
      Candidate c = table_.is_numeric(f) ? best_numeric(f, idx, w, parent_h)
                                         : best_categorical(f, idx, w, parent_h);
      if (c.valid) cands.push_back(std::move(c));
    }
    if (cands.empty()) return {};

    // Gain ratio among splits whose gain is at least average, the usual guard
    // against tiny, high-ratio splits. With no informative split left (an XOR
    // style interaction) the highest-gain split is taken anyway so deeper
    // levels can separate the classes.
    double sum = 0;
    std::size_t informative = 0;
    for (const auto& c : cands)
      if (c.gain > kMinGain) {
        sum += c.gain;
        ++informative;
      }
    const Candidate* chosen = nullptr;
    if (informative > 0) {
      const double avg = sum / static_cast<double>(informative);
      for (const auto& c : cands) {
        if (c.gain <= kMinGain || c.gain < avg - 1e-15) continue;
        if (!chosen || c.ratio > chosen->ratio) chosen = &c;
      }
    } else {
      for (const auto& c : cands)
        if (!chosen || c.gain > chosen->gain) chosen = &c;
    }
    return chosen ? *chosen : Candidate{};
  }

  void score(Candidate& c, double wl, double wlpos, double w, double wpos, double parent_h) const {
    const double wr = w - wl, wrpos = wpos - wlpos;
    const double gain = parent_h - (wl / w) * entropy(wlpos, wl) - (wr / w) * entropy(wrpos, wr);
    const double si = split_information(wl, w);
    c.gain = gain;
    c.ratio = si > 0 ? gain / si : 0.0;
  }

  Candidate best_numeric(std::size_t f, const std::vector<std::size_t>& idx, double w,
                         double parent_h) const {
    const auto& col = table_.numeric[f];
    std::vector<std::size_t> order = idx;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return col[a] < col[b]; });
    double wpos = 0;
    for (std::size_t i : idx)
      if (table_.labels[i]) wpos += weights_[i];

    Candidate best;
    double wl = 0, wlpos = 0;
    const std::size_t n = order.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
      std::size_t i = order[k];
      wl += weights_[i];
      if (table_.labels[i]) wlpos += weights_[i];
      if (col[order[k + 1]] == col[i]) continue;
      const std::size_t nl = k + 1;
      if (nl < config_.min_leaf_size || n - nl < config_.min_leaf_size) continue;
      Candidate c;
      c.valid = true;
      c.feature = f;
      c.threshold = col[i];
      score(c, wl, wlpos, w, wpos, parent_h);
      if (!best.valid || c.gain > best.gain) best = c;
    }
    return best;
  }

  Candidate best_categorical(std::size_t f, const std::vector<std::size_t>& idx, double w,
                             double parent_h) const {
    const auto& col = table_.category[f];
    struct Stat {
      double w = 0, wpos = 0;
      std::size_t n = 0;
    };
    std::unordered_map<std::int32_t, Stat> stats;
    double wpos = 0;
    for (std::size_t i : idx) {
      Stat& s = stats[col[i]];
      s.w += weights_[i];
      s.n += 1;
      if (table_.labels[i]) {
        s.wpos += weights_[i];
        wpos += weights_[i];
      }
    }
    if (stats.size() < 2) return {};
    std::vector<std::int32_t> cats;
    cats.reserve(stats.size());
    for (const auto& [c, _] : stats) cats.push_back(c);
    // Ordering categories by positive rate makes the best binary partition a
    // prefix of that order.
    std::sort(cats.begin(), cats.end(), [&](std::int32_t a, std::int32_t b) {
      const Stat& sa = stats.at(a);
      const Stat& sb = stats.at(b);
      double ra = sa.wpos / sa.w, rb = sb.wpos / sb.w;
      if (ra != rb) return ra < rb;
      return table_.dictionary[f][static_cast<std::size_t>(a)] <
             table_.dictionary[f][static_cast<std::size_t>(b)];
    });

    Candidate best;
    double wl = 0, wlpos = 0;
    std::size_t nl = 0;
    const std::size_t n = idx.size();
    for (std::size_t k = 0; k + 1 < cats.size(); ++k) {
      const Stat& s = stats.at(cats[k]);
      wl += s.w;
      wlpos += s.wpos;
      nl += s.n;
      if (nl < config_.min_leaf_size || n - nl < config_.min_leaf_size) continue;
      Candidate c;
      c.valid = true;
      c.feature = f;
      score(c, wl, wlpos, w, wpos, parent_h);
      if (!best.valid || c.gain > best.gain) {
        c.left_categories.assign(cats.begin(), cats.begin() + static_cast<std::ptrdiff_t>(k + 1));
        best = std::move(c);
      }
    }
    return best;
  }

  const EncodedTable& table_;
  const std::vector<double>& weights_;
  TreeConfig config_;
  DecisionTree* tree_ = nullptr;
};

}  // namespace tree_detail

// Grows one gain-ratio tree on weighted rows.
inline DecisionTree train_tree(const TrainingTable& table, const std::vector<double>& weights,
                               const TreeConfig& config = {}) {
  if (table.rows.size() != table.labels.size() || weights.size() != table.rows.size())
    throw SchemaError("rows, labels and weights differ in length");
  if (table.rows.empty()) throw EmptyClassError("cannot train on an empty table");
  const auto enc = tree_detail::encode(table);
  return tree_detail::TreeGrower(enc, weights, config).grow();
}

inline DecisionTree train_tree(const TrainingTable& table, const TreeConfig& config = {}) {
  std::vector<double> w(table.rows.size(), table.rows.empty() ? 0.0 : 1.0 / static_cast<double>(table.rows.size()));
  return train_tree(table, w, config);
}

}  // namespace stylex
