#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "stylex/classifier/metrics.hpp"
#include "stylex/classifier/model_io.hpp"
#include "support/builders.hpp"

using namespace stylex;
using namespace stylex::testing;

namespace {

bool pointer_rule(const FeatureVector& fv) { return css_string(fv, "cursor") == "pointer"; }

bool xor_rule(const FeatureVector& fv) {
  return pointer_rule(fv) != fv.predictor(BinaryPredictor::has_background);
}

double accuracy(const BoostedTreeModel& m, const std::vector<LabeledElement>& rows) {
  std::size_t ok = 0;
  for (const auto& r : rows) ok += m.predict(r.features).label == is_positive(r, m.event);
  return static_cast<double>(ok) / static_cast<double>(rows.size());
}

double importance_of(const std::vector<std::pair<std::string, double>>& imp, const std::string& name) {
  for (const auto& [n, v] : imp)
    if (n == name) return v;
  return -1;
}

}  // namespace

TEST(Classifier, PointerRuleIsLearnedExactly) {
  util::Rng rng(1);
  auto train_rows = synthetic_rows(rng, 200, pointer_rule);
  auto held_out = synthetic_rows(rng, 1000, pointer_rule);
  auto model = train(corpus_of(train_rows), EventType::click, {}, 7);
  EXPECT_EQ(accuracy(model, held_out), 1.0);

  LabeledElement probe = style_row({{"cursor", "pointer"}}, false);
  auto yes = model.predict(probe.features);
  EXPECT_TRUE(yes.label);
  EXPECT_GE(yes.score, 0.5);
  probe = style_row({{"cursor", "auto"}}, false);
  auto no = model.predict(probe.features);
  EXPECT_FALSE(no.label);
  EXPECT_LT(no.score, 0.5);
}

TEST(Classifier, PointerRuleImportance) {
  util::Rng rng(2);
  auto model = train(corpus_of(synthetic_rows(rng, 200, pointer_rule)), EventType::click);
  ASSERT_EQ(model.stages.size(), 1u);
  EXPECT_EQ(model.stages[0].tree.depth(), 1u);
  auto imp = predictor_importance(model);
  EXPECT_EQ(imp.size(), 68u);
  EXPECT_EQ(imp.front().first, "cursor");
  EXPECT_DOUBLE_EQ(imp.front().second, 100.0);
  for (std::size_t i = 1; i < imp.size(); ++i) EXPECT_EQ(imp[i].second, 0.0) << imp[i].first;
  EXPECT_EQ(importance_of(imp, "hyphens"), 0.0);
}

TEST(Classifier, XorNeedsDepthTwoAndIsLearned) {
  util::Rng rng(3);
  auto train_rows = synthetic_rows(rng, 400, xor_rule);
  auto held_out = synthetic_rows(rng, 2000, xor_rule);
  auto model = train(corpus_of(train_rows), EventType::click, {}, 5);
  EXPECT_GE(accuracy(model, held_out), 0.99);
  EXPECT_GE(model.stages[0].tree.depth(), 2u);
  auto imp = predictor_importance(model);
  EXPECT_GT(importance_of(imp, "cursor"), 0.0);
  EXPECT_GT(importance_of(imp, "has_background"), 0.0);
}

TEST(Classifier, OneRoundEqualsSingleTree) {
  util::Rng rng(4);
  auto rows = synthetic_rows(rng, 300, [](const FeatureVector& fv) {
    return css_string(fv, "display") == "flex" || fv.box.width > 150;
  });
  BoostingConfig cfg;
  cfg.boosting_rounds = 1;
  auto table = make_training_table(corpus_of(rows), EventType::click);
  auto model = train_boosted(table, EventType::click, cfg, 0);
  ASSERT_EQ(model.stages.size(), 1u);
  EXPECT_EQ(model.stages[0].tree, train_tree(table, cfg.tree()));
  for (const auto& r : table.rows) EXPECT_EQ(model.predict_row(r).label, model.stages[0].tree.predict(r));
}

TEST(Classifier, TrainingIsDeterministic) {
  util::Rng rng(5);
  auto c = corpus_of(synthetic_rows(rng, 300, xor_rule));
  EXPECT_EQ(model_to_string(train(c, EventType::click, {}, 9)), model_to_string(train(c, EventType::click, {}, 9)));
}

TEST(Classifier, SingleClassIsRejected) {
  util::Rng rng(6);
  auto c = corpus_of(synthetic_rows(rng, 50, [](const FeatureVector&) { return false; }));
  EXPECT_THROW(train(c, EventType::click), EmptyClassError);
}

TEST(Classifier, SchemaMismatchIsRejected) {
  util::Rng rng(7);
  auto table = make_training_table(corpus_of(synthetic_rows(rng, 50, pointer_rule)), EventType::click);
  table.schema.pop_back();
  EXPECT_THROW(train_boosted(table, EventType::click, {}, 0), SchemaError);
}

TEST(Classifier, NumericSplitUsesThreshold) {
  util::Rng rng(8);
  auto rows = synthetic_rows(rng, 400, [](const FeatureVector& fv) { return fv.box.width > 120; });
  auto model = train(corpus_of(rows), EventType::click);
  auto held = synthetic_rows(rng, 1000, [](const FeatureVector& fv) { return fv.box.width > 120; });
  EXPECT_GE(accuracy(model, held), 0.99);
}

TEST(Classifier, UnseenCategoryFollowsLargerChild) {
  util::Rng rng(9);
  auto rows = synthetic_rows(rng, 200, pointer_rule);
  auto model = train(corpus_of(rows), EventType::click);
  auto probe = style_row({{"cursor", "grab"}}, false);
  // Most training rows are not "pointer", so the unseen value goes with them.
  EXPECT_FALSE(model.predict(probe.features).label);
}

TEST(Classifier, ZeroTrainingErrorOnSeparableData) {
  util::Rng rng(10);
  auto rows = synthetic_rows(rng, 500, [](const FeatureVector& fv) {
    return css_string(fv, "font-weight") == "700" && css_string(fv, "text-align") != "left";
  });
  BoostingConfig cfg;
  cfg.min_leaf_size = 1;
  auto model = train(corpus_of(rows), EventType::click, cfg);
  EXPECT_EQ(accuracy(model, rows), 1.0);
}

TEST(Classifier, ScoreIsMonotoneInVotes) {
  auto leaf = [](bool label) {
    DecisionTree t;
    TreeNode n;
    n.label = label;
    n.samples = 1;
    t.nodes.push_back(n);
    t.training_samples = 1;
    return t;
  };
  util::Rng rng(11);
  const auto row = to_feature_row(style_row({}, false).features);
  for (int trial = 0; trial < 200; ++trial) {
    BoostedTreeModel m;
    m.feature_schema = feature_schema();
    const std::size_t k = 1 + util::uniform_below(rng, 10);
    for (std::size_t i = 0; i < k; ++i)
      m.stages.push_back({leaf(util::uniform_below(rng, 2) == 1), 0.1 + static_cast<double>(util::uniform_below(rng, 100))});
    for (std::size_t i = 0; i < k; ++i) {
      if (m.stages[i].tree.nodes[0].label) continue;
      auto flipped = m;
      flipped.stages[i].tree = leaf(true);
      ASSERT_GE(flipped.predict_row(row).score, m.predict_row(row).score);
    }
  }
}

TEST(Classifier, TieCountsAsActionable) {
  BoostedTreeModel m;
  m.feature_schema = feature_schema();
  DecisionTree yes, no;
  TreeNode a, b;
  a.label = true;
  b.label = false;
  yes.nodes = {a};
  no.nodes = {b};
  m.stages = {{yes, 1.0}, {no, 1.0}};
  auto p = m.predict(style_row({}, false).features);
  EXPECT_EQ(p.score, 0.5);
  EXPECT_TRUE(p.label);
}

TEST(Metrics, WorkedExample) {
  auto r = make_report(9, 1, 3, 7);
  EXPECT_NEAR(r.actionable.precision, 0.9, 1e-12);
  EXPECT_NEAR(r.actionable.recall, 0.75, 1e-12);
  EXPECT_NEAR(r.actionable.f_measure, 2 * 0.9 * 0.75 / 1.65, 1e-12);
  EXPECT_NEAR(r.actionable.f_measure, 0.818, 5e-4);
  // The other class mirrors the counts.
  EXPECT_NEAR(r.non_actionable.precision, 7.0 / 10.0, 1e-12);
  EXPECT_NEAR(r.non_actionable.recall, 7.0 / 8.0, 1e-12);
}

TEST(Metrics, PerfectPredictions) {
  util::Rng rng(12);
  auto rows = synthetic_rows(rng, 200, pointer_rule);
  auto model = train(corpus_of(rows), EventType::click);
  auto r = evaluate(model, corpus_of(synthetic_rows(rng, 300, pointer_rule)), EventType::click);
  for (const auto* m : {&r.actionable, &r.non_actionable}) {
    EXPECT_EQ(m->precision, 1.0);
    EXPECT_EQ(m->recall, 1.0);
    EXPECT_EQ(m->f_measure, 1.0);
  }
  EXPECT_EQ(r.total(), 300u);
}

TEST(Metrics, RandomPredictionsHaveChancePrecision) {
  util::Rng rng(13);
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (int i = 0; i < 1000; ++i) {
    const bool actual = i % 2 == 0;
    const bool predicted = util::uniform_below(rng, 2) == 1;
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }
  auto r = make_report(tp, fp, fn, tn);
  EXPECT_NEAR(r.actionable.precision, 0.5, 0.1);
  EXPECT_NEAR(r.non_actionable.precision, 0.5, 0.1);
}

TEST(Metrics, ZeroDenominatorsAreZero) {
  auto r = make_report(0, 0, 0, 5);
  EXPECT_EQ(r.actionable.precision, 0.0);
  EXPECT_EQ(r.actionable.recall, 0.0);
  EXPECT_EQ(r.actionable.f_measure, 0.0);
  EXPECT_EQ(r.non_actionable.precision, 1.0);
}

TEST(ModelIo, RoundTripPredictsIdentically) {
  util::Rng rng(14);
  auto model = train(corpus_of(synthetic_rows(rng, 400, xor_rule, EventType::mousedown)), EventType::mousedown, {}, 42);
  const std::string text = model_to_string(model);
  const auto back = model_from_string(text);
  EXPECT_EQ(back, model);
  EXPECT_EQ(model_to_string(back), text);
  for (const auto& r : synthetic_rows(rng, 1000, xor_rule, EventType::mousedown)) {
    auto a = model.predict(r.features), b = back.predict(r.features);
    ASSERT_EQ(a.label, b.label);
    ASSERT_EQ(a.score, b.score);
  }
}

TEST(ModelIo, FileRoundTrip) {
  util::Rng rng(15);
  auto model = train(corpus_of(synthetic_rows(rng, 200, pointer_rule)), EventType::click);
  const auto path = std::filesystem::temp_directory_path() / "stylex-model-io-test.json";
  save_model(model, path);
  EXPECT_EQ(load_model(path), model);
  std::filesystem::remove(path);
}

TEST(ModelIo, TruncatedFileIsRejected) {
  util::Rng rng(16);
  const std::string text = model_to_string(train(corpus_of(synthetic_rows(rng, 200, xor_rule)), EventType::click));
  for (std::size_t cut : {std::size_t{0}, std::size_t{10}, text.size() / 2, text.size() - 5})
    EXPECT_THROW(model_from_string(text.substr(0, cut)), Error) << cut;
}

TEST(ModelIo, SixtySevenFeaturesAreRejected) {
  util::Rng rng(17);
  auto model = train(corpus_of(synthetic_rows(rng, 200, pointer_rule)), EventType::click);
  model.feature_schema.pop_back();
  EXPECT_THROW(model_from_string(model_to_string(model)), SchemaError);
}

TEST(ModelIo, WrongVersionIsRejected) {
  util::Rng rng(18);
  std::string text = model_to_string(train(corpus_of(synthetic_rows(rng, 200, pointer_rule)), EventType::click));
  auto pos = text.find("\"schema_version\": 1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 19, "\"schema_version\": 2");
  EXPECT_THROW(model_from_string(text), SchemaError);
}
