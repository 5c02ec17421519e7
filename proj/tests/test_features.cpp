#include <gtest/gtest.h>

#include <set>

#include "stylex/features/extract.hpp"
#include "support/builders.hpp"

using namespace stylex;
using stylex::testing::default_observation;

namespace {

bool predictor(const FeatureVector& fv, BinaryPredictor p) { return fv.predictor(p); }

FeatureVector extract_with(const StyleMap& overrides) {
  auto obs = default_observation();
  for (const auto& [k, v] : overrides) obs.computed_style[k] = v;
  return extract_features(obs, {});
}

}  // namespace

TEST(Extraction, DefaultsGiveNoBinaryPredictors) {
  auto fv = extract_features(default_observation(), {});
  for (bool b : fv.binary) EXPECT_FALSE(b);
  EXPECT_EQ(fv.dom_depth, 0);
  EXPECT_EQ(to_feature_row(fv).size(), 68u);
}

TEST(Extraction, BackgroundImageSetsHasBackground) {
  EXPECT_TRUE(predictor(extract_with({{"background-image", "url(a.png)"}}), BinaryPredictor::has_background));
}

TEST(Extraction, AnySideBorderRule) {
  auto fv = extract_with({{"border-left-style", "solid"}});
  EXPECT_TRUE(predictor(fv, BinaryPredictor::has_border));
  for (auto side : {"border-top-style", "border-right-style", "border-bottom-style"})
    EXPECT_TRUE(predictor(extract_with({{side, "dashed"}}), BinaryPredictor::has_border)) << side;
}

TEST(Extraction, TransparentBackgroundIsDefault) {
  auto fv = extract_with({{"background-color", "rgba(0, 0, 0, 0)"}, {"background-image", "none"}});
  EXPECT_FALSE(predictor(fv, BinaryPredictor::has_background));
  EXPECT_FALSE(predictor(extract_with({{"background-color", "transparent"}}), BinaryPredictor::has_background));
  EXPECT_TRUE(predictor(extract_with({{"background-color", "rgb(255, 0, 0)"}}), BinaryPredictor::has_background));
}

TEST(Extraction, BackgroundColorCanBeIgnored) {
  auto obs = default_observation();
  obs.computed_style["background-color"] = "rgb(255, 0, 0)";
  ExtractionOptions strict;
  strict.background_color_counts = false;
  EXPECT_FALSE(extract_features(obs, {}, strict).predictor(BinaryPredictor::has_background));
}

TEST(Extraction, TransitionPropertyCountsAsAnimation) {
  EXPECT_TRUE(predictor(extract_with({{"transition-property", "opacity"}}), BinaryPredictor::has_animation));
  EXPECT_FALSE(predictor(extract_with({{"transition-property", "all"}}), BinaryPredictor::has_animation));
  EXPECT_FALSE(predictor(extract_with({{"transition-property", ""}}), BinaryPredictor::has_animation));
  EXPECT_FALSE(predictor(extract_with({{"transition-property", "none"}}), BinaryPredictor::has_animation));
  EXPECT_TRUE(predictor(extract_with({{"animation-name", "spin"}}), BinaryPredictor::has_animation));
}

TEST(Extraction, ZIndexAutoIsDefault) {
  EXPECT_FALSE(predictor(extract_with({{"z-index", "auto"}}), BinaryPredictor::has_z_index));
  EXPECT_TRUE(predictor(extract_with({{"z-index", "3"}}), BinaryPredictor::has_z_index));
}

TEST(Extraction, MissingPropertyIsNamed) {
  auto obs = default_observation();
  obs.computed_style.erase("cursor");
  try {
    extract_features(obs, {});
    FAIL() << "expected an error";
  } catch (const IncompleteObservationError& e) {
    EXPECT_NE(std::string(e.what()).find("cursor"), std::string::npos);
  }
}

TEST(Extraction, NumericPropertiesAreParsed) {
  auto fv = extract_with({{"opacity", "0.25"}, {"flex-grow", "2"}});
  EXPECT_EQ(std::get<double>(fv.css[css_index("opacity")]), 0.25);
  EXPECT_EQ(std::get<double>(fv.css[css_index("flex-grow")]), 2.0);
  EXPECT_THROW(extract_with({{"opacity", "half"}}), IncompleteObservationError);
}

TEST(Extraction, NegativePositionIsKept) {
  auto obs = default_observation();
  obs.bounding_box = {-40, -5, 10, 10};
  auto fv = extract_features(obs, {});
  EXPECT_EQ(fv.box.x, -40);
  EXPECT_EQ(fv.box.y, -5);
  obs.bounding_box.width = -1;
  EXPECT_THROW(extract_features(obs, {}), IncompleteObservationError);
}

TEST(Extraction, UnknownExtraPropertiesAreIgnored) {
  auto obs = default_observation();
  obs.computed_style["-webkit-user-drag"] = "element";
  obs.computed_style["caret-color"] = "red";
  EXPECT_EQ(extract_features(obs, {}), extract_features(default_observation(), {}));
}

TEST(Extraction, IsPure) {
  auto obs = default_observation();
  obs.computed_style["cursor"] = "pointer";
  EXPECT_EQ(extract_features(obs, {1, 2, 3}), extract_features(obs, {1, 2, 3}));
}

// Perturbing a property that feeds no predictor never flips any predictor.
TEST(Extraction, PredictorsDependOnlyOnSources) {
  std::set<std::string> sources;
  for (const auto& rule : binary_predictor_defaults())
    for (auto s : rule.sources) sources.emplace(s);
  const std::vector<std::string> variants = {"none", "auto", "pointer", "solid", "1", "x", "rgb(1, 2, 3)"};
  util::Rng rng(3);
  for (int round = 0; round < 30; ++round) {
    auto base = default_observation();
    // Random base assignment for the sources themselves.
    for (const auto& s : sources)
      if (util::uniform_below(rng, 2)) base.computed_style[s] = variants[util::uniform_below(rng, variants.size())];
    const auto ref = extract_features(base, {});
    for (const auto& prop : required_properties()) {
      if (sources.contains(prop) || prop == "opacity" || prop == "flex-grow") continue;
      auto obs = base;
      obs.computed_style[prop] = variants[util::uniform_below(rng, variants.size())];
      ASSERT_EQ(extract_features(obs, {}).binary, ref.binary) << prop;
    }
  }
}

TEST(Extraction, PredictorTableListsTenRules) {
  const auto& t = binary_predictor_defaults();
  EXPECT_EQ(t.size(), 10u);
  std::set<BinaryPredictor> seen;
  for (const auto& r : t) seen.insert(r.predictor);
  EXPECT_EQ(seen.size(), 10u);
}

TEST(Extraction, TransparencyParser) {
  EXPECT_TRUE(is_fully_transparent("rgba(10, 20, 30, 0)"));
  EXPECT_TRUE(is_fully_transparent("rgb(10 20 30 / 0%)"));
  EXPECT_FALSE(is_fully_transparent("rgba(10, 20, 30, 0.5)"));
  EXPECT_FALSE(is_fully_transparent("rgb(0, 0, 0)"));
  EXPECT_FALSE(is_fully_transparent("red"));
}
