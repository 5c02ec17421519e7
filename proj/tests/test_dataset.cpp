#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "stylex/dataset/corpus.hpp"
#include "stylex/dataset/corpus_io.hpp"
#include "support/builders.hpp"

using namespace stylex;
using namespace stylex::testing;

TEST(Labels, ChildInheritsParentListener) {
  auto s = propagate_labels(tree_snapshot({std::nullopt, 0}, {{EventType::click}, {}}));
  EXPECT_TRUE(s.elements[1].effective_labels.contains(EventType::click));
  EXPECT_TRUE(s.elements[0].effective_labels.contains(EventType::click));
}

TEST(Labels, AnchorWithHrefGetsClick) {
  std::vector<ObservedElement> els(2);
  els[0].observation = default_observation("body");
  els[1].observation = default_observation("a");
  els[1].observation.attributes["href"] = "/x";
  els[1].parent = 0;
  auto s = propagate_labels(build_snapshot("s", els, "<b/>", "site"));
  EXPECT_TRUE(s.elements[1].is_default_actionable);
  EXPECT_TRUE(s.elements[1].effective_labels.contains(EventType::click));
  EXPECT_TRUE(s.elements[0].effective_labels.empty());
}

TEST(Labels, UnlabeledLeafStaysEmpty) {
  auto s = propagate_labels(tree_snapshot({std::nullopt, 0, 0}, {{}, {EventType::mouseover}, {}}));
  EXPECT_TRUE(s.elements[2].effective_labels.empty());
  EXPECT_TRUE(s.elements[0].effective_labels.empty());
}

TEST(Labels, AllFiveEventsBubble) {
  for (EventType t : kAllEventTypes) {
    auto s = propagate_labels(tree_snapshot({std::nullopt, 0, 1}, {{t}, {}, {}}));
    EXPECT_TRUE(s.elements[2].effective_labels.contains(t)) << to_string(t);
  }
}

TEST(Labels, DefaultActionables) {
  EXPECT_TRUE(is_default_actionable("a", {{"href", "x"}}));
  EXPECT_FALSE(is_default_actionable("a", {}));
  EXPECT_TRUE(is_default_actionable("button", {}));
  EXPECT_TRUE(is_default_actionable("input", {{"type", "submit"}}));
  EXPECT_TRUE(is_default_actionable("input", {{"type", "button"}}));
  EXPECT_TRUE(is_default_actionable("input", {{"type", "image"}}));
  EXPECT_FALSE(is_default_actionable("input", {{"type", "text"}}));
  EXPECT_FALSE(is_default_actionable("input", {}));
  EXPECT_FALSE(is_default_actionable("div", {{"href", "x"}}));
}

TEST(Labels, PropagationMatchesAncestorOracle) {
  util::Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + util::uniform_below(rng, 40);
    auto parents = random_parents(rng, n);
    std::vector<EventSet> listeners(n);
    for (auto& l : listeners)
      if (util::uniform_below(rng, 4) == 0) l = EventSet::from_bits(static_cast<std::uint8_t>(1 + util::uniform_below(rng, 31)));
    auto s = propagate_labels(tree_snapshot(parents, listeners));
    for (std::size_t i = 0; i < n; ++i)
      for (EventType ev : kAllEventTypes)
        ASSERT_EQ(s.elements[i].effective_labels.contains(ev), ancestor_has_listener(parents, listeners, i, ev));
  }
}

TEST(Labels, MonotoneAndIdempotent) {
  util::Rng rng(2);
  auto parents = random_parents(rng, 30);
  std::vector<EventSet> listeners(30);
  listeners[3] = {EventType::click};
  listeners[7] = {EventType::mousedown};
  auto base = tree_snapshot(parents, listeners);
  base.elements[10].effective_labels.insert(EventType::touchstart);
  auto once = propagate_labels(base);
  EXPECT_EQ(propagate_labels(once), once);
  for (std::size_t i = 0; i < 30; ++i) {
    EXPECT_TRUE(base.elements[i].effective_labels.is_subset_of(once.elements[i].effective_labels));
    EXPECT_TRUE(once.elements[i].direct_listeners.is_subset_of(once.elements[i].effective_labels));
  }
}

TEST(Labels, StripRemovesGroundTruth) {
  auto s = strip_ground_truth(propagate_labels(tree_snapshot({std::nullopt, 0}, {{EventType::click}, {}})));
  for (const auto& e : s.elements) {
    EXPECT_TRUE(e.direct_listeners.empty());
    EXPECT_TRUE(e.effective_labels.empty());
  }
}

namespace {

Corpus labeled(std::size_t pos, std::size_t neg, std::size_t sites = 1) {
  std::vector<LabeledElement> rows;
  for (std::size_t i = 0; i < pos + neg; ++i) {
    auto r = style_row({{"cursor", i < pos ? "pointer" : "auto"}}, i < pos, EventType::click,
                       "site" + std::to_string(i % sites));
    r.element_id = i;
    rows.push_back(r);
  }
  return corpus_of(rows);
}

std::size_t count_pos(const Corpus& c) {
  return static_cast<std::size_t>(
      std::count_if(c.rows.begin(), c.rows.end(), [](const auto& r) { return is_positive(r, EventType::click); }));
}

}  // namespace

TEST(Balance, TenAgainstThirty) {
  auto b = balance(labeled(10, 30), EventType::click, 1);
  EXPECT_EQ(b.rows.size(), 20u);
  EXPECT_EQ(count_pos(b), 10u);
}

TEST(Balance, AlreadyBalancedIsUnchanged) {
  auto c = labeled(5, 5);
  auto b = balance(c, EventType::click, 9);
  EXPECT_EQ(b.rows, c.rows);
}

TEST(Balance, NoNegatives) {
  auto b = balance(labeled(3, 0), EventType::click, 1);
  EXPECT_EQ(b.rows.size(), 3u);
}

TEST(Balance, NoPositivesIsAnError) {
  EXPECT_THROW(balance(labeled(0, 4), EventType::click, 1), EmptyClassError);
}

TEST(Balance, SeedDeterminesRemovalAndRowsAreASubset) {
  auto c = labeled(10, 40);
  auto a = balance(c, EventType::click, 123);
  auto b = balance(c, EventType::click, 123);
  EXPECT_EQ(a.rows, b.rows);
  auto d = balance(c, EventType::click, 124);
  EXPECT_NE(a.rows, d.rows);
  for (const auto& r : a.rows)
    EXPECT_NE(std::find(c.rows.begin(), c.rows.end(), r), c.rows.end());
}

TEST(Split, TenSites) {
  auto s = split_by_site(labeled(20, 20, 10), 0.2, 4);
  EXPECT_EQ(s.train.sites.size(), 8u);
  EXPECT_EQ(s.test.sites.size(), 2u);
}

TEST(Split, FiveSitesRoundTowardTest) {
  auto s = split_by_site(labeled(10, 10, 5), 0.2, 4);
  EXPECT_EQ(s.train.sites.size(), 4u);
  EXPECT_EQ(s.test.sites.size(), 1u);
}

TEST(Split, TwoSitesDeterministic) {
  auto c = labeled(4, 4, 2);
  auto a = split_by_site(c, 0.2, 77);
  auto b = split_by_site(c, 0.2, 77);
  EXPECT_EQ(a.test.sites, b.test.sites);
  EXPECT_EQ(a.test.sites.size(), 1u);
  EXPECT_EQ(a.train.sites.size(), 1u);
}

TEST(Split, SitesAreDisjointAndRowsFollowSites) {
  auto c = labeled(30, 30, 7);
  auto s = split_by_site(c, 0.2, 8);
  for (const auto& site : s.train.sites) EXPECT_FALSE(s.test.sites.contains(site));
  for (const auto& r : s.train.rows) EXPECT_TRUE(s.train.sites.contains(r.site_id));
  for (const auto& r : s.test.rows) EXPECT_TRUE(s.test.sites.contains(r.site_id));
  EXPECT_EQ(s.train.rows.size() + s.test.rows.size(), c.rows.size());
}

TEST(Split, OneSiteCannotSplit) {
  EXPECT_THROW(split_by_site(labeled(3, 3, 1), 0.2, 1), CannotSplitError);
}

TEST(CorpusIo, EmptyCorpusIsHeaderOnly) {
  Corpus c;
  c.provenance = "none";
  const std::string text = corpus_to_string(c);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  std::istringstream in(text);
  EXPECT_EQ(read_corpus(in), c);
}

TEST(CorpusIo, OneRowIsTwoLines) {
  auto c = labeled(1, 0);
  const std::string text = corpus_to_string(c);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  std::istringstream in(text);
  EXPECT_EQ(read_corpus(in), c);
}

TEST(CorpusIo, FullRowsRoundTripByteIdentical) {
  util::Rng rng(44);
  std::vector<LabeledElement> rows;
  for (int i = 0; i < 50; ++i) {
    StyleMap m;
    m["cursor"] = i % 3 ? "pointer" : "auto";
    m["opacity"] = std::to_string(0.01 * static_cast<double>(util::uniform_below(rng, 100)));
    m["background-image"] = i % 4 ? "none" : "url(\"x\\\"y.png\")";
    m["font-family"] = "\"Helvetica Neue\", Arial";
    m["z-index"] = std::to_string(util::uniform_below(rng, 5));
    auto r = style_row(m, i % 2, kAllEventTypes[i % 5], "site" + std::to_string(i % 3),
                       {-3.25 + i, 1.0 / 3.0, 100.5, 0.1});
    r.element_id = static_cast<ElementId>(i);
    r.snapshot_id = "snap-" + std::to_string(i / 10);
    r.is_default_actionable = i % 7 == 0;
    if (r.is_default_actionable) r.effective_labels.insert(EventType::click);
    r.tag_name = i % 7 == 0 ? "a" : "div";
    if (i % 7 == 0) r.attributes["href"] = "/p" + std::to_string(i);
    r.features.dom_depth = i;
    r.features.descendant_count = 2 * i;
    r.features.subtree_height = i / 2;
    rows.push_back(r);
  }
  auto c = corpus_of(rows, "round-trip fixture");
  const std::string first = corpus_to_string(c);
  std::istringstream in(first);
  const Corpus back = read_corpus(in);
  EXPECT_EQ(back, c);
  EXPECT_EQ(corpus_to_string(back), first);
}

TEST(CorpusIo, MalformedLineReportsLineNumber) {
  std::string text = corpus_to_string(labeled(2, 0));
  text += "{not json\n";
  std::istringstream in(text);
  try {
    read_corpus(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(CorpusIo, HeaderSchemaMismatchIsRejected) {
  std::string text = corpus_to_string(labeled(1, 0));
  auto pos = text.find("\"word-break\"");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 12, "\"word-wrap\"");
  std::istringstream in(text);
  EXPECT_THROW(read_corpus(in), SchemaError);
}

TEST(CorpusIo, SnapshotRowsSkipUnknownListeners) {
  auto s = tree_snapshot({std::nullopt, 0, 0});
  s.elements[2].listeners_known = false;
  Corpus c;
  add_snapshot(c, s);
  EXPECT_EQ(c.rows.size(), 2u);
  EXPECT_EQ(c.sites, std::set<std::string>{"site"});
}
