#include <gtest/gtest.h>

#include <algorithm>

#include "stylex/ranking/style_ranking.hpp"
#include "support/builders.hpp"

using namespace stylex;
using namespace stylex::testing;

namespace {

StyleSignature random_signature(util::Rng& rng, std::size_t alphabet = 3) {
  StyleSignature s;
  for (std::size_t i = 0; i < kRequiredPropertyCount; ++i)
    s.values.push_back(std::string(1, static_cast<char>('a' + util::uniform_below(rng, alphabet))));
  return s;
}

StyleSignature sig_of(const StyleMap& overrides, BoundingBox box = {0, 0, 10, 10}) {
  return signature_of(style_row(overrides, false, EventType::click, "s", box).features);
}

}  // namespace

TEST(Signature, IgnoresPosition) {
  EXPECT_EQ(sig_of({{"cursor", "pointer"}}, {0, 0, 10, 10}), sig_of({{"cursor", "pointer"}}, {50, -20, 99, 3}));
  auto a = style_row({}, false);
  auto b = a;
  b.features.dom_depth = 9;
  b.features.descendant_count = 3;
  b.features.subtree_height = 2;
  EXPECT_EQ(signature_of(a.features), signature_of(b.features));
}

TEST(Signature, KeepsConcreteSourceValues) {
  EXPECT_NE(sig_of({{"background-image", "url(a.png)"}}), sig_of({{"background-image", "url(b.png)"}}));
  EXPECT_EQ(sig_of({}).values.size(), kRequiredPropertyCount);
}

TEST(Delta, Examples) {
  util::Rng rng(1);
  auto a = random_signature(rng);
  EXPECT_EQ(delta(a, a), 0.0);
  auto b = a;
  b.values[5] = "zz";
  EXPECT_DOUBLE_EQ(delta(a, b), 1.0 / static_cast<double>(kRequiredPropertyCount));
  auto c = a;
  for (auto& v : c.values) v += "!";
  EXPECT_EQ(delta(a, c), 1.0);
  StyleSignature shorter;
  shorter.values = {"x"};
  EXPECT_THROW(delta(a, shorter), SchemaError);
}

TEST(Delta, IsAMetric) {
  util::Rng rng(2);
  for (int i = 0; i < 2000; ++i) {
    auto a = random_signature(rng, 2), b = random_signature(rng, 2), c = random_signature(rng, 2);
    ASSERT_EQ(delta(a, b), delta(b, a));
    ASSERT_GE(delta(a, b), 0.0);
    ASSERT_LE(delta(a, b), 1.0);
    ASSERT_EQ(delta(a, b) == 0.0, a == b);
    ASSERT_LE(delta(a, c), delta(a, b) + delta(b, c) + 1e-12);
  }
}

TEST(Registry, Examples) {
  util::Rng rng(3);
  auto s = random_signature(rng), t = random_signature(rng);
  ExaminationRegistry reg;
  reg.record_examination(s);
  ASSERT_EQ(reg.entries().size(), 1u);
  EXPECT_EQ(reg.entries()[0].counter, 1u);
  reg.record_examination(s);
  ASSERT_EQ(reg.entries().size(), 1u);
  EXPECT_EQ(reg.entries()[0].counter, 2u);
  reg.record_examination(t);
  ASSERT_EQ(reg.entries().size(), 2u);
  EXPECT_EQ(reg.entries()[1].counter, 1u);
  EXPECT_EQ(reg.total_examinations(), 3u);
}

TEST(Registry, EpsilonMatchesFirstCloseEntryStrictly) {
  util::Rng rng(4);
  auto base = random_signature(rng);
  const double one = 1.0 / static_cast<double>(kRequiredPropertyCount);
  ExaminationRegistry reg(2.5 * one);
  reg.record_examination(base);
  auto near = base;
  near.values[0] = "q";
  near.values[1] = "q";
  reg.record_examination(near);  // distance 2/60 < 2.5/60
  EXPECT_EQ(reg.entries().size(), 1u);
  auto far = base;
  for (int i = 0; i < 3; ++i) far.values[static_cast<std::size_t>(i)] = "w";
  reg.record_examination(far);  // 3/60 not < 2.5/60
  EXPECT_EQ(reg.entries().size(), 2u);

  ExaminationRegistry exact(2.0 * one);
  exact.record_examination(base);
  exact.record_examination(near);  // distance exactly epsilon: no match
  EXPECT_EQ(exact.entries().size(), 2u);
}

TEST(Registry, RoundTrip) {
  util::Rng rng(5);
  ExaminationRegistry reg(0.125);
  for (int i = 0; i < 40; ++i) reg.record_examination(random_signature(rng, 2));
  const auto text = reg.to_string();
  auto back = ExaminationRegistry::from_string(text);
  EXPECT_EQ(back, reg);
  EXPECT_EQ(back.to_string(), text);
}

TEST(Registry, RejectsInconsistentCounters) {
  util::Rng rng(6);
  ExaminationRegistry reg;
  reg.record_examination(random_signature(rng));
  auto text = reg.to_string();
  auto pos = text.find("\"total_examinations\": 1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 23, "\"total_examinations\": 2");
  EXPECT_THROW(ExaminationRegistry::from_string(text), SchemaError);
  EXPECT_THROW(ExaminationRegistry::from_string("{"), ParseError);
}

TEST(Ranking, EmptyRegistryKeepsOrder) {
  util::Rng rng(7);
  std::vector<RankCandidate> cands;
  for (std::size_t i = 0; i < 6; ++i) cands.push_back({i, random_signature(rng), {EventType::click}});
  EXPECT_EQ(rank_actionables(ExaminationRegistry{}, cands), cands);
}

TEST(Ranking, UnseenThenAscendingCounter) {
  util::Rng rng(8);
  auto sa = random_signature(rng), sb = random_signature(rng), sc = random_signature(rng);
  ExaminationRegistry reg;
  for (int i = 0; i < 3; ++i) reg.record_examination(sa);
  reg.record_examination(sb);
  std::vector<RankCandidate> cands = {{0, sa, {}}, {1, sb, {}}, {2, sc, {}}};
  auto out = rank_actionables(reg, cands);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].id, 2u);
  EXPECT_EQ(out[1].id, 1u);
  EXPECT_EQ(out[2].id, 0u);
}

TEST(Ranking, SameEntryKeepsInputOrder) {
  util::Rng rng(9);
  auto s = random_signature(rng);
  ExaminationRegistry reg;
  reg.record_examination(s);
  std::vector<RankCandidate> cands = {{5, s, {}}, {3, s, {}}};
  auto out = rank_actionables(reg, cands);
  EXPECT_EQ(out[0].id, 5u);
  EXPECT_EQ(out[1].id, 3u);
}

TEST(Ranking, RecordingNeverMovesMatchingCandidateEarlier) {
  util::Rng rng(10);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<StyleSignature> pool;
    for (int i = 0; i < 4; ++i) pool.push_back(random_signature(rng, 2));
    ExaminationRegistry reg;
    for (int i = 0; i < 6; ++i) reg.record_examination(pool[util::uniform_below(rng, 4)]);
    std::vector<RankCandidate> cands;
    for (std::size_t i = 0; i < 8; ++i) cands.push_back({i, pool[util::uniform_below(rng, 4)], {}});
    const auto& s = pool[util::uniform_below(rng, 4)];
    auto before = rank_actionables(reg, cands);
    auto after_reg = reg;
    after_reg.record_examination(s);
    auto after = rank_actionables(after_reg, cands);
    auto pos = [](const std::vector<RankCandidate>& v, std::size_t id) {
      return std::find_if(v.begin(), v.end(), [&](const auto& c) { return c.id == id; }) - v.begin();
    };
    for (const auto& c : cands)
      if (c.signature == s) {
        ASSERT_GE(pos(after, c.id), pos(before, c.id));
      }
  }
}
