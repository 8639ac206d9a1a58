#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <tuple>

#include "aspectlens/insights.h"
#include "aspectlens/util.h"
#include "support/oracles.h"

using namespace aspectlens;
using namespace aspectlens::insights;
using sentiment::Category;

namespace {

LabeledSentence ls(std::string entity, std::string aspect, Category c,
                   std::vector<std::string> tokens = {}) {
  static int next = 0;
  return {"s" + std::to_string(next++), std::move(entity), std::move(aspect), c, std::move(tokens)};
}

std::vector<LabeledSentence> random_labels(Rng& rng, std::size_t n) {
  const std::vector<std::string> entities = {"a", "b", "c"};
  const std::vector<std::string> aspects = {"Null", "Food", "Seat", "Staff"};
  std::vector<LabeledSentence> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(ls(entities[rng.below(3)], aspects[rng.below(4)],
                     static_cast<Category>(rng.below(3))));
  return out;
}

}  // namespace

TEST(Aos, ProportionsByHand) {
  std::vector<LabeledSentence> s;
  for (int i = 0; i < 6; ++i) s.push_back(ls("x", "Food", Category::positive));
  s.push_back(ls("x", "Food", Category::neutral));
  for (int i = 0; i < 3; ++i) s.push_back(ls("x", "Food", Category::negative));
  s.push_back(ls("x", "Null", Category::negative));
  s.push_back(ls("y", "Food", Category::negative));
  const auto sum = aggregate_aos(s, "x");
  const auto& f = sum.aspects.at("Food");
  EXPECT_DOUBLE_EQ(f.share(Category::positive), 0.6);
  EXPECT_DOUBLE_EQ(f.share(Category::neutral), 0.1);
  EXPECT_DOUBLE_EQ(f.share(Category::negative), 0.3);
  EXPECT_EQ(sum.classified, 10u);
  EXPECT_EQ(sum.excluded_null, 1u);
  EXPECT_FALSE(sum.aspects.contains("Null"));
  EXPECT_TRUE(aggregate_aos(s, "nobody").empty());
}

TEST(Aos, MatchesGroupByOracleAndTotals) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_labels(rng, rng.below(120));
    std::map<std::tuple<std::string, std::string, int>, std::size_t> want;
    std::map<std::string, std::size_t> per_entity, nulls;
    for (const auto& x : s) {
      ++per_entity[x.entity_id];
      if (x.aspect == "Null") ++nulls[x.entity_id];
      else ++want[{x.entity_id, x.aspect, static_cast<int>(x.sentiment)}];
    }
    const auto all = aggregate_all(s);
    EXPECT_EQ(all.size(), per_entity.size());
    for (const auto& sum : all) {
      std::size_t total = sum.excluded_null;
      EXPECT_EQ(sum.excluded_null, nulls[sum.entity_id]);
      for (const auto& [aspect, c] : sum.aspects) {
        EXPECT_EQ(c.positive, (want[{sum.entity_id, aspect, 2}]));
        EXPECT_EQ(c.neutral, (want[{sum.entity_id, aspect, 1}]));
        EXPECT_EQ(c.negative, (want[{sum.entity_id, aspect, 0}]));
        EXPECT_NEAR(c.share(Category::positive) + c.share(Category::neutral) +
                        c.share(Category::negative), 1.0, 1e-9);
        total += c.total();
      }
      EXPECT_EQ(total, per_entity[sum.entity_id]);
    }
  }
}

TEST(Verdicts, Examples) {
  EXPECT_EQ(classify_net(0.60 - 0.30, 0.10), VerdictKind::strength);
  EXPECT_EQ(classify_net(0.42 - 0.45, 0.10), VerdictKind::mixed);
  EXPECT_EQ(classify_net(0.0, 0.0), VerdictKind::mixed);
  EXPECT_EQ(classify_net(-0.2, 0.10), VerdictKind::weakness);

  OpinionSummary s;
  s.entity_id = "x";
  s.aspects["Food"] = {6, 1, 3};
  s.aspects["Seat"] = {42, 13, 45};
  s.aspects["Staff"] = {1, 0, 9};
  s.classified = 120;
  const auto v = verdicts(s, 0.10);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].kind, VerdictKind::strength);
  EXPECT_EQ(v[1].kind, VerdictKind::mixed);
  EXPECT_EQ(v[2].kind, VerdictKind::weakness);
  EXPECT_THROW(verdicts(s, 1.0), ValidationError);
  EXPECT_THROW(verdicts(s, -0.1), ValidationError);
}

TEST(Verdicts, ScaleInvariant) {
  Rng rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    OpinionSummary s;
    s.aspects["A"] = {rng.below(30), rng.below(30), rng.below(30)};
    if (s.aspects["A"].total() == 0) continue;
    const double margin = static_cast<double>(rng.below(20)) / 20.0;
    const auto base = verdicts(s, margin);
    for (std::size_t f = 2; f <= 9; ++f) {
      OpinionSummary t;
      const auto& c = s.aspects["A"];
      t.aspects["A"] = {c.positive * f, c.neutral * f, c.negative * f};
      EXPECT_EQ(verdicts(t, margin)[0].kind, base[0].kind) << "factor " << f;
    }
  }
}

TEST(Bigrams, FixtureAndOracle) {
  const std::vector<std::vector<std::string>> s = {{"wait", "connect", "flight"},
                                                   {"incom", "flight", "late", "wait", "connect"},
                                                   {"incom", "flight"},
                                                   {"seat"}};
  const auto r = frequent_bigrams(s, 0.15);
  EXPECT_EQ(r.analyzed, 4u);
  const auto want = aspectlens::testing::bigram_oracle(s, 0.15);
  ASSERT_EQ(r.bigrams.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(r.bigrams[i].first, want[i].first);
    EXPECT_EQ(r.bigrams[i].second, want[i].second);
    EXPECT_EQ(r.bigrams[i].count, want[i].count);
  }
  EXPECT_EQ(r.bigrams[0].first, "incom");
  EXPECT_EQ(r.bigrams[1].first, "wait");
  EXPECT_DOUBLE_EQ(r.bigrams[0].share, 0.5);
  EXPECT_TRUE(frequent_bigrams({}, 0.15).bigrams.empty());
  EXPECT_THROW(frequent_bigrams(s, 0.0), ValidationError);
  EXPECT_THROW(frequent_bigrams(s, 1.5), ValidationError);
}

TEST(Bigrams, SupportFloor) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<std::string>> s(1 + rng.below(40));
    for (auto& toks : s)
      for (std::size_t i = 0, n = rng.below(8); i < n; ++i) toks.push_back("t" + std::to_string(rng.below(5)));
    const double threshold = 0.05 + 0.3 * rng.uniform();
    const auto r = frequent_bigrams(s, threshold);
    for (const auto& b : r.bigrams) {
      EXPECT_GE(static_cast<double>(b.sentences), std::ceil(threshold * double(s.size())));
      EXPECT_GE(b.share, 0.0);
      EXPECT_LE(b.share, 1.0);
    }
    for (std::size_t i = 1; i < r.bigrams.size(); ++i)
      EXPECT_GE(r.bigrams[i - 1].count, r.bigrams[i].count);
  }
}

TEST(Matrix, MinimalGridAndNa) {
  OpinionSummary a, b;
  a.entity_id = "a";
  b.entity_id = "b";
  a.aspects["Food"] = {3, 1, 1};
  b.aspects["Food"] = {1, 1, 3};
  a.classified = 5;
  b.classified = 5;
  auto m = competitor_matrix({a, b});
  ASSERT_EQ(m.aspects.size(), 1u);
  ASSERT_EQ(m.entities.size(), 2u);
  EXPECT_DOUBLE_EQ(*m.cells[0][0].net, 0.4);
  EXPECT_DOUBLE_EQ(*m.cells[0][1].net, -0.4);

  a.aspects["First Class"] = {2, 0, 0};
  a.classified = 7;
  m = competitor_matrix({a, b});
  ASSERT_EQ(m.aspects.size(), 2u);
  const auto fc = std::find(m.aspects.begin(), m.aspects.end(), "First Class") - m.aspects.begin();
  EXPECT_FALSE(m.cells[fc][1].net.has_value());
  EXPECT_NE(matrix_csv(m).find("N/A"), std::string::npos);
  EXPECT_EQ(matrix_text(m, false).find("\x1b["), std::string::npos);
  EXPECT_NE(matrix_text(m, true).find("\x1b["), std::string::npos);
  EXPECT_THROW(competitor_matrix({a}), ValidationError);
}

TEST(Matrix, RoundTripsSummaries) {
  Rng rng(5);
  std::vector<LabeledSentence> s;
  const std::vector<std::string> aspects = {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11"};
  for (int i = 0; i < 600; ++i)
    s.push_back(ls("e" + std::to_string(rng.below(3)), aspects[rng.below(11)],
                   static_cast<Category>(rng.below(3))));
  const auto summaries = aggregate_all(s);
  const auto back = matrix_to_summaries(competitor_matrix(summaries));
  ASSERT_EQ(back.size(), summaries.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].entity_id, summaries[i].entity_id);
    ASSERT_EQ(back[i].aspects.size(), summaries[i].aspects.size());
    for (const auto& [k, c] : summaries[i].aspects) {
      EXPECT_EQ(back[i].aspects.at(k).positive, c.positive);
      EXPECT_EQ(back[i].aspects.at(k).neutral, c.neutral);
      EXPECT_EQ(back[i].aspects.at(k).negative, c.negative);
    }
    EXPECT_EQ(back[i].classified, summaries[i].classified);
  }
}
