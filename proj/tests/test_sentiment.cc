#include <gtest/gtest.h>

#include <cctype>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "aspectlens/sentiment.h"
#include "aspectlens/util.h"

using namespace aspectlens;
using namespace aspectlens::sentiment;

namespace {

Lexicon lexicon(std::initializer_list<std::pair<const std::string, double>> entries,
                double lo = -5.0, double hi = 5.0) {
  Lexicon l;
  l.entries = entries;
  l.scale_min = lo;
  l.scale_max = hi;
  return l;
}

Modifiers modifiers() {
  Modifiers m;
  m.entries = {{"not", {ModifierKind::negate, -0.74}},
               {"never", {ModifierKind::negate, -0.74}},
               {"very", {ModifierKind::boost, 0.293}},
               {"slightly", {ModifierKind::dampen, 0.293}}};
  return m;
}

// Standalone evaluator for the rule-augmented style over space separated
// words; trailing punctuation is stripped and every '!' is counted.
double rule_oracle(const std::string& sentence, const Lexicon& lex, const Modifiers& mods) {
  std::vector<std::string> raw;
  std::istringstream in(sentence);
  std::size_t bangs = 0;
  for (std::string w; in >> w;) {
    for (char c : w) bangs += c == '!';
    while (!w.empty() && !std::isalnum(static_cast<unsigned char>(w.back()))) w.pop_back();
    if (!w.empty()) raw.push_back(w);
  }
  auto is_caps = [](const std::string& w) {
    if (w.size() < 2) return false;
    for (char c : w)
      if (std::islower(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::size_t caps = 0;
  for (const auto& w : raw) caps += is_caps(w);
  const bool mixed = caps > 0 && caps < raw.size();
  std::vector<std::string> low;
  for (const auto& w : raw) low.push_back(to_lower(w));

  const double decay[3] = {1.0, 0.95, 0.9};
  double s = 0.0;
  for (std::size_t i = 0; i < low.size(); ++i) {
    auto it = lex.entries.find(low[i]);
    if (it == lex.entries.end() || it->second == 0.0) continue;
    double v = it->second;
    const double sign = v > 0 ? 1 : -1;
    if (mixed && is_caps(raw[i])) v += sign * 0.733;
    for (std::size_t d = 1; d <= 3 && d <= i; ++d) {
      auto m = mods.entries.find(low[i - d]);
      if (m == mods.entries.end()) continue;
      if (m->second.kind == ModifierKind::boost) v += sign * 0.293 * decay[d - 1];
      if (m->second.kind == ModifierKind::dampen) v -= sign * 0.293 * decay[d - 1];
    }
    for (std::size_t d = 1; d <= 3 && d <= i; ++d) {
      auto m = mods.entries.find(low[i - d]);
      if (m != mods.entries.end() && m->second.kind == ModifierKind::negate) v *= -0.74;
    }
    s += v;
  }
  if (s != 0.0) s += (s > 0 ? 1 : -1) * 0.292 * static_cast<double>(std::min<std::size_t>(bangs, 3));
  return s / std::sqrt(s * s + 15.0);
}

double rule(const std::string& s, const Lexicon& lex) {
  return score_rule_augmented(analyze_text(s), lex, modifiers()).value;
}

}  // namespace

TEST(ScoreSum, Examples) {
  const auto lex = lexicon({{"good", 3}, {"bad", -3}});
  EXPECT_DOUBLE_EQ(score_sum(analyze_text("the flight"), lex).value, 0.0);
  EXPECT_DOUBLE_EQ(score_sum(analyze_text("good good bad"), lex).value, 3.0);
  const auto s = score_sum(analyze_text("Good, GOOD bad!"), lex);
  EXPECT_DOUBLE_EQ(s.value, 3.0);
  EXPECT_DOUBLE_EQ(s.upper, 15.0);
  EXPECT_DOUBLE_EQ(s.lower, -15.0);
}

TEST(ScoreSum, MatchesSummationOverShippedLexicon) {
  const auto lex = Lexicon::load(std::filesystem::path(ASPECTLENS_DATA_DIR) / "lexicons" / "valence_sum.tsv", -5, 5);
  ASSERT_GT(lex.entries.size(), 10u);
  std::vector<std::string> words;
  for (const auto& [w, v] : lex.entries) words.push_back(w);
  std::sort(words.begin(), words.end());
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::string s;
    double want = 0.0;
    for (std::size_t i = 0, n = rng.below(10); i < n; ++i) {
      if (rng.below(2)) {
        const auto& w = words[rng.below(words.size())];
        s += w + " ";
        want += lex.entries.at(w);
      } else {
        s += "xq ";
      }
    }
    EXPECT_NEAR(score_sum(analyze_text(s), lex).value, want, 1e-12) << s;
  }
}

TEST(ScoreScaled, Examples) {
  const auto lex = lexicon({{"great", 0.8}, {"meh", -0.3}, {"good", 0.4}, {"fine", 0.6}}, -1, 1);
  EXPECT_DOUBLE_EQ(score_scaled(analyze_text("nothing here"), lex).value, 0.0);
  EXPECT_NEAR(score_scaled(analyze_text("great but meh and good"), lex).value, 0.5, 1e-12);
  const double plain = score_scaled(analyze_text("fine"), lex).value;
  const double loud = score_scaled(analyze_text("fine!!!"), lex).value;
  EXPECT_GT(std::abs(loud), std::abs(plain));
  EXPECT_NEAR(loud, 0.6 * 1.292, 1e-12);
  EXPECT_DOUBLE_EQ(score_scaled(analyze_text("great!!!"), lex).value, 1.0);
  const auto strong = lexicon({{"superb", 0.95}}, -1, 1);
  EXPECT_DOUBLE_EQ(score_scaled(analyze_text("superb!!"), strong).value, 1.0);
}

TEST(ScoreRule, Examples) {
  const auto lex = lexicon({{"good", 1.9}, {"bad", -2.5}, {"awful", -3.1}, {"nice", 1.8}});
  EXPECT_DOUBLE_EQ(rule("", lex), 0.0);
  const double good = rule("good", lex);
  const double not_good = rule("not good", lex);
  EXPECT_GT(good, 0.0);
  EXPECT_LT(not_good, 0.0);
  // Before normalization: 1.9 versus -0.74 * 1.9.
  auto raw = [](double v) { return v * std::sqrt(15.0) / std::sqrt(1.0 - v * v); };
  EXPECT_NEAR(raw(not_good), -0.74 * raw(good), 1e-9);
}

TEST(ScoreRule, MatchesIndependentEvaluator) {
  const auto lex = lexicon({{"good", 1.9}, {"bad", -2.5}, {"awful", -3.1}, {"nice", 1.8},
                            {"late", -1.2}, {"friendly", 2.2}});
  for (const std::string s :
       {"good", "not good", "very good", "slightly bad", "The crew was VERY friendly!!",
        "never very nice", "late late late!!!!", "AWFUL food and NOT good at all",
        "it was not the worst but bad", "Nice. Good! BAD!", "very very very good",
        "not slightly awful!", "ALL CAPS GOOD", "friendly crew but late and awful"}) {
    EXPECT_NEAR(rule(s, lex), rule_oracle(s, lex, modifiers()), 1e-9) << s;
  }
}

TEST(ToCategory, BoundariesAndMonotone) {
  const Thresholds t{-0.05, 0.05};
  EXPECT_EQ(to_category(0.05, t), Category::neutral);
  EXPECT_EQ(to_category(-0.05, t), Category::neutral);
  EXPECT_EQ(to_category(0.0501, t), Category::positive);
  EXPECT_EQ(to_category(-0.0501, t), Category::negative);
  EXPECT_DOUBLE_EQ(default_thresholds(Style::scaled).plus, 0.05);
  EXPECT_DOUBLE_EQ(default_thresholds(Style::rule).minus, -0.05);
  EXPECT_DOUBLE_EQ(default_thresholds(Style::sum).minus, -1.0);
  EXPECT_DOUBLE_EQ(default_thresholds(Style::sum).plus, 1.0);
  EXPECT_THROW((Thresholds{0.1, -0.1}.validate()), ValidationError);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    double a = rng.uniform() * 4 - 2, b = rng.uniform() * 4 - 2;
    if (a > b) std::swap(a, b);
    const Thresholds th{-1.0, 1.0};
    EXPECT_LE(static_cast<int>(to_category(a, th)), static_cast<int>(to_category(b, th)));
  }
}

TEST(Calibrate, RangesAndNormalization) {
  const auto cal = calibrate({{-2.0}, {0.0}, {6.0}}, 1);
  EXPECT_DOUBLE_EQ(cal.ranges[0].min, -2.0);
  EXPECT_DOUBLE_EQ(cal.ranges[0].max, 6.0);
  EXPECT_DOUBLE_EQ(normalize_score(2.0, cal.ranges[0]), 0.0);
  EXPECT_DOUBLE_EQ(normalize_score(-2.0, cal.ranges[0]), -1.0);
  EXPECT_DOUBLE_EQ(normalize_score(6.0, cal.ranges[0]), 1.0);

  const auto flat = calibrate({{3.0}, {3.0}}, 1);
  EXPECT_TRUE(flat.ranges[0].degenerate());
  EXPECT_DOUBLE_EQ(normalize_score(3.0, flat.ranges[0]), 0.0);

  Rng rng(4);
  std::vector<std::vector<double>> values;
  for (int i = 0; i < 50; ++i) values.push_back({rng.uniform() * 10 - 3, rng.uniform()});
  const auto c2 = calibrate(values, 2);
  for (std::size_t a = 0; a < 2; ++a) {
    bool lo = false, hi = false;
    for (const auto& row : values) {
      const double v = normalize_score(row[a], c2.ranges[a]);
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
      lo = lo || v == -1.0;
      hi = hi || v == 1.0;
    }
    EXPECT_TRUE(lo && hi);
  }
}

TEST(Ensemble, ModeAndTiebreak) {
  const std::vector<Thresholds> th(3, Thresholds{-0.05, 0.05});
  Calibration cal{{{-1, 1}, {-1, 1}, {-1, 1}}};
  auto d = classify_sentiment_ensemble(std::vector<double>{0.5, 0.3, -0.4}, th, cal);
  EXPECT_EQ(d.ensemble, Category::positive);
  EXPECT_EQ(d.path, DecisionPath::mode);

  d = classify_sentiment_ensemble(std::vector<double>{0.40, -0.05, -0.62}, th, cal);
  EXPECT_EQ(d.o, (std::vector<Category>{Category::positive, Category::neutral, Category::negative}));
  EXPECT_EQ(d.ensemble, Category::negative);
  EXPECT_EQ(d.path, DecisionPath::tiebreak);
}

TEST(Ensemble, TiebreakUsesCalibratedMagnitude) {
  // Raw values favour analyzer 0, calibrated ones favour analyzer 2.
  const std::vector<Thresholds> th = {{-1, 1}, {-0.05, 0.05}, {-0.05, 0.05}};
  Calibration cal{{{-20, 20}, {-1, 1}, {-0.8, 0.8}}};
  const auto d = classify_sentiment_ensemble(std::vector<double>{4.0, 0.0, -0.7}, th, cal);
  EXPECT_EQ(d.path, DecisionPath::tiebreak);
  EXPECT_EQ(d.ensemble, Category::negative);
}

TEST(Ensemble, DegenerateCalibrationScoresZero) {
  const std::vector<Thresholds> th(3, Thresholds{-0.05, 0.05});
  Calibration cal{{{0.3, 0.3}, {-1, 1}, {-1, 1}}};
  const auto d = classify_sentiment_ensemble(std::vector<double>{0.3, 0.0, -0.2}, th, cal);
  EXPECT_EQ(d.path, DecisionPath::tiebreak);
  EXPECT_EQ(d.ensemble, Category::negative);
}

TEST(Ensemble, UnanimityIgnoresCalibrationAndIsDeterministic) {
  const std::vector<Thresholds> th(3, Thresholds{-0.05, 0.05});
  Calibration bogus{{{0, 0}, {0, 0}, {0, 0}}};
  Rng rng(6);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> v = {rng.uniform() * 2 - 1, rng.uniform() * 2 - 1, rng.uniform() * 2 - 1};
    Calibration cal{{{-1, 1}, {-1, 1}, {-1, 1}}};
    const auto a = classify_sentiment_ensemble(v, th, cal);
    const auto b = classify_sentiment_ensemble(v, th, cal);
    EXPECT_EQ(a.ensemble, b.ensemble);
    EXPECT_EQ(a.path, b.path);
    const bool distinct = a.o[0] != a.o[1] && a.o[1] != a.o[2] && a.o[0] != a.o[2];
    EXPECT_EQ(a.path == DecisionPath::tiebreak, distinct);
    if (a.o[0] == a.o[1] && a.o[1] == a.o[2]) {
      EXPECT_EQ(classify_sentiment_ensemble(v, th, bogus).ensemble, a.o[0]);
    }
  }
}

TEST(Analyzers, EmptyTextScoresZero) {
  const auto lex = lexicon({{"good", 2}});
  const auto empty = analyze_text("");
  EXPECT_DOUBLE_EQ(score_sum(empty, lex).value, 0.0);
  EXPECT_DOUBLE_EQ(score_scaled(empty, lex).value, 0.0);
  EXPECT_DOUBLE_EQ(score_rule_augmented(empty, lex, modifiers()).value, 0.0);
}

TEST(Lexicon, RejectsOutOfScaleValence) {
  const auto path = std::filesystem::temp_directory_path() / "aspectlens_bad_lexicon.tsv";
  write_file(path, "good\t7\n");
  EXPECT_THROW(Lexicon::load(path, -5, 5), ValidationError);
  write_file(path, "good\t3\n");
  EXPECT_DOUBLE_EQ(*Lexicon::load(path, -5, 5).find("good"), 3.0);
}
