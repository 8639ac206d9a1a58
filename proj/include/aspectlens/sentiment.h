#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace aspectlens::sentiment {

// Ordered so that comparisons follow Negative < Neutral < Positive.
enum class Category { negative = 0, neutral = 1, positive = 2 };
std::string_view category_name(Category c);
Category parse_category(std::string_view name);

enum class Style { sum, scaled, rule };
Style parse_style(std::string_view name);
std::string_view style_name(Style s);

struct Lexicon {
  std::unordered_map<std::string, double> entries;
  double scale_min = -5.0;
  double scale_max = 5.0;

  // TSV term<TAB>valence; every valence must lie in [scale_min, scale_max].
  static Lexicon load(const std::filesystem::path& path, double scale_min, double scale_max);
  const double* find(const std::string& lower) const;
};

enum class ModifierKind { negate, boost, dampen };

struct Modifier {
  ModifierKind kind = ModifierKind::negate;
  double multiplier = 0.0;
};

struct Modifiers {
  std::unordered_map<std::string, Modifier> entries;
  // TSV term<TAB>{negate|boost|dampen}<TAB>multiplier. For negate the
  // multiplier scales the valence; for boost and dampen it is the increment.
  static Modifiers load(const std::filesystem::path& path);
  const Modifier* find(const std::string& lower) const;
};

struct RuleConstants {
  double caps_increment = 0.733;
  double exclamation_increment = 0.292;
  std::size_t max_exclamations = 3;
  double normalization_alpha = 15.0;
  std::size_t window = 3;
};

// Words of a sentence with case information, plus punctuation cues.
struct SentimentToken {
  std::string lower;
  bool all_caps = false;
};

struct SentimentText {
  std::vector<SentimentToken> words;
  std::size_t exclamations = 0;
  bool exclamation_run = false;  // "!!" or longer somewhere in the text
  bool mixed_case = false;       // some words all caps, some not
};

SentimentText analyze_text(std::string_view prepared);

struct SentimentScore {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

SentimentScore score_sum(const SentimentText& text, const Lexicon& lexicon);
SentimentScore score_scaled(const SentimentText& text, const Lexicon& lexicon,
                            double exclamation_boost = 1.292);
SentimentScore score_rule_augmented(const SentimentText& text, const Lexicon& lexicon,
                                    const Modifiers& modifiers, const RuleConstants& rules = {});

struct Thresholds {
  double minus = -0.05;
  double plus = 0.05;
  void validate() const;
};

// Neutral band [-1, 1] for the sum style, [-0.05, 0.05] for the others.
Thresholds default_thresholds(Style s);

Category to_category(double v, const Thresholds& t);

struct Analyzer {
  std::string id;
  Style style = Style::sum;
  Lexicon lexicon;
  Modifiers modifiers;
  Thresholds thresholds;
  RuleConstants rules;
  double exclamation_boost = 1.292;

  SentimentScore score(const SentimentText& text) const;
};

struct AnalyzerRange {
  double min = 0.0;
  double max = 0.0;
  bool degenerate() const { return !(max > min); }
};

struct Calibration {
  std::vector<AnalyzerRange> ranges;
};

// Per-analyzer min and max over values[sentence][analyzer].
Calibration calibrate(const std::vector<std::vector<double>>& values, std::size_t analyzers);

// 2 (v - min) / (max - min) - 1, or 0 for a degenerate analyzer.
double normalize_score(double v, const AnalyzerRange& range);

enum class DecisionPath { mode, tiebreak };
std::string_view path_name(DecisionPath p);

struct SentimentVerdict {
  std::vector<double> v;
  std::vector<Category> o;
  Category ensemble = Category::neutral;
  DecisionPath path = DecisionPath::mode;
};

// Unique mode of the analyzer categories, otherwise the category of the
// analyzer with the largest normalized magnitude (first on ties).
SentimentVerdict classify_sentiment_ensemble(std::span<const double> v,
                                             std::span<const Thresholds> thresholds,
                                             const Calibration& calibration);

}  // namespace aspectlens::sentiment
