#include "aspectlens/sentiment.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "aspectlens/util.h"

namespace aspectlens::sentiment {

std::string_view category_name(Category c) {
  switch (c) {
    case Category::negative: return "Negative";
    case Category::neutral: return "Neutral";
    case Category::positive: return "Positive";
  }
  return "?";
}

Category parse_category(std::string_view name) {
  const auto s = to_lower(trim(name));
  if (s == "positive" || s == "pos") return Category::positive;
  if (s == "neutral" || s == "neu") return Category::neutral;
  if (s == "negative" || s == "neg") return Category::negative;
  throw ValidationError("unknown sentiment category '" + std::string(name) + "'");
}

Style parse_style(std::string_view name) {
  if (name == "sum") return Style::sum;
  if (name == "scaled") return Style::scaled;
  if (name == "rule") return Style::rule;
  throw ValidationError("unknown analyzer style '" + std::string(name) + "' (sum|scaled|rule)");
}

std::string_view style_name(Style s) {
  switch (s) {
    case Style::sum: return "sum";
    case Style::scaled: return "scaled";
    case Style::rule: return "rule";
  }
  return "?";
}

Lexicon Lexicon::load(const std::filesystem::path& path, double scale_min, double scale_max) {
  if (!(scale_min < scale_max)) throw ValidationError("lexicon scale must have min < max");
  Lexicon lex;
  lex.scale_min = scale_min;
  lex.scale_max = scale_max;
  for (const auto& rec : read_tsv(path)) {
    const std::string where = path.string() + ":" + std::to_string(rec.line);
    if (rec.fields.size() != 2) throw ValidationError(where + ": expected term<TAB>valence");
    const double v = parse_double(rec.fields[1], "valence");
    if (v < scale_min || v > scale_max)
      throw ValidationError(where + ": valence " + rec.fields[1] + " outside the declared scale");
    lex.entries[to_lower(rec.fields[0])] = v;
  }
  return lex;
}

const double* Lexicon::find(const std::string& lower) const {
  auto it = entries.find(lower);
  return it == entries.end() ? nullptr : &it->second;
}

Modifiers Modifiers::load(const std::filesystem::path& path) {
  Modifiers mods;
  for (const auto& rec : read_tsv(path)) {
    const std::string where = path.string() + ":" + std::to_string(rec.line);
    if (rec.fields.size() != 3)
      throw ValidationError(where + ": expected term<TAB>kind<TAB>multiplier");
    Modifier m;
    if (rec.fields[1] == "negate") m.kind = ModifierKind::negate;
    else if (rec.fields[1] == "boost") m.kind = ModifierKind::boost;
    else if (rec.fields[1] == "dampen") m.kind = ModifierKind::dampen;
    else throw ValidationError(where + ": modifier kind must be negate, boost or dampen");
    m.multiplier = parse_double(rec.fields[2], "multiplier");
    mods.entries[to_lower(rec.fields[0])] = m;
  }
  return mods;
}

const Modifier* Modifiers::find(const std::string& lower) const {
  auto it = entries.find(lower);
  return it == entries.end() ? nullptr : &it->second;
}

SentimentText analyze_text(std::string_view s) {
  SentimentText out;
  auto word_byte = [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u) != 0;
  };
  std::size_t caps_words = 0, cased_words = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '!') {
      ++out.exclamations;
      if (++run >= 2) out.exclamation_run = true;
      ++i;
      continue;
    }
    run = 0;
    if (!word_byte(s[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() &&
           (word_byte(s[j]) || (s[j] == '\'' && j + 1 < s.size() && word_byte(s[j + 1]))))
      ++j;
    const std::string_view w = s.substr(i, j - i);
    bool upper = false, lower = false;
    for (char c : w) {
      upper = upper || std::isupper(static_cast<unsigned char>(c));
      lower = lower || std::islower(static_cast<unsigned char>(c));
    }
    SentimentToken tok{to_lower(w), upper && !lower && w.size() >= 2};
    if (upper || lower) ++cased_words;
    if (tok.all_caps) ++caps_words;
    out.words.push_back(std::move(tok));
    i = j;
  }
  out.mixed_case = caps_words > 0 && caps_words < cased_words;
  return out;
}

SentimentScore score_sum(const SentimentText& text, const Lexicon& lexicon) {
  double v = 0.0;
  for (const auto& t : text.words)
    if (const double* x = lexicon.find(t.lower)) v += *x;
  const double bound = std::max(std::abs(lexicon.scale_min), std::abs(lexicon.scale_max)) *
                       static_cast<double>(text.words.size());
  return {v, -bound, bound};
}

SentimentScore score_scaled(const SentimentText& text, const Lexicon& lexicon,
                            double exclamation_boost) {
  double pos = 0.0, neg = 0.0;
  for (const auto& t : text.words) {
    if (const double* x = lexicon.find(t.lower)) {
      pos = std::max(pos, *x);
      neg = std::min(neg, *x);
    }
  }
  const double span = std::max(std::abs(lexicon.scale_min), std::abs(lexicon.scale_max));
  double v = (pos + neg) / span;
  if (text.exclamation_run) v *= exclamation_boost;
  return {std::clamp(v, -1.0, 1.0), -1.0, 1.0};
}

SentimentScore score_rule_augmented(const SentimentText& text, const Lexicon& lexicon,
                                    const Modifiers& modifiers, const RuleConstants& rules) {
  static constexpr double kDecay[] = {1.0, 0.95, 0.9};
  const auto& w = text.words;
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double* base = lexicon.find(w[i].lower);
    if (!base || *base == 0.0) continue;
    double v = *base;
    const double sign = v > 0 ? 1.0 : -1.0;
    if (w[i].all_caps && text.mixed_case) v += sign * rules.caps_increment;
    for (std::size_t d = 1; d <= rules.window && d <= i; ++d) {
      const Modifier* m = modifiers.find(w[i - d].lower);
      if (!m || m->kind == ModifierKind::negate) continue;
      const double inc = m->kind == ModifierKind::boost ? m->multiplier : -m->multiplier;
      v += sign * inc * (d - 1 < std::size(kDecay) ? kDecay[d - 1] : kDecay[2]);
    }
    for (std::size_t d = 1; d <= rules.window && d <= i; ++d) {
      const Modifier* m = modifiers.find(w[i - d].lower);
      if (m && m->kind == ModifierKind::negate) v *= m->multiplier;
    }
    sum += v;
  }
  if (sum != 0.0) {
    const double marks =
        static_cast<double>(std::min(text.exclamations, rules.max_exclamations));
    sum += (sum > 0 ? 1.0 : -1.0) * marks * rules.exclamation_increment;
  }
  const double v = sum / std::sqrt(sum * sum + rules.normalization_alpha);
  return {std::clamp(v, -1.0, 1.0), -1.0, 1.0};
}

void Thresholds::validate() const {
  if (!(minus <= plus)) throw ValidationError("sentiment thresholds need gamma_minus <= gamma_plus");
}

Thresholds default_thresholds(Style s) {
  return s == Style::sum ? Thresholds{-1.0, 1.0} : Thresholds{};
}

Category to_category(double v, const Thresholds& t) {
  if (v > t.plus) return Category::positive;
  if (v >= t.minus) return Category::neutral;
  return Category::negative;
}

SentimentScore Analyzer::score(const SentimentText& text) const {
  switch (style) {
    case Style::sum: return score_sum(text, lexicon);
    case Style::scaled: return score_scaled(text, lexicon, exclamation_boost);
    case Style::rule: return score_rule_augmented(text, lexicon, modifiers, rules);
  }
  return {};
}

Calibration calibrate(const std::vector<std::vector<double>>& values, std::size_t analyzers) {
  if (values.empty()) throw ValidationError("calibration corpus is empty");
  Calibration c;
  c.ranges.resize(analyzers);
  for (std::size_t l = 0; l < analyzers; ++l) {
    c.ranges[l].min = c.ranges[l].max = values.front().at(l);
    for (const auto& row : values) {
      c.ranges[l].min = std::min(c.ranges[l].min, row.at(l));
      c.ranges[l].max = std::max(c.ranges[l].max, row.at(l));
    }
  }
  return c;
}

double normalize_score(double v, const AnalyzerRange& range) {
  if (range.degenerate()) return 0.0;
  return std::clamp(2.0 * (v - range.min) / (range.max - range.min) - 1.0, -1.0, 1.0);
}

std::string_view path_name(DecisionPath p) {
  return p == DecisionPath::mode ? "mode" : "tiebreak";
}

SentimentVerdict classify_sentiment_ensemble(std::span<const double> v,
                                             std::span<const Thresholds> thresholds,
                                             const Calibration& calibration) {
  const std::size_t L = v.size();
  if (L < 2) throw ValidationError("sentiment ensemble needs at least two analyzers");
  if (thresholds.size() != L || calibration.ranges.size() != L)
    throw ValidationError("analyzer count mismatch in sentiment ensemble");
  SentimentVerdict out;
  out.v.assign(v.begin(), v.end());
  std::map<Category, std::size_t> votes;
  for (std::size_t l = 0; l < L; ++l) {
    out.o.push_back(to_category(v[l], thresholds[l]));
    ++votes[out.o.back()];
  }
  std::size_t top = 0, ties = 0;
  Category mode = Category::neutral;
  for (const auto& [c, n] : votes) {
    if (n > top) top = n, mode = c, ties = 1;
    else if (n == top) ++ties;
  }
  if (ties == 1) {
    out.ensemble = mode;
    out.path = DecisionPath::mode;
    return out;
  }
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t l = 0; l < L; ++l) {
    const double mag = std::abs(normalize_score(v[l], calibration.ranges[l]));
    if (mag > best_mag) best_mag = mag, best = l;
  }
  out.ensemble = out.o[best];
  out.path = DecisionPath::tiebreak;
  return out;
}

}  // namespace aspectlens::sentiment
