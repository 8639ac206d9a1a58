#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aspectlens/sentiment.h"
#include "json.hpp"

namespace aspectlens::insights {

struct LabeledSentence {
  std::string sentence_id;
  std::string entity_id;
  std::string aspect;  // "Null" for unassigned sentences
  sentiment::Category sentiment = sentiment::Category::neutral;
  std::vector<std::string> tokens;
};

struct AspectCounts {
  std::size_t positive = 0, neutral = 0, negative = 0;
  std::size_t total() const { return positive + neutral + negative; }
  double share(sentiment::Category c) const;
  // Positive share minus negative share.
  double net() const;
};

struct OpinionSummary {
  std::string entity_id;
  std::map<std::string, AspectCounts> aspects;
  std::size_t classified = 0;  // non-Null sentences
  std::size_t excluded_null = 0;
  bool empty() const { return classified == 0; }
};

// Null sentences are counted in excluded_null and left out of the aspects.
OpinionSummary aggregate_aos(const std::vector<LabeledSentence>& sentences,
                             const std::string& entity_id);
// Every entity in order of first appearance.
std::vector<OpinionSummary> aggregate_all(const std::vector<LabeledSentence>& sentences);

enum class VerdictKind { strength, weakness, mixed };
std::string_view verdict_name(VerdictKind k);

struct Verdict {
  std::string aspect;
  VerdictKind kind = VerdictKind::mixed;
  double positive_share = 0.0;
  double negative_share = 0.0;
  double margin = 0.0;
};

std::vector<Verdict> verdicts(const OpinionSummary& summary, double margin = 0.10);
VerdictKind classify_net(double net, double margin);

struct Bigram {
  std::string first, second;
  std::size_t count = 0;      // raw occurrences
  std::size_t sentences = 0;  // sentences containing the pair
  double share = 0.0;
};

struct BigramReport {
  std::string aspect;
  std::optional<sentiment::Category> sentiment;
  std::size_t analyzed = 0;
  double threshold = 0.15;
  std::vector<Bigram> bigrams;
};

BigramReport frequent_bigrams(const std::vector<std::vector<std::string>>& sentences,
                              double threshold = 0.15);

struct MatrixCell {
  std::optional<double> net;  // empty for N/A
  std::optional<VerdictKind> verdict;
  AspectCounts counts;
};

struct CompetitorMatrix {
  std::vector<std::string> aspects;
  std::vector<std::string> entities;
  std::vector<std::vector<MatrixCell>> cells;  // [aspect][entity]
  double margin = 0.10;
};

CompetitorMatrix competitor_matrix(const std::vector<OpinionSummary>& summaries,
                                   double margin = 0.10);
// Inverse of competitor_matrix up to the excluded_null counts.
std::vector<OpinionSummary> matrix_to_summaries(const CompetitorMatrix& matrix);

nlohmann::json summary_to_json(const OpinionSummary& s, double margin);
std::string aos_csv(const std::vector<OpinionSummary>& summaries);
std::string verdicts_csv(const std::vector<OpinionSummary>& summaries, double margin);
std::string bigrams_csv(const std::vector<BigramReport>& reports);
std::string matrix_csv(const CompetitorMatrix& m);
std::string matrix_text(const CompetitorMatrix& m, bool color);

}  // namespace aspectlens::insights
