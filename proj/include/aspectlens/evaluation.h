#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aspectlens::evaluation {

enum class Task { aspect, sentiment };
std::string_view task_name(Task t);

struct LabeledPrediction {
  std::string sentence_id;
  std::string label;
};

struct AnnotatedSentence {
  std::string sentence_id;
  std::string true_aspect;
  std::string true_sentiment;
  std::optional<std::string> second_aspect;
  std::optional<std::string> second_sentiment;
};

// CSV: sentence_id,true_aspect,true_sentiment[,annotator2_aspect,annotator2_sentiment].
// Sentiment labels are canonicalised to Positive/Neutral/Negative.
std::vector<AnnotatedSentence> load_annotations(const std::filesystem::path& path);

struct ClassMetrics {
  std::string label;
  std::size_t support = 0;  // TP + FN
  std::size_t tp = 0, fp = 0, fn = 0;
  std::optional<double> precision, recall, f1;  // empty when undefined
};

struct EvaluationReport {
  std::vector<ClassMetrics> classes;  // sorted by label
  std::optional<double> macro_precision, macro_recall, macro_f1;
  std::size_t sentences = 0;
  std::size_t correct = 0;
  double accuracy() const { return sentences ? double(correct) / double(sentences) : 0.0; }
  const ClassMetrics* find(std::string_view label) const;
};

double f1_score(double precision, double recall);

// One-vs-rest counts over the union of true and predicted labels. Every truth
// id needs a prediction; extra predictions are ignored.
EvaluationReport evaluate(const std::vector<LabeledPrediction>& predictions,
                          const std::vector<LabeledPrediction>& truth);

struct PublishedTriple {
  std::string table;
  std::string row;
  std::string method;
  double recall = 0.0, precision = 0.0, f1 = 0.0;
};

// CSV: table,row,method,recall,precision,f1.
std::vector<PublishedTriple> load_published(const std::filesystem::path& path);

struct ConsistencyRow {
  PublishedTriple triple;
  double recomputed = 0.0;
  bool ok = false;
};

struct ConsistencyReport {
  std::vector<ConsistencyRow> rows;
  double tolerance = 0.01;
  std::size_t failures() const;
};

ConsistencyReport consistency_check(const std::vector<PublishedTriple>& triples,
                                    double tolerance = 0.01);

// Reports for several methods evaluated on one task. Columns per method.
struct MethodReport {
  std::string method;
  EvaluationReport report;
};

std::string report_csv(Task task, const std::vector<MethodReport>& methods);
std::string report_text(Task task, const std::vector<MethodReport>& methods);

struct Disagreement {
  std::string sentence_id;
  std::string field;
  std::string first, second;
};

std::vector<Disagreement> disagreements(const std::vector<AnnotatedSentence>& annotations);

}  // namespace aspectlens::evaluation
