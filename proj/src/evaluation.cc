#include "aspectlens/evaluation.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "aspectlens/corpus.h"
#include "aspectlens/sentiment.h"
#include "aspectlens/util.h"

namespace aspectlens::evaluation {

std::string_view task_name(Task t) { return t == Task::aspect ? "aspect" : "sentiment"; }

std::vector<AnnotatedSentence> load_annotations(const std::filesystem::path& path) {
  const auto records = corpus::parse_csv(read_file(path));
  if (records.empty()) throw ValidationError(path.string() + ": empty annotation file");
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < records[0].fields.size(); ++i)
    col[to_lower(trim(records[0].fields[i]))] = i;
  for (const char* name : {"sentence_id", "true_aspect", "true_sentiment"})
    if (!col.contains(name))
      throw ValidationError(path.string() + ": annotation header lacks '" + name + "'");
  auto get = [&](const corpus::CsvRecord& r, const char* name) -> std::optional<std::string> {
    auto it = col.find(name);
    if (it == col.end() || it->second >= r.fields.size()) return std::nullopt;
    auto v = std::string(trim(r.fields[it->second]));
    if (v.empty()) return std::nullopt;
    return v;
  };
  std::vector<AnnotatedSentence> out;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    const std::string where = path.string() + ":" + std::to_string(r.line);
    auto id = get(r, "sentence_id");
    auto aspect = get(r, "true_aspect");
    auto sent = get(r, "true_sentiment");
    if (!id || !aspect || !sent) throw ValidationError(where + ": incomplete annotation row");
    if (!seen.insert(*id).second) throw ValidationError(where + ": duplicate sentence_id " + *id);
    AnnotatedSentence a{*id, *aspect, std::string(sentiment::category_name(sentiment::parse_category(*sent))),
                        get(r, "annotator2_aspect"), std::nullopt};
    if (auto s2 = get(r, "annotator2_sentiment"))
      a.second_sentiment = std::string(sentiment::category_name(sentiment::parse_category(*s2)));
    out.push_back(std::move(a));
  }
  return out;
}

const ClassMetrics* EvaluationReport::find(std::string_view label) const {
  for (const auto& c : classes)
    if (c.label == label) return &c;
  return nullptr;
}

double f1_score(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

EvaluationReport evaluate(const std::vector<LabeledPrediction>& predictions,
                          const std::vector<LabeledPrediction>& truth) {
  std::unordered_map<std::string, const std::string*> pred;
  for (const auto& p : predictions) pred[p.sentence_id] = &p.label;
  std::vector<std::string> missing;
  std::map<std::string, ClassMetrics> classes;
  EvaluationReport report;
  for (const auto& t : truth) {
    auto it = pred.find(t.sentence_id);
    if (it == pred.end()) {
      missing.push_back(t.sentence_id);
      continue;
    }
    const std::string& p = *it->second;
    auto& tc = classes[t.label];
    auto& pc = classes[p];
    ++tc.support;
    ++report.sentences;
    if (p == t.label) {
      ++tc.tp;
      ++report.correct;
    } else {
      ++tc.fn;
      ++pc.fp;
    }
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    std::string ids;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) ids += (i ? ", " : "") + missing[i];
    if (missing.size() > 20) ids += ", ...";
    throw ValidationError(std::to_string(missing.size()) +
                          " annotated sentence(s) lack a prediction: " + ids);
  }
  double sp = 0, sr = 0, sf = 0;
  std::size_t np = 0, nr = 0, nf = 0;
  for (auto& [label, c] : classes) {
    c.label = label;
    if (c.tp + c.fp > 0) c.precision = double(c.tp) / double(c.tp + c.fp);
    if (c.tp + c.fn > 0) c.recall = double(c.tp) / double(c.tp + c.fn);
    if (c.precision && c.recall) c.f1 = f1_score(*c.precision, *c.recall);
    if (c.precision) sp += *c.precision, ++np;
    if (c.recall) sr += *c.recall, ++nr;
    if (c.f1) sf += *c.f1, ++nf;
    report.classes.push_back(c);
  }
  if (np) report.macro_precision = sp / double(np);
  if (nr) report.macro_recall = sr / double(nr);
  if (nf) report.macro_f1 = sf / double(nf);
  return report;
}

std::vector<PublishedTriple> load_published(const std::filesystem::path& path) {
  const auto records = corpus::parse_csv(read_file(path));
  std::vector<PublishedTriple> out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i].fields;
    if (f.size() != 6)
      throw ValidationError(path.string() + ":" + std::to_string(records[i].line) +
                            ": expected table,row,method,recall,precision,f1");
    out.push_back({f[0], f[1], f[2], parse_double(f[3], "recall"), parse_double(f[4], "precision"),
                   parse_double(f[5], "f1")});
  }
  return out;
}

std::size_t ConsistencyReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ConsistencyRow& r) { return !r.ok; }));
}

ConsistencyReport consistency_check(const std::vector<PublishedTriple>& triples, double tolerance) {
  ConsistencyReport report;
  report.tolerance = tolerance;
  for (const auto& t : triples) {
    const double f1 = f1_score(t.precision, t.recall);
    // Published values carry two decimals, so compare with a hair of slack
    // for the binary representation of the tolerance itself.
    report.rows.push_back({t, f1, std::abs(f1 - t.f1) <= tolerance + 1e-12});
  }
  return report;
}

namespace {

std::string fmt(const std::optional<double>& v) { return v ? format_fixed(*v, 2) : "undef"; }
std::string fmt4(const std::optional<double>& v) { return v ? format_fixed(*v, 4) : ""; }

std::vector<std::string> all_labels(const std::vector<MethodReport>& methods) {
  std::set<std::string> labels;
  for (const auto& m : methods)
    for (const auto& c : m.report.classes) labels.insert(c.label);
  return {labels.begin(), labels.end()};
}

}  // namespace

std::string report_csv(Task task, const std::vector<MethodReport>& methods) {
  std::ostringstream out;
  out << "task,method,class,support,tp,fp,fn,precision,recall,f1\n";
  for (const auto& m : methods) {
    for (const auto& c : m.report.classes)
      out << task_name(task) << ',' << csv_field(m.method) << ',' << csv_field(c.label) << ',' << c.support << ','
          << c.tp << ',' << c.fp << ',' << c.fn << ',' << fmt4(c.precision) << ','
          << fmt4(c.recall) << ',' << fmt4(c.f1) << '\n';
    out << task_name(task) << ',' << csv_field(m.method) << ",macro," << m.report.sentences << ','
        << m.report.correct << ",,," << fmt4(m.report.macro_precision) << ','
        << fmt4(m.report.macro_recall) << ',' << fmt4(m.report.macro_f1) << '\n';
  }
  return out.str();
}

std::string report_text(Task task, const std::vector<MethodReport>& methods) {
  const auto labels = all_labels(methods);
  std::size_t label_w = std::string_view("Macro average").size();
  for (const auto& l : labels) label_w = std::max(label_w, l.size());
  const std::size_t cell = 18;
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  std::ostringstream out;
  out << (task == Task::aspect ? "Aspect" : "Sentiment") << " classification (R / P / F1)\n";
  out << pad("", label_w);
  for (const auto& m : methods) out << "  " << pad(m.method, cell);
  out << '\n';
  auto row = [&](const std::string& name, auto&& cell_of) {
    out << pad(name, label_w);
    for (const auto& m : methods) out << "  " << pad(cell_of(m.report), cell);
    out << '\n';
  };
  for (const auto& l : labels) {
    row(l, [&](const EvaluationReport& r) -> std::string {
      const auto* c = r.find(l);
      if (!c) return "-";
      return fmt(c->recall) + " " + fmt(c->precision) + " " + fmt(c->f1);
    });
  }
  row("Macro average", [](const EvaluationReport& r) {
    return fmt(r.macro_recall) + " " + fmt(r.macro_precision) + " " + fmt(r.macro_f1);
  });
  row("Accuracy", [](const EvaluationReport& r) { return format_fixed(r.accuracy(), 2); });
  return out.str();
}

std::vector<Disagreement> disagreements(const std::vector<AnnotatedSentence>& annotations) {
  std::vector<Disagreement> out;
  for (const auto& a : annotations) {
    if (a.second_aspect && *a.second_aspect != a.true_aspect)
      out.push_back({a.sentence_id, "aspect", a.true_aspect, *a.second_aspect});
    if (a.second_sentiment && *a.second_sentiment != a.true_sentiment)
      out.push_back({a.sentence_id, "sentiment", a.true_sentiment, *a.second_sentiment});
  }
  return out;
}

}  // namespace aspectlens::evaluation
