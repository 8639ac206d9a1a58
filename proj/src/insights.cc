#include "aspectlens/insights.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "aspectlens/aspect_ensemble.h"
#include "aspectlens/util.h"

namespace aspectlens::insights {

using sentiment::Category;

double AspectCounts::share(Category c) const {
  const std::size_t n = total();
  if (n == 0) return 0.0;
  const std::size_t k = c == Category::positive ? positive
                        : c == Category::neutral ? neutral
                                                 : negative;
  return double(k) / double(n);
}

OpinionSummary aggregate_aos(const std::vector<LabeledSentence>& sentences,
                             const std::string& entity_id) {
  OpinionSummary out;
  out.entity_id = entity_id;
  for (const auto& s : sentences) {
    if (s.entity_id != entity_id) continue;
    if (s.aspect == aspects::kNullLabel) {
      ++out.excluded_null;
      continue;
    }
    auto& c = out.aspects[s.aspect];
    switch (s.sentiment) {
      case Category::positive: ++c.positive; break;
      case Category::neutral: ++c.neutral; break;
      case Category::negative: ++c.negative; break;
    }
    ++out.classified;
  }
  return out;
}

std::vector<OpinionSummary> aggregate_all(const std::vector<LabeledSentence>& sentences) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& s : sentences)
    if (seen.insert(s.entity_id).second) order.push_back(s.entity_id);
  std::vector<OpinionSummary> out;
  for (const auto& e : order) out.push_back(aggregate_aos(sentences, e));
  return out;
}

std::string_view verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::strength: return "strength";
    case VerdictKind::weakness: return "weakness";
    case VerdictKind::mixed: return "mixed";
  }
  return "?";
}

double AspectCounts::net() const {
  const std::size_t n = total();
  if (n == 0) return 0.0;
  return (double(positive) - double(negative)) / double(n);
}

VerdictKind classify_net(double net, double margin) {
  if (net > margin) return VerdictKind::strength;
  if (-net > margin) return VerdictKind::weakness;
  return VerdictKind::mixed;
}

std::vector<Verdict> verdicts(const OpinionSummary& summary, double margin) {
  if (!(margin >= 0.0 && margin < 1.0)) throw ValidationError("verdict margin must lie in [0, 1)");
  std::vector<Verdict> out;
  for (const auto& [aspect, c] : summary.aspects) {
    if (c.total() == 0) continue;
    out.push_back({aspect, classify_net(c.net(), margin), c.share(Category::positive),
                   c.share(Category::negative), margin});
  }
  return out;
}

BigramReport frequent_bigrams(const std::vector<std::vector<std::string>>& sentences,
                              double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw ValidationError("bigram threshold must lie in (0, 1]");
  BigramReport report;
  report.threshold = threshold;
  report.analyzed = sentences.size();
  if (sentences.empty()) return report;
  std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& s : sentences) {
    std::set<std::pair<std::string, std::string>> in_sentence;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      auto key = std::make_pair(s[i], s[i + 1]);
      auto& c = counts[key];
      ++c.first;
      if (in_sentence.insert(key).second) ++c.second;
    }
  }
  const double n = double(sentences.size());
  for (const auto& [key, c] : counts) {
    const double share = double(c.second) / n;
    if (share > threshold) report.bigrams.push_back({key.first, key.second, c.first, c.second, share});
  }
  std::stable_sort(report.bigrams.begin(), report.bigrams.end(),
                   [](const Bigram& a, const Bigram& b) { return a.count > b.count; });
  return report;
}

CompetitorMatrix competitor_matrix(const std::vector<OpinionSummary>& summaries, double margin) {
  if (summaries.size() < 2) throw ValidationError("competitor matrix needs at least two entities");
  CompetitorMatrix m;
  m.margin = margin;
  std::set<std::string> aspect_set;
  for (const auto& s : summaries) {
    m.entities.push_back(s.entity_id);
    for (const auto& [a, c] : s.aspects)
      if (c.total() > 0) aspect_set.insert(a);
  }
  m.aspects.assign(aspect_set.begin(), aspect_set.end());
  for (const auto& a : m.aspects) {
    std::vector<MatrixCell> row;
    for (const auto& s : summaries) {
      MatrixCell cell;
      auto it = s.aspects.find(a);
      if (it != s.aspects.end() && it->second.total() > 0) {
        const auto& c = it->second;
        cell.counts = c;
        cell.net = c.net();
        cell.verdict = classify_net(c.net(), margin);
      }
      row.push_back(cell);
    }
    m.cells.push_back(std::move(row));
  }
  return m;
}

std::vector<OpinionSummary> matrix_to_summaries(const CompetitorMatrix& m) {
  std::vector<OpinionSummary> out;
  for (std::size_t e = 0; e < m.entities.size(); ++e) {
    OpinionSummary s;
    s.entity_id = m.entities[e];
    for (std::size_t a = 0; a < m.aspects.size(); ++a) {
      const auto& cell = m.cells[a][e];
      if (!cell.net) continue;
      s.aspects[m.aspects[a]] = cell.counts;
      s.classified += cell.counts.total();
    }
    out.push_back(std::move(s));
  }
  return out;
}

nlohmann::json summary_to_json(const OpinionSummary& s, double margin) {
  nlohmann::json j;
  j["entity_id"] = s.entity_id;
  j["classified_sentences"] = s.classified;
  j["excluded_null"] = s.excluded_null;
  j["aspects"] = nlohmann::json::array();
  std::unordered_map<std::string, VerdictKind> kinds;
  for (const auto& v : verdicts(s, margin)) kinds[v.aspect] = v.kind;
  for (const auto& [a, c] : s.aspects) {
    j["aspects"].push_back({
        {"aspect", a},
        {"positive", c.positive},
        {"neutral", c.neutral},
        {"negative", c.negative},
        {"total", c.total()},
        {"positive_share", c.share(Category::positive)},
        {"neutral_share", c.share(Category::neutral)},
        {"negative_share", c.share(Category::negative)},
        {"verdict", verdict_name(kinds.at(a))},
    });
  }
  return j;
}

std::string aos_csv(const std::vector<OpinionSummary>& summaries) {
  std::ostringstream out;
  out << "entity_id,aspect,positive,neutral,negative,total,positive_share,neutral_share,negative_share\n";
  for (const auto& s : summaries)
    for (const auto& [a, c] : s.aspects)
      out << csv_field(s.entity_id) << ',' << csv_field(a) << ',' << c.positive << ',' << c.neutral << ',' << c.negative
          << ',' << c.total() << ',' << format_fixed(c.share(Category::positive), 4) << ','
          << format_fixed(c.share(Category::neutral), 4) << ','
          << format_fixed(c.share(Category::negative), 4) << '\n';
  return out.str();
}

std::string verdicts_csv(const std::vector<OpinionSummary>& summaries, double margin) {
  std::ostringstream out;
  out << "entity_id,aspect,verdict,positive_share,negative_share,margin\n";
  for (const auto& s : summaries)
    for (const auto& v : verdicts(s, margin))
      out << csv_field(s.entity_id) << ',' << csv_field(v.aspect) << ',' << verdict_name(v.kind) << ','
          << format_fixed(v.positive_share, 4) << ',' << format_fixed(v.negative_share, 4) << ','
          << format_fixed(v.margin, 4) << '\n';
  return out.str();
}

std::string bigrams_csv(const std::vector<BigramReport>& reports) {
  std::ostringstream out;
  out << "aspect,sentiment,w1,w2,count,sentences,share,analyzed,threshold\n";
  for (const auto& r : reports)
    for (const auto& b : r.bigrams)
      out << csv_field(r.aspect) << ',' << (r.sentiment ? sentiment::category_name(*r.sentiment) : "All")
          << ',' << b.first << ',' << b.second << ',' << b.count << ',' << b.sentences << ','
          << format_fixed(b.share, 4) << ',' << r.analyzed << ',' << format_fixed(r.threshold, 4)
          << '\n';
  return out.str();
}

std::string matrix_csv(const CompetitorMatrix& m) {
  std::ostringstream out;
  out << "aspect";
  for (const auto& e : m.entities) out << ',' << csv_field(e + "_net") << ',' << csv_field(e + "_verdict");
  out << '\n';
  for (std::size_t a = 0; a < m.aspects.size(); ++a) {
    out << csv_field(m.aspects[a]);
    for (const auto& cell : m.cells[a]) {
      if (cell.net)
        out << ',' << format_fixed(*cell.net, 4) << ',' << verdict_name(*cell.verdict);
      else
        out << ",N/A,N/A";
    }
    out << '\n';
  }
  return out.str();
}

std::string matrix_text(const CompetitorMatrix& m, bool color) {
  auto glyph = [](VerdictKind k) {
    return k == VerdictKind::strength ? "+" : k == VerdictKind::weakness ? "-" : "~";
  };
  auto paint = [&](VerdictKind k, const std::string& s) {
    if (!color) return s;
    const char* code = k == VerdictKind::strength ? "\x1b[32m"
                       : k == VerdictKind::weakness ? "\x1b[31m"
                                                    : "\x1b[33m";
    return std::string(code) + s + "\x1b[0m";
  };
  std::size_t aw = 6;
  for (const auto& a : m.aspects) aw = std::max(aw, a.size());
  std::size_t cw = 9;
  for (const auto& e : m.entities) cw = std::max(cw, e.size());
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.insert(0, w - s.size(), ' ');
    return s;
  };
  std::ostringstream out;
  std::string head = "Aspect";
  head.append(aw - head.size(), ' ');
  out << head;
  for (const auto& e : m.entities) out << "  " << pad(e, cw);
  out << '\n';
  for (std::size_t a = 0; a < m.aspects.size(); ++a) {
    std::string name = m.aspects[a];
    name.append(aw - name.size(), ' ');
    out << name;
    for (const auto& cell : m.cells[a]) {
      if (!cell.net) {
        out << "  " << pad("N/A", cw);
        continue;
      }
      const std::string text = format_fixed(*cell.net, 2) + " " + glyph(*cell.verdict);
      out << "  " << paint(*cell.verdict, pad(text, cw));
    }
    out << '\n';
  }
  out << "net = positive share - negative share; + strength, - weakness, ~ mixed (margin "
      << format_fixed(m.margin, 2) << ")\n";
  return out.str();
}

}  // namespace aspectlens::insights
