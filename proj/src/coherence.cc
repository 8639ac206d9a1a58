#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "aspectlens/topic_model.h"

namespace aspectlens::topics {

using nlohmann::json;

CoherenceReport coherence(const FittedTopicModel& model, const CorpusMatrix& matrix,
                          std::size_t n_top, double epsilon) {
  if (n_top < 2) throw ValidationError("coherence needs n_top >= 2");
  if (n_top > model.num_terms)
    throw ValidationError("n_top " + std::to_string(n_top) + " exceeds vocabulary size " +
                          std::to_string(model.num_terms));
  if (!(epsilon > 0.0)) throw ValidationError("coherence epsilon must be > 0");
  CoherenceReport report;
  report.n_top = n_top;
  report.epsilon = epsilon;
  const double R = static_cast<double>(matrix.num_sentences());
  const double denom = R + epsilon;

  for (std::size_t k = 0; k < model.num_topics; ++k) {
    const auto top = model.top_terms(k, n_top);
    std::unordered_map<corpus::TermId, std::size_t> slot;
    for (std::size_t i = 0; i < top.size(); ++i) slot.emplace(top[i], i);
    std::vector<double> single(n_top, 0.0), pair(n_top * n_top, 0.0);
    std::vector<std::size_t> present;
    for (std::size_t r = 0; r < matrix.num_sentences(); ++r) {
      present.clear();
      for (const auto& tc : matrix.column(r).counts)
        if (auto it = slot.find(tc.term); it != slot.end()) present.push_back(it->second);
      for (std::size_t a = 0; a < present.size(); ++a) {
        single[present[a]] += 1.0;
        for (std::size_t b = a + 1; b < present.size(); ++b) {
          const auto i = std::min(present[a], present[b]), j = std::max(present[a], present[b]);
          pair[i * n_top + j] += 1.0;
        }
      }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n_top; ++i) {
      const double pi = (single[i] + epsilon) / denom;
      for (std::size_t j = i + 1; j < n_top; ++j) {
        const double pj = (single[j] + epsilon) / denom;
        const double pij = (pair[i * n_top + j] + epsilon) / denom;
        sum += std::log(pij / (pi * pj));
      }
    }
    const double pairs = static_cast<double>(n_top * (n_top - 1) / 2);
    report.per_topic.push_back(sum / pairs);
  }
  double total = 0.0;
  for (double v : report.per_topic) total += v;
  report.mean = report.per_topic.empty() ? 0.0 : total / static_cast<double>(report.per_topic.size());
  return report;
}

std::size_t choose_k(const std::vector<KSelectionRow>& rows) {
  if (rows.empty()) throw ValidationError("empty K sweep");
  const KSelectionRow* best = &rows.front();
  for (const auto& row : rows)
    if (row.mean_coherence > best->mean_coherence ||
        (row.mean_coherence == best->mean_coherence && row.K < best->K))
      best = &row;
  return best->K;
}

KSelectionResult select_k(const CorpusMatrix& matrix, const ModelConfig& config_template,
                          const SelectKOptions& options) {
  if (options.k_min < 2 || options.k_min > options.k_max)
    throw ValidationError("K sweep needs 2 <= k_min <= k_max");
  if (options.step < 1) throw ValidationError("K sweep step must be >= 1");
  if (options.seeds < 1) throw ValidationError("K sweep needs at least one seed");
  KSelectionResult result;
  result.k_min = options.k_min;
  result.k_max = options.k_max;
  result.step = options.step;
  for (std::size_t K = options.k_min; K <= options.k_max; K += options.step) {
    KSelectionRow row;
    row.K = K;
    for (std::size_t s = 0; s < options.seeds; ++s) {
      ModelConfig c = config_template;
      c.K = K;
      c.seed = s == 0 ? config_template.seed : mix_seed(config_template.seed, s);
      try {
        const auto model = fit(matrix, c);
        row.per_seed.push_back(coherence(model, matrix, options.n_top, options.epsilon).mean);
      } catch (const ValidationError& e) {
        throw ValidationError("K=" + std::to_string(K) + ": " + e.what());
      }
    }
    double sum = 0.0;
    for (double v : row.per_seed) sum += v;
    row.mean_coherence = sum / static_cast<double>(row.per_seed.size());
    result.rows.push_back(std::move(row));
  }
  result.chosen = choose_k(result.rows);
  return result;
}

json selection_to_json(const KSelectionResult& r, Algorithm algorithm) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"K", row.K}, {"per_seed", row.per_seed}, {"mean_coherence", row.mean_coherence}});
  return {{"format_version", 1},
          {"kind", "aspectlens.k_selection"},
          {"algorithm", algorithm_name(algorithm)},
          {"k_min", r.k_min},
          {"k_max", r.k_max},
          {"step", r.step},
          {"rows", rows},
          {"chosen", r.chosen}};
}

}  // namespace aspectlens::topics
