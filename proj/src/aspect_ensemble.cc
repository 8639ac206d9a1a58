#include "aspectlens/aspect_ensemble.h"

#include <algorithm>
#include <numeric>

#include "aspectlens/util.h"

namespace aspectlens::aspects {

using nlohmann::json;

MergeMap load_merge_map(const std::filesystem::path& path) {
  MergeMap out;
  for (const auto& rec : read_tsv(path)) {
    if (rec.fields.size() != 3)
      throw ValidationError(path.string() + ":" + std::to_string(rec.line) +
                            ": expected model_id<TAB>raw_topic<TAB>aspect_label");
    const auto topic = parse_int(rec.fields[1], "raw_topic");
    if (topic < 0)
      throw ValidationError(path.string() + ":" + std::to_string(rec.line) + ": negative raw_topic");
    out.push_back({rec.fields[0], static_cast<std::size_t>(topic), rec.fields[2]});
  }
  return out;
}

MergeMap identity_merge_map(const std::vector<std::pair<std::string, std::size_t>>& models) {
  MergeMap out;
  for (const auto& [id, K] : models)
    for (std::size_t k = 0; k < K; ++k) out.push_back({id, k, "topic_" + std::to_string(k)});
  return out;
}

std::optional<std::size_t> AspectCatalog::find(std::string_view label) const {
  for (std::size_t i = 0; i < aspects.size(); ++i)
    if (aspects[i].label == label) return i;
  return std::nullopt;
}

std::vector<double> AspectCatalog::map_probabilities(const std::string& model_id,
                                                     std::span<const double> raw) const {
  auto it = topic_to_aspect.find(model_id);
  if (it == topic_to_aspect.end()) throw ValidationError("model '" + model_id + "' not in catalog");
  if (it->second.size() != raw.size())
    throw ValidationError("model '" + model_id + "' topic count differs from catalog");
  std::vector<double> p(aspects.size(), 0.0);
  for (std::size_t k = 0; k < raw.size(); ++k)
    if (it->second[k]) p[*it->second[k]] += raw[k];
  return p;
}

AspectCatalog build_catalog(const std::vector<ModelRef>& models, const corpus::Vocabulary& vocab,
                            double prevalence_floor, const MergeMap& merge_map,
                            std::size_t n_keywords) {
  if (prevalence_floor < 0.0 || prevalence_floor >= 1.0)
    throw ValidationError("prevalence_floor must be in [0, 1)");
  AspectCatalog cat;
  cat.prevalence_floor = prevalence_floor;
  std::map<std::string, const topics::FittedTopicModel*> by_id;
  std::map<std::string, std::vector<double>> prevalence;
  for (const auto& ref : models) {
    if (!by_id.emplace(ref.id, ref.model).second)
      throw ValidationError("duplicate model id '" + ref.id + "'");
    if (ref.model->num_terms != vocab.size())
      throw ValidationError("model '" + ref.id + "' was fitted on a different vocabulary");
    prevalence[ref.id] = ref.model->prevalence();
    cat.topic_to_aspect[ref.id].assign(ref.model->num_topics, std::nullopt);
  }

  std::map<std::pair<std::string, std::size_t>, std::string> seen;
  std::set<std::pair<std::string, std::size_t>> null_topics;
  for (const auto& e : merge_map) {
    auto m = by_id.find(e.model_id);
    if (m == by_id.end())
      throw ValidationError("merge map references unknown model '" + e.model_id + "'");
    if (e.raw_topic >= m->second->num_topics)
      throw ValidationError("merge map references unknown raw topic " + e.model_id + ":" +
                            std::to_string(e.raw_topic));
    if (e.aspect_label.empty()) throw ValidationError("merge map aspect label must be non-empty");
    auto [it, inserted] = seen.emplace(std::make_pair(e.model_id, e.raw_topic), e.aspect_label);
    if (!inserted && it->second != e.aspect_label)
      throw ValidationError("raw topic " + e.model_id + ":" + std::to_string(e.raw_topic) +
                            " mapped to two aspects");
    if (prevalence[e.model_id][e.raw_topic] < prevalence_floor) continue;
    if (e.aspect_label == kNullLabel) {
      null_topics.insert({e.model_id, e.raw_topic});
      continue;
    }
    auto id = cat.find(e.aspect_label);
    if (!id) {
      cat.aspects.push_back({e.aspect_label, {}});
      id = cat.aspects.size() - 1;
    }
    cat.topic_to_aspect[e.model_id][e.raw_topic] = *id;
  }

  for (const auto& ref : models) {
    const auto& prev = prevalence[ref.id];
    auto& mapping = cat.topic_to_aspect[ref.id];
    for (std::size_t k = 0; k < mapping.size(); ++k) {
      if (prev[k] < prevalence_floor) {
        cat.discarded.push_back({ref.id, k, prev[k], false});
      } else if (null_topics.contains({ref.id, k})) {
        cat.discarded.push_back({ref.id, k, prev[k], true});
      } else if (!mapping[k]) {
        throw ValidationError("raw topic " + ref.id + ":" + std::to_string(k) +
                              " is retained but not mapped to an aspect");
      }
    }
    // Keywords of an aspect: top terms of the prevalence-weighted mixture of
    // its raw topics.
    const auto& model = *ref.model;
    for (std::size_t a = 0; a < cat.aspects.size(); ++a) {
      std::vector<double> score(model.num_terms, 0.0);
      double weight = 0.0;
      for (std::size_t k = 0; k < mapping.size(); ++k) {
        if (mapping[k] != a) continue;
        const double wk = std::max(prev[k], 1e-300);
        weight += wk;
        for (std::size_t w = 0; w < model.num_terms; ++w) score[w] += wk * model.phi_at(k, w);
      }
      if (weight == 0.0) continue;
      std::vector<std::size_t> idx(score.size());
      std::iota(idx.begin(), idx.end(), 0);
      const std::size_t n = std::min(n_keywords, idx.size());
      std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n), idx.end(),
                        [&](std::size_t x, std::size_t y) {
                          return score[x] != score[y] ? score[x] > score[y] : x < y;
                        });
      auto& kw = cat.aspects[a].keywords[ref.id];
      for (std::size_t i = 0; i < n; ++i)
        kw.push_back(vocab.term(static_cast<corpus::TermId>(idx[i])));
    }
  }
  return cat;
}

json catalog_to_json(const AspectCatalog& c) {
  json aspects = json::array();
  for (std::size_t i = 0; i < c.aspects.size(); ++i)
    aspects.push_back({{"aspect_id", i}, {"label", c.aspects[i].label},
                       {"keywords", c.aspects[i].keywords}});
  json mapping = json::object();
  for (const auto& [id, topics] : c.topic_to_aspect) {
    json arr = json::array();
    for (const auto& a : topics) arr.push_back(a ? json(*a) : json(nullptr));
    mapping[id] = arr;
  }
  json discarded = json::array();
  for (const auto& d : c.discarded)
    discarded.push_back({{"model_id", d.model_id}, {"raw_topic", d.raw_topic},
                         {"prevalence", d.prevalence},
                         {"reason", d.by_merge_map ? "merge_map" : "prevalence"}});
  return {{"format_version", 1},
          {"kind", "aspectlens.catalog"},
          {"prevalence_floor", c.prevalence_floor},
          {"aspects", aspects},
          {"topic_to_aspect", mapping},
          {"discarded", discarded}};
}

AspectCatalog catalog_from_json(const json& j) {
  try {
    if (j.value("kind", "") != "aspectlens.catalog") throw ValidationError("not a catalog artifact");
    AspectCatalog c;
    c.prevalence_floor = j.at("prevalence_floor").get<double>();
    for (const auto& a : j.at("aspects"))
      c.aspects.push_back({a.at("label").get<std::string>(),
                           a.at("keywords").get<std::map<std::string, std::vector<std::string>>>()});
    for (const auto& [id, arr] : j.at("topic_to_aspect").items()) {
      auto& v = c.topic_to_aspect[id];
      for (const auto& x : arr)
        v.push_back(x.is_null() ? std::nullopt : std::optional<std::size_t>(x.get<std::size_t>()));
    }
    for (const auto& d : j.at("discarded"))
      c.discarded.push_back({d.at("model_id").get<std::string>(),
                             d.at("raw_topic").get<std::size_t>(), d.at("prevalence").get<double>(),
                             d.value("reason", "prevalence") == "merge_map"});
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed catalog artifact: ") + e.what());
  }
}

void LexicalRelations::add(std::string_view term, std::string_view relation,
                           std::string_view related, StemmerKind stemmer) {
  if (relation != "syn" && relation != "ant" && relation != "hypo" && relation != "hyper")
    throw ValidationError("unknown lexical relation '" + std::string(relation) +
                          "' (syn|ant|hypo|hyper)");
  const std::string key = stem(to_lower(trim(term)), stemmer);
  if (key.empty()) throw ValidationError("empty term in lexical relations");
  auto& list = related_[key];
  std::string value = to_lower(trim(related));
  if (std::find(list.begin(), list.end(), value) == list.end()) list.push_back(std::move(value));
}

LexicalRelations LexicalRelations::load(const std::filesystem::path& path, StemmerKind stemmer) {
  LexicalRelations out;
  for (const auto& rec : read_tsv(path)) {
    if (rec.fields.size() != 3)
      throw ValidationError(path.string() + ":" + std::to_string(rec.line) +
                            ": expected term<TAB>relation<TAB>related_term");
    try {
      out.add(rec.fields[0], rec.fields[1], rec.fields[2], stemmer);
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(rec.line) + ": " + e.what());
    }
  }
  return out;
}

const std::vector<std::string>* LexicalRelations::find(const std::string& stemmed) const {
  auto it = related_.find(stemmed);
  return it == related_.end() ? nullptr : &it->second;
}

WordListBuild build_custom_wordlists(const AspectCatalog& catalog,
                                     const LexicalRelations& relations, std::size_t n_keywords,
                                     const corpus::WordSet& stopwords, StemmerKind stemmer) {
  WordListBuild out;
  for (std::size_t a = 0; a < catalog.size(); ++a) {
    CustomWordList list;
    list.aspect_id = a;
    std::set<std::string> seeds;
    for (const auto& [model, kws] : catalog.aspects[a].keywords)
      for (std::size_t i = 0; i < std::min(n_keywords, kws.size()); ++i) seeds.insert(kws[i]);
    for (const auto& kw : seeds) {
      ++out.keywords;
      list.words.insert(kw);
      const auto* related = relations.find(kw);
      if (!related) {
        ++out.keywords_without_relations;
        continue;
      }
      for (const auto& r : *related)
        for (auto& t : corpus::tokenize(r, stopwords, stemmer)) list.words.insert(std::move(t));
    }
    out.lists.push_back(std::move(list));
  }
  return out;
}

std::optional<std::size_t> classify_single(const MemberView& view, double gamma) {
  if (view.oov || view.p.empty()) return std::nullopt;
  const auto it = std::max_element(view.p.begin(), view.p.end());
  if (*it > gamma) return static_cast<std::size_t>(it - view.p.begin());
  return std::nullopt;
}

std::string_view branch_name(Branch b) {
  switch (b) {
    case Branch::mode: return "mode";
    case Branch::confidence: return "confidence";
    case Branch::wordlist: return "wordlist";
    case Branch::null: return "null";
  }
  return "?";
}

void EnsembleConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0, 1)");
}

EnsembleDecision classify_ensemble(std::span<const MemberView> members,
                                   const std::vector<std::string>& tokens,
                                   const std::vector<CustomWordList>& lists,
                                   const EnsembleConfig& config, std::string_view sentence_id) {
  if (members.size() < 2) throw ValidationError("ensemble needs at least two member models");
  config.validate();
  const std::size_t A = lists.size();

  std::map<std::size_t, std::size_t> votes;
  double best_p = -1.0;
  std::size_t best_aspect = 0;
  for (const auto& m : members) {
    if (m.oov || m.p.empty()) continue;
    const auto it = std::max_element(m.p.begin(), m.p.end());
    if (*it <= 0.0) continue;
    const auto a = static_cast<std::size_t>(it - m.p.begin());
    ++votes[a];
    if (*it > best_p) best_p = *it, best_aspect = a;
  }
  if (!votes.empty()) {
    std::size_t top = 0, top_count = 0, ties = 0;
    for (const auto& [a, n] : votes) {
      if (n > top_count) top = a, top_count = n, ties = 1;
      else if (n == top_count) ++ties;
    }
    if (ties == 1) return {top, Branch::mode};
    if (best_p > config.gamma) return {best_aspect, Branch::confidence};
  }

  std::vector<std::size_t> score(A, 0);
  for (const auto& t : tokens)
    for (std::size_t a = 0; a < A; ++a)
      if (lists[a].words.contains(t)) ++score[a];
  const std::size_t max_score = A ? *std::max_element(score.begin(), score.end()) : 0;
  if (max_score > 0) {
    std::vector<std::size_t> tied;
    for (std::size_t a = 0; a < A; ++a)
      if (score[a] == max_score) tied.push_back(a);
    std::size_t pick = tied.front();
    if (tied.size() > 1) {
      Rng rng(mix_seed(config.tie_seed, fnv1a(sentence_id)));
      pick = tied[rng.below(tied.size())];
    }
    return {pick, Branch::wordlist};
  }
  return {std::nullopt, Branch::null};
}

void BranchCounters::add(Branch b) {
  switch (b) {
    case Branch::mode: ++mode; break;
    case Branch::confidence: ++confidence; break;
    case Branch::wordlist: ++wordlist; break;
    case Branch::null: ++null; break;
  }
}

}  // namespace aspectlens::aspects
