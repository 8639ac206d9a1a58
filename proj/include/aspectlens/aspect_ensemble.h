#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "aspectlens/text.h"
#include "aspectlens/topic_model.h"
#include "json.hpp"

namespace aspectlens::aspects {

inline constexpr std::string_view kNullLabel = "Null";

struct MergeEntry {
  std::string model_id;
  std::size_t raw_topic = 0;
  std::string aspect_label;
};
using MergeMap = std::vector<MergeEntry>;

// TSV: model_id, raw_topic, aspect_label. The label "Null" discards the topic.
MergeMap load_merge_map(const std::filesystem::path& path);
// Raw topic k of every model becomes aspect "topic_k".
MergeMap identity_merge_map(const std::vector<std::pair<std::string, std::size_t>>& models);

struct ModelRef {
  std::string id;
  const topics::FittedTopicModel* model = nullptr;
};

struct AspectEntry {
  std::string label;
  std::map<std::string, std::vector<std::string>> keywords;  // model id -> top terms
};

struct DiscardedTopic {
  std::string model_id;
  std::size_t raw_topic = 0;
  double prevalence = 0.0;
  bool by_merge_map = false;  // labelled Null rather than below the floor
};

struct AspectCatalog {
  std::vector<AspectEntry> aspects;
  // Per model, raw topic -> aspect id; empty for discarded topics.
  std::map<std::string, std::vector<std::optional<std::size_t>>> topic_to_aspect;
  std::vector<DiscardedTopic> discarded;
  double prevalence_floor = 0.0;

  std::size_t size() const { return aspects.size(); }
  std::optional<std::size_t> find(std::string_view label) const;
  // Sums raw-topic probabilities within each merged aspect; mass of discarded
  // topics is dropped.
  std::vector<double> map_probabilities(const std::string& model_id,
                                        std::span<const double> raw) const;
};

// Raw topics with mean training theta below `prevalence_floor` are discarded,
// as are topics the merge map labels "Null"; the rest must each be mapped by
// `merge_map`. Aspect ids follow the order in
// which labels first appear in the map.
AspectCatalog build_catalog(const std::vector<ModelRef>& models, const corpus::Vocabulary& vocab,
                            double prevalence_floor, const MergeMap& merge_map,
                            std::size_t n_keywords = 10);

nlohmann::json catalog_to_json(const AspectCatalog& c);
AspectCatalog catalog_from_json(const nlohmann::json& j);

// term<TAB>relation<TAB>related with relation in {syn, ant, hypo, hyper}.
// Keys are stemmed so corpus keywords (already stems) find their entries.
class LexicalRelations {
 public:
  LexicalRelations() = default;
  static LexicalRelations load(const std::filesystem::path& path, StemmerKind stemmer);
  void add(std::string_view term, std::string_view relation, std::string_view related,
           StemmerKind stemmer);
  const std::vector<std::string>* find(const std::string& stemmed) const;
  std::size_t size() const { return related_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::string>> related_;
};

struct CustomWordList {
  std::size_t aspect_id = 0;
  std::set<std::string> words;
};

struct WordListBuild {
  std::vector<CustomWordList> lists;
  std::size_t keywords = 0;
  std::size_t keywords_without_relations = 0;
};

WordListBuild build_custom_wordlists(const AspectCatalog& catalog,
                                     const LexicalRelations& relations, std::size_t n_keywords,
                                     const corpus::WordSet& stopwords, StemmerKind stemmer);

// One member's view of a sentence in catalog-aspect space.
struct MemberView {
  std::vector<double> p;
  bool oov = false;
};

std::optional<std::size_t> classify_single(const MemberView& view, double gamma);

enum class Branch { mode, confidence, wordlist, null };
std::string_view branch_name(Branch b);

struct EnsembleConfig {
  double gamma = 0.7;
  std::uint64_t tie_seed = 0;
  void validate() const;
};

struct EnsembleDecision {
  std::optional<std::size_t> aspect;
  Branch branch = Branch::null;
};

// Four steps in order: unique mode of the member argmaxes; the single most
// confident member probability if it exceeds gamma; custom word-list overlap
// counted with multiplicity, ties broken by a draw seeded from tie_seed and the
// sentence id; otherwise Null. OOV members do not vote.
EnsembleDecision classify_ensemble(std::span<const MemberView> members,
                                   const std::vector<std::string>& tokens,
                                   const std::vector<CustomWordList>& lists,
                                   const EnsembleConfig& config, std::string_view sentence_id);

struct BranchCounters {
  std::size_t mode = 0, confidence = 0, wordlist = 0, null = 0;
  void add(Branch b);
  std::size_t total() const { return mode + confidence + wordlist + null; }
};

}  // namespace aspectlens::aspects
