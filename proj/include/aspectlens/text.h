#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "aspectlens/stemmer.h"

namespace aspectlens::corpus {

using WordSet = std::unordered_set<std::string>;

// Built-in English stopword list; data/stopwords.txt ships the same words.
const WordSet& default_stopwords();
// Built-in abbreviation exceptions for sentence splitting (lowercase, with
// their trailing period); data/abbreviations.txt ships the same entries.
const WordSet& default_abbreviations();

WordSet load_word_set(const std::filesystem::path& path);

// Variant -> canonical term substitutions, covering both spelling fixes and
// standardization of identical words ("wi-fi" -> "wifi"). Chains are resolved
// at construction so applying the map once reaches a fixed point.
class StandardizationMap {
 public:
  StandardizationMap() = default;
  explicit StandardizationMap(
      const std::vector<std::pair<std::string, std::string>>& pairs);

  static StandardizationMap load(const std::filesystem::path& tsv);

  // Canonical form for a lowercase word core, or nullptr when unmapped.
  const std::string* find(std::string_view core) const;
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::unordered_map<std::string, std::string>& entries() const { return map_; }

 private:
  std::unordered_map<std::string, std::string> map_;
};

// Splits on '.', '!' and '?' runs that are followed by whitespace or the end
// of the text. A single '.' closing a word from `abbreviations` does not end a
// sentence. Leading terminators and whitespace are trimmed from every
// sentence; fragments without any letter or digit are dropped.
std::vector<std::string> split_sentences(std::string_view text, const WordSet& abbreviations);

// Lowercases, collapses whitespace runs and runs of one repeated punctuation
// character, and applies `map` to each word core. Idempotent.
std::string normalize(std::string_view sentence, const StandardizationMap& map);

// Same whitespace collapsing and map substitution as normalize, but keeps
// letter case and punctuation runs: the sentiment analyzers read capitals and
// exclamation marks.
std::string prepare_for_sentiment(std::string_view sentence, const StandardizationMap& map);

// Tokens of at least two characters containing a letter, stopwords removed
// (checked before and after stemming), in sentence order with duplicates.
std::vector<std::string> tokenize(std::string_view normalized, const WordSet& stopwords,
                                  StemmerKind stemmer);

}  // namespace aspectlens::corpus
