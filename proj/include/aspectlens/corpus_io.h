#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "aspectlens/corpus.h"
#include "json.hpp"

namespace aspectlens::corpus {

inline constexpr int kCorpusFormatVersion = 1;

struct CorpusOptions {
  std::size_t min_sentence_frequency = 3;
  std::size_t holdout_count = 0;
  bool dedupe = true;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// Everything downstream stages need from preprocessing. `sentences` holds
// every retained sentence; the vocabulary and matrix are built from the
// learning partition only, with matrix column i describing sentences[learning[i]].
struct CorpusArtifact {
  std::vector<ReviewSentence> sentences;
  Partition split;
  Vocabulary vocabulary;
  CorpusMatrix matrix;
  std::size_t reviews = 0;
  std::vector<SkippedRow> skipped;
  std::size_t duplicates_removed = 0;
  std::string stemmer = "porter2";
  std::size_t min_sentence_frequency = 3;
  std::uint64_t seed = 0;
};

CorpusArtifact assemble_corpus(const ReviewSet& reviews, const TextResources& resources,
                               const CorpusOptions& options);

nlohmann::json corpus_to_json(const CorpusArtifact& corpus);
CorpusArtifact corpus_from_json(const nlohmann::json& j);

void save_corpus(const std::filesystem::path& path, const CorpusArtifact& corpus);
CorpusArtifact load_corpus(const std::filesystem::path& path);

}  // namespace aspectlens::corpus
