#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "aspectlens/text.h"

namespace aspectlens::corpus {

struct Review {
  std::string review_id;
  std::string entity_id;
  std::string date;  // empty when absent
  std::optional<double> rating;
  std::string text;
};

struct SkippedRow {
  std::size_t line = 0;
  std::string reason;
};

struct ReviewSet {
  std::vector<Review> reviews;
  std::vector<SkippedRow> skipped;
};

enum class InputFormat { csv, jsonl };
InputFormat parse_input_format(std::string_view name);

// Reads reviews from CSV (header row, RFC-4180 quoting) or JSON lines.
// Rows lacking review_id, entity_id or non-blank text are skipped and
// recorded; an unreadable file throws IoError and a duplicate review_id
// throws ValidationError.
ReviewSet ingest_reviews(const std::filesystem::path& path, InputFormat format);

// Parses RFC-4180 CSV text into records; each record carries the line number
// where it starts. Exposed for the annotation reader.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};
std::vector<CsvRecord> parse_csv(std::string_view text);

struct ReviewSentence {
  std::string sentence_id;  // "<review_id>#<position>"
  std::string review_id;
  std::string entity_id;
  std::size_t position = 0;
  std::string raw_text;
  std::vector<std::string> tokens;
};

struct TextResources {
  WordSet stopwords = default_stopwords();
  WordSet abbreviations = default_abbreviations();
  StandardizationMap standardization;
  StemmerKind stemmer = StemmerKind::porter2;
};

struct PreprocessResult {
  std::vector<ReviewSentence> sentences;
  std::size_t duplicates_removed = 0;
};

// Sentence split, normalize and tokenize every review. With `dedupe`, exact
// repeats of a raw sentence string within one entity keep only their first
// occurrence. Work is spread over `threads` workers; output order is review
// order then sentence position regardless of thread count.
PreprocessResult preprocess(const ReviewSet& reviews, const TextResources& resources,
                            bool dedupe, unsigned threads = 1);

using TermId = std::uint32_t;

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> sentence_frequency);

  std::size_t size() const { return terms_.size(); }
  const std::string& term(TermId id) const { return terms_[id]; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::uint32_t>& sentence_frequency() const { return sentence_frequency_; }
  std::optional<TermId> find(std::string_view term) const;

  // Stable hash of the ordered term list; models record it so they are only
  // ever applied to sentences encoded with the same vocabulary.
  std::uint64_t fingerprint() const;

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint32_t> sentence_frequency_;
  std::unordered_map<std::string, TermId> index_;
};

struct TermCount {
  TermId term = 0;
  std::uint32_t count = 0;
};

// Term counts of one sentence, sorted by term id. Tokens missing from the
// vocabulary are counted in `oov`.
struct EncodedSentence {
  std::vector<TermCount> counts;
  std::size_t length = 0;  // sum of counts
  std::size_t oov = 0;
};
EncodedSentence encode(const Vocabulary& vocab, const std::vector<std::string>& tokens);

// Sparse word-by-sentence count matrix stored by sentence (column).
class CorpusMatrix {
 public:
  CorpusMatrix() = default;
  CorpusMatrix(std::size_t num_terms, std::vector<EncodedSentence> columns);

  std::size_t num_terms() const { return num_terms_; }
  std::size_t num_sentences() const { return columns_.size(); }
  const EncodedSentence& column(std::size_t r) const { return columns_[r]; }
  std::uint32_t count(TermId w, std::size_t r) const;
  std::size_t total_tokens() const { return total_tokens_; }
  std::size_t nonzeros() const;

 private:
  std::size_t num_terms_ = 0;
  std::vector<EncodedSentence> columns_;
  std::size_t total_tokens_ = 0;
};

struct VocabularyBuild {
  Vocabulary vocabulary;
  CorpusMatrix matrix;
};

// Terms appearing in fewer than `min_sentence_frequency` sentences are
// dropped. Term ids follow first appearance in sentence order. Throws
// ValidationError when nothing survives.
VocabularyBuild build_vocabulary(const std::vector<ReviewSentence>& sentences,
                                 std::size_t min_sentence_frequency);

struct SplitSpec {
  std::size_t holdout_count = 0;
  std::uint64_t seed = 0;
};

// Indices into the input list, each ascending.
struct Partition {
  std::vector<std::size_t> learning;
  std::vector<std::size_t> holdout;
};

// Seeded uniform sampling without replacement of the held-out set.
Partition partition(std::size_t num_sentences, const SplitSpec& spec);

}  // namespace aspectlens::corpus
