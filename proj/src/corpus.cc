#include "aspectlens/corpus.h"

#include <algorithm>
#include <numeric>
#include <thread>
#include <unordered_set>

#include "json.hpp"

#include "aspectlens/util.h"

namespace aspectlens::corpus {

using nlohmann::json;

InputFormat parse_input_format(std::string_view name) {
  if (name == "csv") return InputFormat::csv;
  if (name == "jsonl") return InputFormat::jsonl;
  throw ValidationError("unknown input format '" + std::string(name) + "' (csv|jsonl)");
}

std::vector<CsvRecord> parse_csv(std::string_view text) {
  std::vector<CsvRecord> out;
  CsvRecord rec;
  std::string field;
  std::size_t line = 1;
  rec.line = 1;
  bool in_quotes = false;
  bool record_has_content = false;
  auto end_record = [&] {
    rec.fields.push_back(std::move(field));
    field.clear();
    if (record_has_content || rec.fields.size() > 1 || !rec.fields.front().empty())
      out.push_back(std::move(rec));
    rec = CsvRecord{};
    record_has_content = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        record_has_content = true;
        break;
      case ',':
        rec.fields.push_back(std::move(field));
        field.clear();
        record_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        rec.line = line;
        break;
      default:
        field += c;
    }
  }
  if (in_quotes) throw ValidationError("unterminated quoted field in CSV");
  if (!field.empty() || !rec.fields.empty() || record_has_content) end_record();
  return out;
}

namespace {

void add_review(ReviewSet& set, std::unordered_set<std::string>& seen, std::size_t line,
                Review review) {
  std::string missing;
  if (trim(review.review_id).empty()) missing = "review_id";
  else if (trim(review.entity_id).empty()) missing = "entity_id";
  else if (trim(review.text).empty()) missing = "text";
  if (!missing.empty()) {
    set.skipped.push_back({line, "missing " + missing});
    return;
  }
  review.review_id = std::string(trim(review.review_id));
  review.entity_id = std::string(trim(review.entity_id));
  if (!seen.insert(review.review_id).second)
    throw ValidationError("duplicate review_id '" + review.review_id + "' at line " +
                          std::to_string(line));
  set.reviews.push_back(std::move(review));
}

std::optional<double> parse_rating(std::string_view s) {
  if (trim(s).empty()) return std::nullopt;
  try {
    return parse_double(s, "rating");
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

ReviewSet ingest_csv(const std::string& text) {
  const auto records = parse_csv(text);
  if (records.empty()) throw ValidationError("CSV input has no header row");
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < records[0].fields.size(); ++i)
    col[to_lower(trim(records[0].fields[i]))] = i;
  for (const char* required : {"review_id", "entity_id", "text"})
    if (!col.contains(required))
      throw ValidationError(std::string("CSV header lacks required column '") + required + "'");

  ReviewSet set;
  std::unordered_set<std::string> seen;
  auto get = [&](const CsvRecord& r, const char* name) -> std::string {
    auto it = col.find(name);
    if (it == col.end() || it->second >= r.fields.size()) return {};
    return r.fields[it->second];
  };
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    Review review{get(r, "review_id"), get(r, "entity_id"), std::string(trim(get(r, "date"))),
                  parse_rating(get(r, "rating")), get(r, "text")};
    add_review(set, seen, r.line, std::move(review));
  }
  return set;
}

std::string json_field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  return it->dump();
}

ReviewSet ingest_jsonl(const std::string& text) {
  ReviewSet set;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error&) {
      set.skipped.push_back({line_no, "malformed JSON"});
      continue;
    }
    if (!obj.is_object()) {
      set.skipped.push_back({line_no, "not a JSON object"});
      continue;
    }
    std::optional<double> rating;
    if (auto it = obj.find("rating"); it != obj.end()) {
      if (it->is_number()) rating = it->get<double>();
      else if (it->is_string()) rating = parse_rating(it->get<std::string>());
    }
    Review review{json_field(obj, "review_id"), json_field(obj, "entity_id"),
                  json_field(obj, "date"), rating, json_field(obj, "text")};
    add_review(set, seen, line_no, std::move(review));
  }
  return set;
}

}  // namespace

ReviewSet ingest_reviews(const std::filesystem::path& path, InputFormat format) {
  const std::string text = read_file(path);
  return format == InputFormat::csv ? ingest_csv(text) : ingest_jsonl(text);
}

PreprocessResult preprocess(const ReviewSet& reviews, const TextResources& resources,
                            bool dedupe, unsigned threads) {
  // Pure per-review map, written into fixed slots so the result does not
  // depend on scheduling.
  std::vector<std::vector<ReviewSentence>> per_review(reviews.reviews.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Review& review = reviews.reviews[i];
      const auto pieces = split_sentences(review.text, resources.abbreviations);
      auto& out = per_review[i];
      out.reserve(pieces.size());
      for (std::size_t pos = 0; pos < pieces.size(); ++pos) {
        ReviewSentence s;
        s.sentence_id = review.review_id + "#" + std::to_string(pos);
        s.review_id = review.review_id;
        s.entity_id = review.entity_id;
        s.position = pos;
        s.raw_text = pieces[pos];
        s.tokens = tokenize(normalize(pieces[pos], resources.standardization),
                            resources.stopwords, resources.stemmer);
        out.push_back(std::move(s));
      }
    }
  };
  const std::size_t n = reviews.reviews.size();
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
      const std::size_t b = t * chunk, e = std::min(n, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }

  PreprocessResult result;
  std::unordered_map<std::string, std::unordered_set<std::string>> seen_by_entity;
  for (auto& list : per_review) {
    for (auto& s : list) {
      if (dedupe && !seen_by_entity[s.entity_id].insert(s.raw_text).second) {
        ++result.duplicates_removed;
        continue;
      }
      result.sentences.push_back(std::move(s));
    }
  }
  return result;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> sentence_frequency)
    : terms_(std::move(terms)), sentence_frequency_(std::move(sentence_frequency)) {
  if (sentence_frequency_.size() != terms_.size())
    throw ValidationError("vocabulary frequency table size mismatch");
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!index_.emplace(terms_[i], static_cast<TermId>(i)).second)
      throw ValidationError("duplicate vocabulary term '" + terms_[i] + "'");
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::fingerprint() const {
  std::uint64_t h = fnv1a("aspectlens-vocabulary");
  for (const auto& t : terms_) {
    h = fnv1a(t, h);
    h = fnv1a("\n", h);
  }
  return h;
}

EncodedSentence encode(const Vocabulary& vocab, const std::vector<std::string>& tokens) {
  EncodedSentence out;
  std::vector<TermId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (auto id = vocab.find(t)) ids.push_back(*id);
    else ++out.oov;
  }
  std::sort(ids.begin(), ids.end());
  for (TermId id : ids) {
    if (!out.counts.empty() && out.counts.back().term == id) ++out.counts.back().count;
    else out.counts.push_back({id, 1});
  }
  out.length = ids.size();
  return out;
}

CorpusMatrix::CorpusMatrix(std::size_t num_terms, std::vector<EncodedSentence> columns)
    : num_terms_(num_terms), columns_(std::move(columns)) {
  for (const auto& col : columns_) {
    std::size_t sum = 0;
    for (const auto& tc : col.counts) {
      if (tc.term >= num_terms_) throw ValidationError("matrix term index out of range");
      if (tc.count == 0) throw ValidationError("matrix stores a zero count");
      sum += tc.count;
    }
    if (sum != col.length) throw ValidationError("matrix column length mismatch");
    total_tokens_ += sum;
  }
}

std::uint32_t CorpusMatrix::count(TermId w, std::size_t r) const {
  const auto& counts = columns_[r].counts;
  auto it = std::lower_bound(counts.begin(), counts.end(), w,
                             [](const TermCount& tc, TermId id) { return tc.term < id; });
  return it != counts.end() && it->term == w ? it->count : 0;
}

std::size_t CorpusMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.counts.size();
  return n;
}

VocabularyBuild build_vocabulary(const std::vector<ReviewSentence>& sentences,
                                 std::size_t min_sentence_frequency) {
  if (min_sentence_frequency < 1)
    throw ValidationError("min_sentence_frequency must be at least 1");
  std::vector<std::string> order;
  std::unordered_map<std::string, std::uint32_t> df;
  for (const auto& s : sentences) {
    std::unordered_set<std::string_view> in_sentence;
    for (const auto& t : s.tokens) {
      if (!in_sentence.insert(t).second) continue;
      auto [it, inserted] = df.emplace(t, 0);
      if (inserted) order.push_back(t);
      ++it->second;
    }
  }
  std::vector<std::string> terms;
  std::vector<std::uint32_t> freq;
  for (auto& t : order) {
    const auto f = df[t];
    if (f >= min_sentence_frequency) {
      terms.push_back(t);
      freq.push_back(f);
    }
  }
  Vocabulary vocab(std::move(terms), std::move(freq));
  std::vector<EncodedSentence> columns;
  columns.reserve(sentences.size());
  std::size_t total = 0;
  for (const auto& s : sentences) {
    columns.push_back(encode(vocab, s.tokens));
    total += columns.back().length;
  }
  if (total == 0)
    throw ValidationError("empty corpus: no sentence keeps a token after vocabulary filtering");
  CorpusMatrix matrix(vocab.size(), std::move(columns));
  return {std::move(vocab), std::move(matrix)};
}

Partition partition(std::size_t num_sentences, const SplitSpec& spec) {
  if (spec.holdout_count > num_sentences)
    throw ValidationError("holdout_count " + std::to_string(spec.holdout_count) +
                          " exceeds sentence count " + std::to_string(num_sentences));
  std::vector<std::size_t> idx(num_sentences);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(mix_seed(spec.seed, 0x5017));
  // Partial Fisher-Yates: the first holdout_count slots are the sample.
  for (std::size_t i = 0; i < spec.holdout_count; ++i) {
    const std::size_t j = i + rng.below(num_sentences - i);
    std::swap(idx[i], idx[j]);
  }
  Partition p;
  p.holdout.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(spec.holdout_count));
  std::sort(p.holdout.begin(), p.holdout.end());
  std::vector<char> held(num_sentences, 0);
  for (auto i : p.holdout) held[i] = 1;
  for (std::size_t i = 0; i < num_sentences; ++i)
    if (!held[i]) p.learning.push_back(i);
  return p;
}

}  // namespace aspectlens::corpus
