#include "aspectlens/corpus_io.h"

#include "aspectlens/util.h"

namespace aspectlens::corpus {

using nlohmann::json;

CorpusArtifact assemble_corpus(const ReviewSet& reviews, const TextResources& resources,
                               const CorpusOptions& options) {
  CorpusArtifact out;
  auto pre = preprocess(reviews, resources, options.dedupe, options.threads);
  out.sentences = std::move(pre.sentences);
  out.duplicates_removed = pre.duplicates_removed;
  out.reviews = reviews.reviews.size();
  out.skipped = reviews.skipped;
  out.stemmer = std::string(stemmer_name(resources.stemmer));
  out.min_sentence_frequency = options.min_sentence_frequency;
  out.seed = options.seed;
  out.split = partition(out.sentences.size(), {options.holdout_count, options.seed});

  std::vector<ReviewSentence> learning;
  learning.reserve(out.split.learning.size());
  for (auto i : out.split.learning) learning.push_back(out.sentences[i]);
  auto built = build_vocabulary(learning, options.min_sentence_frequency);
  out.vocabulary = std::move(built.vocabulary);
  out.matrix = std::move(built.matrix);
  return out;
}

json corpus_to_json(const CorpusArtifact& c) {
  json sentences = json::array();
  std::vector<char> held(c.sentences.size(), 0);
  for (auto i : c.split.holdout) held[i] = 1;
  for (std::size_t i = 0; i < c.sentences.size(); ++i) {
    const auto& s = c.sentences[i];
    sentences.push_back({{"sentence_id", s.sentence_id},
                         {"review_id", s.review_id},
                         {"entity_id", s.entity_id},
                         {"position", s.position},
                         {"raw_text", s.raw_text},
                         {"tokens", s.tokens},
                         {"split", held[i] ? "holdout" : "learning"}});
  }
  json triplets = json::array();
  for (std::size_t r = 0; r < c.matrix.num_sentences(); ++r)
    for (const auto& tc : c.matrix.column(r).counts) triplets.push_back({tc.term, r, tc.count});
  json skipped = json::array();
  for (const auto& s : c.skipped) skipped.push_back({{"line", s.line}, {"reason", s.reason}});
  return {{"format_version", kCorpusFormatVersion},
          {"kind", "aspectlens.corpus"},
          {"stemmer", c.stemmer},
          {"min_sentence_frequency", c.min_sentence_frequency},
          {"seed", c.seed},
          {"reviews", c.reviews},
          {"skipped_rows", skipped},
          {"duplicates_removed", c.duplicates_removed},
          {"vocabulary", c.vocabulary.terms()},
          {"sentence_frequency", c.vocabulary.sentence_frequency()},
          {"vocabulary_fingerprint", hex64(c.vocabulary.fingerprint())},
          {"sentences", sentences},
          {"learning", c.split.learning},
          {"matrix", {{"rows", c.matrix.num_terms()},
                      {"columns", c.matrix.num_sentences()},
                      {"triplets", triplets}}}};
}

CorpusArtifact corpus_from_json(const json& j) {
  try {
    if (j.value("kind", "") != "aspectlens.corpus")
      throw ValidationError("not a corpus artifact");
    const int version = j.at("format_version").get<int>();
    if (version != kCorpusFormatVersion)
      throw ValidationError("unsupported corpus format_version " + std::to_string(version));
    CorpusArtifact c;
    c.stemmer = j.at("stemmer").get<std::string>();
    c.min_sentence_frequency = j.at("min_sentence_frequency").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.reviews = j.at("reviews").get<std::size_t>();
    for (const auto& s : j.at("skipped_rows"))
      c.skipped.push_back({s.at("line").get<std::size_t>(), s.at("reason").get<std::string>()});
    c.duplicates_removed = j.at("duplicates_removed").get<std::size_t>();
    c.vocabulary = Vocabulary(j.at("vocabulary").get<std::vector<std::string>>(),
                              j.at("sentence_frequency").get<std::vector<std::uint32_t>>());
    for (std::size_t i = 0; i < j.at("sentences").size(); ++i) {
      const auto& s = j.at("sentences")[i];
      ReviewSentence rs;
      rs.sentence_id = s.at("sentence_id").get<std::string>();
      rs.review_id = s.at("review_id").get<std::string>();
      rs.entity_id = s.at("entity_id").get<std::string>();
      rs.position = s.at("position").get<std::size_t>();
      rs.raw_text = s.at("raw_text").get<std::string>();
      rs.tokens = s.at("tokens").get<std::vector<std::string>>();
      const auto split = s.at("split").get<std::string>();
      if (split == "holdout") c.split.holdout.push_back(i);
      else if (split != "learning") throw ValidationError("bad split tag '" + split + "'");
      c.sentences.push_back(std::move(rs));
    }
    c.split.learning = j.at("learning").get<std::vector<std::size_t>>();
    const auto& m = j.at("matrix");
    const auto rows = m.at("rows").get<std::size_t>();
    const auto cols = m.at("columns").get<std::size_t>();
    if (rows != c.vocabulary.size() || cols != c.split.learning.size())
      throw ValidationError("matrix shape does not match vocabulary and learning set");
    std::vector<EncodedSentence> columns(cols);
    for (const auto& t : m.at("triplets")) {
      const auto w = t.at(0).get<TermId>();
      const auto r = t.at(1).get<std::size_t>();
      const auto n = t.at(2).get<std::uint32_t>();
      if (r >= cols) throw ValidationError("matrix triplet column out of range");
      columns[r].counts.push_back({w, n});
      columns[r].length += n;
    }
    for (std::size_t r = 0; r < cols; ++r) {
      const auto& tokens = c.sentences.at(c.split.learning[r]).tokens;
      columns[r].oov = tokens.size() - std::min(tokens.size(), columns[r].length);
    }
    c.matrix = CorpusMatrix(rows, std::move(columns));
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed corpus artifact: ") + e.what());
  }
}

void save_corpus(const std::filesystem::path& path, const CorpusArtifact& corpus) {
  write_file(path, corpus_to_json(corpus).dump(1) + "\n");
}

CorpusArtifact load_corpus(const std::filesystem::path& path) {
  const auto text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return corpus_from_json(j);
}

}  // namespace aspectlens::corpus
