#include "aspectlens/commands.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "aspectlens/aspect_ensemble.h"
#include "aspectlens/corpus_io.h"
#include "aspectlens/evaluation.h"
#include "aspectlens/insights.h"
#include "aspectlens/sentiment.h"
#include "aspectlens/topic_model.h"
#include "aspectlens/util.h"

namespace aspectlens::cli {

using nlohmann::json;

const std::vector<std::string_view>& subcommands() {
  static const std::vector<std::string_view> names{
      "ingest", "select-k", "fit", "classify-aspects", "classify-sentiment",
      "evaluate", "aos", "bigrams", "matrix", "pipeline"};
  return names;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Context {
  const ProjectConfig& config;
  std::ostream& out;
  bool color = false;
  json outputs = json::object();
  json timings = json::object();

  fs::path path(const std::string& name) const { return config.paths.output / name; }

  void emit(const std::string& name, const std::string& contents) {
    write_file(path(name), contents);
    outputs[name] = hex64(fnv1a(contents));
  }

  void require(const std::string& name, std::string_view producer) const {
    if (!fs::exists(path(name)))
      throw ValidationError(path(name).string() + " is missing; run '" + std::string(producer) +
                            "' first");
  }
};

std::string jsonl(const std::vector<json>& rows) {
  std::string s;
  for (const auto& r : rows) s += r.dump() + "\n";
  return s;
}

std::vector<json> read_jsonl(const fs::path& path) {
  std::vector<json> rows;
  std::size_t line = 0;
  for (const auto& raw : split(read_file(path), '\n')) {
    ++line;
    if (trim(raw).empty()) continue;
    try {
      rows.push_back(json::parse(raw));
    } catch (const json::parse_error& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  }
  return rows;
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

corpus::TextResources text_resources(const ProjectConfig& c) {
  corpus::TextResources r;
  if (c.paths.stopwords) r.stopwords = corpus::load_word_set(*c.paths.stopwords);
  if (c.paths.abbreviations) r.abbreviations = corpus::load_word_set(*c.paths.abbreviations);
  if (c.paths.standardization)
    r.standardization = corpus::StandardizationMap::load(*c.paths.standardization);
  r.stemmer = c.stemmer;
  return r;
}

corpus::CorpusArtifact load_corpus_artifact(Context& ctx) {
  ctx.require("corpus.json", "ingest");
  return corpus::load_corpus(ctx.path("corpus.json"));
}

std::string model_file(const ModelSpec& m) { return "model_" + m.id + ".json"; }

// ---------------------------------------------------------------- ingest

void stage_ingest(Context& ctx) {
  const auto& c = ctx.config;
  const auto reviews = corpus::ingest_reviews(c.paths.reviews, c.paths.format);
  auto corpus = corpus::assemble_corpus(reviews, text_resources(c), c.corpus);
  ctx.emit("corpus.json", corpus::corpus_to_json(corpus).dump(1));
  std::ostringstream skipped;
  skipped << "line,reason\n";
  for (const auto& s : corpus.skipped) skipped << s.line << ',' << csv_field(s.reason) << '\n';
  ctx.emit("skipped_rows.csv", skipped.str());
  ctx.out << "ingest: " << corpus.reviews << " reviews, " << corpus.skipped.size()
          << " skipped rows, " << corpus.sentences.size() << " sentences ("
          << corpus.duplicates_removed << " duplicates removed), " << corpus.split.learning.size()
          << " learning / " << corpus.split.holdout.size() << " held out, vocabulary "
          << corpus.vocabulary.size() << " terms\n";
}

// ---------------------------------------------------------------- select-k

topics::ModelConfig selection_template(const ProjectConfig& c) {
  for (const auto& m : c.models)
    if (m.config.algorithm == c.select_k_algorithm) return m.config;
  auto t = topics::ModelConfig::defaults(c.select_k_algorithm);
  t.seed = mix_seed(c.seed, fnv1a("select-k"));
  return t;
}

void stage_select_k(Context& ctx) {
  const auto corpus = load_corpus_artifact(ctx);
  const auto result =
      topics::select_k(corpus.matrix, selection_template(ctx.config), ctx.config.select_k);
  ctx.emit("select_k.json", topics::selection_to_json(result, ctx.config.select_k_algorithm).dump(1));
  std::ostringstream csv;
  csv << "K,mean_coherence\n";
  for (const auto& row : result.rows) csv << row.K << ',' << format_fixed(row.mean_coherence, 6) << '\n';
  ctx.emit("select_k.csv", csv.str());
  ctx.out << "select-k: " << topics::algorithm_name(ctx.config.select_k_algorithm) << " K in ["
          << result.k_min << ", " << result.k_max << "], chosen K = " << result.chosen << '\n';
}

// ---------------------------------------------------------------- fit

std::string topics_report(const topics::FittedTopicModel& m, const corpus::Vocabulary& vocab,
                          const topics::CoherenceReport& coherence) {
  const auto prevalence = m.prevalence();
  std::ostringstream out;
  out << "# " << topics::algorithm_name(m.algorithm()) << " K=" << m.num_topics
      << " mean coherence " << format_fixed(coherence.mean, 4) << '\n';
  for (std::size_t k = 0; k < m.num_topics; ++k) {
    out << "topic " << k << "\tprevalence " << format_fixed(prevalence[k], 4) << "\tcoherence "
        << format_fixed(coherence.per_topic[k], 4) << '\t';
    const auto top = m.top_terms(k, 10);
    for (std::size_t i = 0; i < top.size(); ++i)
      out << (i ? " " : "") << vocab.terms()[top[i]];
    out << '\n';
  }
  return out.str();
}

void stage_fit(Context& ctx) {
  const auto corpus = load_corpus_artifact(ctx);
  std::optional<std::size_t> chosen;
  for (const auto& spec : ctx.config.models) {
    auto config = spec.config;
    if (spec.auto_k) {
      if (!chosen) {
        ctx.require("select_k.json", "select-k");
        chosen = read_json(ctx.path("select_k.json")).at("chosen").get<std::size_t>();
      }
      config.K = *chosen;
    }
    const auto t0 = Clock::now();
    const auto model = topics::fit(corpus.matrix, config, corpus.vocabulary.fingerprint());
    ctx.timings["fit_" + spec.id] =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    const auto coherence = topics::coherence(model, corpus.matrix);
    ctx.emit(model_file(spec), topics::model_to_json(model).dump(1));
    ctx.emit("topics_" + spec.id + ".txt", topics_report(model, corpus.vocabulary, coherence));
    ctx.out << "fit: " << spec.id << " (" << topics::algorithm_name(config.algorithm)
            << ") K=" << config.K << ", " << model.objective_trace.size()
            << " iterations, coherence " << format_fixed(coherence.mean, 4) << '\n';
  }
}

// ---------------------------------------------------------------- classify-aspects

void stage_classify_aspects(Context& ctx) {
  const auto& c = ctx.config;
  const auto corpus = load_corpus_artifact(ctx);
  std::vector<topics::FittedTopicModel> models;
  for (const auto& spec : c.models) {
    ctx.require(model_file(spec), "fit");
    models.push_back(topics::load_model(ctx.path(model_file(spec))));
    if (models.back().vocabulary_fingerprint != corpus.vocabulary.fingerprint())
      throw ValidationError(model_file(spec) + " was fitted on a different corpus; rerun 'fit'");
  }
  std::vector<aspects::ModelRef> refs;
  for (std::size_t i = 0; i < models.size(); ++i) refs.push_back({c.models[i].id, &models[i]});

  aspects::MergeMap merge;
  if (c.paths.merge_map) {
    merge = aspects::load_merge_map(*c.paths.merge_map);
  } else {
    std::vector<std::pair<std::string, std::size_t>> sizes;
    for (std::size_t i = 0; i < models.size(); ++i) sizes.emplace_back(c.models[i].id, models[i].num_topics);
    merge = aspects::identity_merge_map(sizes);
  }
  const auto catalog =
      aspects::build_catalog(refs, corpus.vocabulary, c.prevalence_floor, merge, c.n_keywords);
  ctx.emit("catalog.json", aspects::catalog_to_json(catalog).dump(1));

  aspects::LexicalRelations relations;
  if (c.paths.relations) relations = aspects::LexicalRelations::load(*c.paths.relations, c.stemmer);
  const auto resources = text_resources(c);
  const auto lists =
      aspects::build_custom_wordlists(catalog, relations, c.n_keywords, resources.stopwords, c.stemmer);

  auto label = [&](std::optional<std::size_t> a) {
    return a ? catalog.aspects[*a].label : std::string(aspects::kNullLabel);
  };
  std::vector<json> rows;
  aspects::BranchCounters counters;
  std::map<std::string, std::size_t> per_member_null;
  for (const auto& s : corpus.sentences) {
    std::vector<aspects::MemberView> views;
    json members = json::object();
    for (std::size_t i = 0; i < models.size(); ++i) {
      const auto theta = topics::infer_theta(models[i], corpus.vocabulary, s.tokens);
      aspects::MemberView view{catalog.map_probabilities(c.models[i].id, theta.p), theta.oov};
      const auto single = aspects::classify_single(view, c.ensemble.gamma);
      members[c.models[i].id] = label(single);
      if (!single) ++per_member_null[c.models[i].id];
      views.push_back(std::move(view));
    }
    const auto d = aspects::classify_ensemble(views, s.tokens, lists.lists, c.ensemble, s.sentence_id);
    counters.add(d.branch);
    rows.push_back({{"sentence_id", s.sentence_id},
                    {"entity_id", s.entity_id},
                    {"aspect", label(d.aspect)},
                    {"branch", aspects::branch_name(d.branch)},
                    {"members", members}});
  }
  ctx.emit("aspects.jsonl", jsonl(rows));
  json summary = {{"sentences", rows.size()},
                  {"aspects", catalog.size()},
                  {"discarded_topics", catalog.discarded.size()},
                  {"keywords", lists.keywords},
                  {"keywords_without_relations", lists.keywords_without_relations},
                  {"branches",
                   {{"mode", counters.mode},
                    {"confidence", counters.confidence},
                    {"wordlist", counters.wordlist},
                    {"null", counters.null}}},
                  {"member_null", per_member_null}};
  ctx.emit("aspects_summary.json", summary.dump(1));
  ctx.out << "classify-aspects: " << rows.size() << " sentences, " << catalog.size()
          << " aspects; branches mode " << counters.mode << ", confidence " << counters.confidence
          << ", wordlist " << counters.wordlist << ", null " << counters.null << '\n';
}

// ---------------------------------------------------------------- classify-sentiment

std::vector<sentiment::Analyzer> load_analyzers(const ProjectConfig& c) {
  if (c.analyzers.size() < 2)
    throw ValidationError("sentiment.analyzers must list at least two analyzers");
  std::vector<sentiment::Analyzer> out;
  for (const auto& spec : c.analyzers) {
    sentiment::Analyzer a;
    a.id = spec.id;
    a.style = spec.style;
    a.lexicon = sentiment::Lexicon::load(spec.lexicon, spec.scale_min, spec.scale_max);
    if (spec.modifiers) a.modifiers = sentiment::Modifiers::load(*spec.modifiers);
    a.thresholds = spec.thresholds;
    out.push_back(std::move(a));
  }
  return out;
}

void stage_classify_sentiment(Context& ctx) {
  const auto& c = ctx.config;
  const auto corpus = load_corpus_artifact(ctx);
  const auto analyzers = load_analyzers(c);
  const auto resources = text_resources(c);
  const std::size_t L = analyzers.size();

  std::vector<std::vector<double>> values;
  values.reserve(corpus.sentences.size());
  for (const auto& s : corpus.sentences) {
    const auto text =
        sentiment::analyze_text(corpus::prepare_for_sentiment(s.raw_text, resources.standardization));
    std::vector<double> v;
    for (const auto& a : analyzers) v.push_back(a.score(text).value);
    values.push_back(std::move(v));
  }
  const auto calibration = sentiment::calibrate(values, L);
  std::vector<sentiment::Thresholds> thresholds;
  for (const auto& a : analyzers) thresholds.push_back(a.thresholds);

  std::vector<json> rows;
  std::map<std::string, std::size_t> totals, paths;
  for (std::size_t r = 0; r < corpus.sentences.size(); ++r) {
    const auto verdict = sentiment::classify_sentiment_ensemble(values[r], thresholds, calibration);
    json scores = json::object(), categories = json::object();
    for (std::size_t l = 0; l < L; ++l) {
      scores[analyzers[l].id] = verdict.v[l];
      categories[analyzers[l].id] = sentiment::category_name(verdict.o[l]);
    }
    ++totals[std::string(sentiment::category_name(verdict.ensemble))];
    ++paths[std::string(sentiment::path_name(verdict.path))];
    rows.push_back({{"sentence_id", corpus.sentences[r].sentence_id},
                    {"entity_id", corpus.sentences[r].entity_id},
                    {"sentiment", sentiment::category_name(verdict.ensemble)},
                    {"path", sentiment::path_name(verdict.path)},
                    {"scores", scores},
                    {"categories", categories}});
  }
  ctx.emit("sentiment.jsonl", jsonl(rows));
  json cal = json::array();
  for (std::size_t l = 0; l < L; ++l)
    cal.push_back({{"analyzer", analyzers[l].id},
                   {"min", calibration.ranges[l].min},
                   {"max", calibration.ranges[l].max},
                   {"degenerate", calibration.ranges[l].degenerate()}});
  ctx.emit("calibration.json", json({{"analyzers", cal}, {"categories", totals}, {"paths", paths}}).dump(1));
  ctx.out << "classify-sentiment: " << rows.size() << " sentences; Positive " << totals["Positive"]
          << ", Neutral " << totals["Neutral"] << ", Negative " << totals["Negative"] << '\n';
}

// ---------------------------------------------------------------- evaluate

void stage_evaluate(Context& ctx) {
  const auto& c = ctx.config;
  if (!c.paths.annotations)
    throw ValidationError("evaluate needs paths.annotations in the config");
  ctx.require("aspects.jsonl", "classify-aspects");
  ctx.require("sentiment.jsonl", "classify-sentiment");
  auto annotations = evaluation::load_annotations(*c.paths.annotations);
  const auto corpus = load_corpus_artifact(ctx);
  if (!corpus.split.holdout.empty()) {
    std::set<std::string> held;
    for (auto r : corpus.split.holdout) held.insert(corpus.sentences[r].sentence_id);
    std::erase_if(annotations, [&](const evaluation::AnnotatedSentence& a) {
      return !held.contains(a.sentence_id);
    });
    if (annotations.empty())
      throw ValidationError("no annotated sentence falls in the held-out split");
  }
  const auto aspect_rows = read_jsonl(ctx.path("aspects.jsonl"));
  const auto sentiment_rows = read_jsonl(ctx.path("sentiment.jsonl"));

  std::vector<evaluation::LabeledPrediction> aspect_truth, sentiment_truth;
  for (const auto& a : annotations) {
    aspect_truth.push_back({a.sentence_id, a.true_aspect});
    sentiment_truth.push_back({a.sentence_id, a.true_sentiment});
  }

  auto collect = [](const std::vector<json>& rows, const char* ensemble_key, const char* members_key,
                    const std::string& ensemble_name) {
    std::map<std::string, std::vector<evaluation::LabeledPrediction>> by_method;
    std::vector<std::string> order;
    for (const auto& row : rows) {
      const auto id = row.at("sentence_id").get<std::string>();
      for (const auto& [m, label] : row.at(members_key).items()) {
        if (!by_method.contains(m)) order.push_back(m);
        by_method[m].push_back({id, label.get<std::string>()});
      }
      by_method[ensemble_name].push_back({id, row.at(ensemble_key).get<std::string>()});
    }
    order.push_back(ensemble_name);
    std::vector<std::pair<std::string, std::vector<evaluation::LabeledPrediction>>> out;
    for (const auto& m : order) out.emplace_back(m, std::move(by_method[m]));
    return out;
  };

  std::vector<evaluation::MethodReport> aspect_reports, sentiment_reports;
  for (auto& [m, preds] : collect(aspect_rows, "aspect", "members", "EA-TM"))
    aspect_reports.push_back({m, evaluation::evaluate(preds, aspect_truth)});
  for (auto& [m, preds] : collect(sentiment_rows, "sentiment", "categories", "E-SA"))
    sentiment_reports.push_back({m, evaluation::evaluate(preds, sentiment_truth)});

  using evaluation::Task;
  ctx.emit("evaluation_aspect.csv", evaluation::report_csv(Task::aspect, aspect_reports));
  ctx.emit("evaluation_aspect.txt", evaluation::report_text(Task::aspect, aspect_reports));
  ctx.emit("evaluation_sentiment.csv", evaluation::report_csv(Task::sentiment, sentiment_reports));
  ctx.emit("evaluation_sentiment.txt", evaluation::report_text(Task::sentiment, sentiment_reports));

  const auto diffs = evaluation::disagreements(annotations);
  std::ostringstream d;
  d << "sentence_id,field,annotator1,annotator2\n";
  for (const auto& x : diffs)
    d << csv_field(x.sentence_id) << ',' << x.field << ',' << csv_field(x.first) << ','
      << csv_field(x.second) << '\n';
  ctx.emit("annotator_disagreements.csv", d.str());

  ctx.out << "evaluate: " << annotations.size() << " annotated sentences"
          << (corpus.split.holdout.empty() ? "" : " in the held-out split") << '\n'
          << evaluation::report_text(Task::aspect, aspect_reports) << '\n'
          << evaluation::report_text(Task::sentiment, sentiment_reports);
  if (!diffs.empty()) ctx.out << diffs.size() << " annotator disagreement(s)\n";
}

// ---------------------------------------------------------------- insights

std::vector<insights::LabeledSentence> labeled_sentences(Context& ctx) {
  const auto corpus = load_corpus_artifact(ctx);
  ctx.require("aspects.jsonl", "classify-aspects");
  ctx.require("sentiment.jsonl", "classify-sentiment");
  std::unordered_map<std::string, std::string> aspect_of;
  for (const auto& row : read_jsonl(ctx.path("aspects.jsonl")))
    aspect_of[row.at("sentence_id").get<std::string>()] = row.at("aspect").get<std::string>();
  std::unordered_map<std::string, sentiment::Category> sentiment_of;
  for (const auto& row : read_jsonl(ctx.path("sentiment.jsonl")))
    sentiment_of[row.at("sentence_id").get<std::string>()] =
        sentiment::parse_category(row.at("sentiment").get<std::string>());
  std::vector<insights::LabeledSentence> out;
  for (const auto& s : corpus.sentences) {
    auto a = aspect_of.find(s.sentence_id);
    auto v = sentiment_of.find(s.sentence_id);
    if (a == aspect_of.end() || v == sentiment_of.end())
      throw ValidationError("sentence " + s.sentence_id +
                            " has no label; rerun classify-aspects and classify-sentiment");
    out.push_back({s.sentence_id, s.entity_id, a->second, v->second, s.tokens});
  }
  return out;
}

void stage_aos(Context& ctx) {
  const auto labeled = labeled_sentences(ctx);
  const auto summaries = insights::aggregate_all(labeled);
  json j = json::array();
  for (const auto& s : summaries) {
    j.push_back(insights::summary_to_json(s, ctx.config.margin));
    if (s.empty()) ctx.out << "warning: entity " << s.entity_id << " has no non-Null sentences\n";
  }
  ctx.emit("aos.json", j.dump(1));
  ctx.emit("aos.csv", insights::aos_csv(summaries));
  ctx.emit("verdicts.csv", insights::verdicts_csv(summaries, ctx.config.margin));
  ctx.out << "aos: " << summaries.size() << " entities\n";
}

void stage_bigrams(Context& ctx) {
  const auto labeled = labeled_sentences(ctx);
  std::vector<std::string> aspect_order;
  std::set<std::string> seen;
  for (const auto& s : labeled)
    if (s.aspect != aspects::kNullLabel && seen.insert(s.aspect).second) aspect_order.push_back(s.aspect);
  std::sort(aspect_order.begin(), aspect_order.end());
  std::vector<insights::BigramReport> reports;
  for (const auto& aspect : aspect_order) {
    for (auto category : ctx.config.bigram_sentiments) {
      std::vector<std::vector<std::string>> tokens;
      for (const auto& s : labeled)
        if (s.aspect == aspect && s.sentiment == category) tokens.push_back(s.tokens);
      auto r = insights::frequent_bigrams(tokens, ctx.config.bigram_threshold);
      r.aspect = aspect;
      r.sentiment = category;
      reports.push_back(std::move(r));
    }
  }
  ctx.emit("bigrams.csv", insights::bigrams_csv(reports));
  std::size_t total = 0;
  for (const auto& r : reports) total += r.bigrams.size();
  ctx.out << "bigrams: " << total << " frequent pairs over " << reports.size() << " aspect/sentiment groups\n";
}

void stage_matrix(Context& ctx) {
  const auto summaries = insights::aggregate_all(labeled_sentences(ctx));
  const auto m = insights::competitor_matrix(summaries, ctx.config.margin);
  ctx.emit("matrix.csv", insights::matrix_csv(m));
  ctx.emit("matrix.txt", insights::matrix_text(m, false));
  ctx.out << insights::matrix_text(m, ctx.color);
}

using Stage = void (*)(Context&);

const std::map<std::string_view, Stage>& stages() {
  static const std::map<std::string_view, Stage> s{
      {"ingest", stage_ingest},
      {"select-k", stage_select_k},
      {"fit", stage_fit},
      {"classify-aspects", stage_classify_aspects},
      {"classify-sentiment", stage_classify_sentiment},
      {"evaluate", stage_evaluate},
      {"aos", stage_aos},
      {"bigrams", stage_bigrams},
      {"matrix", stage_matrix},
  };
  return s;
}

void timed(Context& ctx, std::string_view name) {
  const auto t0 = Clock::now();
  stages().at(name)(ctx);
  ctx.timings[std::string(name)] =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

class DirectoryLock {
 public:
  explicit DirectoryLock(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const auto path = dir / ".aspectlens.lock";
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0) throw IoError("cannot open lock file " + path.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      throw IoError("output directory " + dir.string() + " is in use by another aspectlens run");
    }
  }
  ~DirectoryLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace

void execute(std::string_view subcommand, const ProjectConfig& config, std::ostream& out, bool color) {
  Context ctx{config, out, color};
  if (subcommand == "pipeline") {
    timed(ctx, "ingest");
    if (std::any_of(config.models.begin(), config.models.end(), [](const ModelSpec& m) { return m.auto_k; }))
      timed(ctx, "select-k");
    for (std::string_view s : {"fit", "classify-aspects", "classify-sentiment"}) timed(ctx, s);
    if (config.paths.annotations) timed(ctx, "evaluate");
    for (std::string_view s : {"aos", "bigrams", "matrix"}) timed(ctx, s);
  } else if (stages().contains(subcommand)) {
    timed(ctx, subcommand);
  } else {
    throw ValidationError("unknown subcommand '" + std::string(subcommand) + "'");
  }

  const auto echo = config_echo(config);
  json seeds = {{"global", config.seed}, {"split", config.corpus.seed}, {"tie", config.ensemble.tie_seed}};
  for (const auto& m : config.models) seeds["models"][m.id] = m.config.seed;
  const json manifest = {{"tool", "aspectlens"},
                         {"version", kVersion},
                         {"subcommand", subcommand},
                         {"config_file", config.source.string()},
                         {"config_hash", hex64(fnv1a(echo.dump()))},
                         {"config", echo},
                         {"seeds", seeds},
                         {"threads", config.corpus.threads},
                         {"timings_ms", ctx.timings},
                         {"outputs", ctx.outputs}};
  write_file(ctx.path("manifest_" + std::string(subcommand) + ".json"), manifest.dump(1));
}

int run(std::string_view subcommand, const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const auto config = load_config(options.config, options.overrides);
    DirectoryLock lock(config.paths.output);
    execute(subcommand, config, out, options.color);
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    err << "error: malformed artifact: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace aspectlens::cli
