#include "aspectlens/project_config.h"

#include <set>

#include "aspectlens/util.h"

namespace aspectlens::cli {

using nlohmann::json;

namespace {

// Rejects keys outside `allowed`; `where` names the object in messages.
void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ValidationError(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError("unknown key '" + key + "' in " + std::string(where));
  }
}

template <typename T>
T get(const json& j, std::string_view where, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string(where) + "." + key + " has the wrong type");
  }
}

std::size_t get_size(const json& j, std::string_view where, const char* key, std::size_t fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer() || it->get<long long>() < 0)
    throw ValidationError(std::string(where) + "." + key + " must be a non-negative integer");
  return it->get<std::size_t>();
}

fs::path existing(const fs::path& base, const std::string& rel, std::string_view field) {
  fs::path p = fs::path(rel).is_absolute() ? fs::path(rel) : base / rel;
  p = p.lexically_normal();
  if (!fs::exists(p))
    throw ValidationError(std::string(field) + ": file not found: " + p.string());
  return p;
}

std::optional<fs::path> optional_path(const json& j, const fs::path& base, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return existing(base, get<std::string>(j, "paths", key, ""), std::string("paths.") + key);
}

ModelSpec parse_model(const json& m, std::size_t index, std::uint64_t global_seed,
                      bool seed_overridden) {
  const std::string where = "models[" + std::to_string(index) + "]";
  check_keys(m, where,
             {"id", "algorithm", "k", "alpha", "beta", "max_iterations", "tolerance", "burn_in",
              "sample_lag", "seed"});
  if (!m.contains("algorithm")) throw ValidationError(where + ".algorithm is required");
  ModelSpec spec;
  const auto alg = topics::parse_algorithm(get<std::string>(m, where, "algorithm", ""));
  spec.config = topics::ModelConfig::defaults(alg);
  spec.id = get<std::string>(m, where, "id", std::string(topics::algorithm_name(alg)));
  if (spec.id.empty() || spec.id.find_first_of("/\\ \t,") != std::string::npos)
    throw ValidationError(where + ".id must be a non-empty name without spaces, commas or slashes");
  auto k = m.find("k");
  if (k == m.end()) throw ValidationError(where + ".k is required (integer or \"auto\")");
  if (k->is_string() && k->get<std::string>() == "auto") {
    spec.auto_k = true;
  } else {
    spec.config.K = get_size(m, where, "k", 0);
  }
  if (m.contains("alpha")) spec.config.alpha = get<double>(m, where, "alpha", 0.0);
  spec.config.beta = get<double>(m, where, "beta", spec.config.beta);
  spec.config.max_iterations = get_size(m, where, "max_iterations", spec.config.max_iterations);
  spec.config.tolerance = get<double>(m, where, "tolerance", spec.config.tolerance);
  spec.config.burn_in = get_size(m, where, "burn_in", spec.config.burn_in);
  spec.config.sample_lag = get_size(m, where, "sample_lag", spec.config.sample_lag);
  const std::uint64_t derived = mix_seed(global_seed, fnv1a(spec.id));
  spec.config.seed = seed_overridden ? derived : get<std::uint64_t>(m, where, "seed", derived);
  return spec;
}

AnalyzerSpec parse_analyzer(const json& a, std::size_t index, const fs::path& base) {
  const std::string where = "sentiment.analyzers[" + std::to_string(index) + "]";
  check_keys(a, where, {"id", "style", "lexicon", "scale", "modifiers", "thresholds"});
  AnalyzerSpec spec;
  spec.id = get<std::string>(a, where, "id", "");
  if (spec.id.empty()) throw ValidationError(where + ".id is required");
  spec.style = sentiment::parse_style(get<std::string>(a, where, "style", "sum"));
  if (!a.contains("lexicon")) throw ValidationError(where + ".lexicon is required");
  spec.lexicon = existing(base, get<std::string>(a, where, "lexicon", ""), where + ".lexicon");
  auto scale = get<std::vector<double>>(a, where, "scale", {-5.0, 5.0});
  if (scale.size() != 2) throw ValidationError(where + ".scale must be [min, max]");
  spec.scale_min = scale[0];
  spec.scale_max = scale[1];
  if (a.contains("modifiers"))
    spec.modifiers = existing(base, get<std::string>(a, where, "modifiers", ""), where + ".modifiers");
  const auto d = sentiment::default_thresholds(spec.style);
  auto t = get<std::vector<double>>(a, where, "thresholds", {d.minus, d.plus});
  if (t.size() != 2) throw ValidationError(where + ".thresholds must be [minus, plus]");
  spec.thresholds = {t[0], t[1]};
  spec.thresholds.validate();
  return spec;
}

}  // namespace

ProjectConfig parse_config(const json& j, const fs::path& base_dir, const Overrides& o) {
  check_keys(j, "config",
             {"paths", "corpus", "seed", "select_k", "models", "aspects", "sentiment", "insights"});
  ProjectConfig c;
  c.seed = o.seed ? *o.seed : get<std::uint64_t>(j, "config", "seed", 1);

  if (!j.contains("paths")) throw ValidationError("config.paths is required");
  const json& p = j.at("paths");
  check_keys(p, "paths",
             {"reviews", "format", "stopwords", "abbreviations", "standardization", "relations",
              "merge_map", "annotations", "output"});
  if (!p.contains("reviews")) throw ValidationError("paths.reviews is required");
  c.paths.reviews = existing(base_dir, get<std::string>(p, "paths", "reviews", ""), "paths.reviews");
  c.paths.format = corpus::parse_input_format(get<std::string>(p, "paths", "format", "csv"));
  c.paths.stopwords = optional_path(p, base_dir, "stopwords");
  c.paths.abbreviations = optional_path(p, base_dir, "abbreviations");
  c.paths.standardization = optional_path(p, base_dir, "standardization");
  c.paths.relations = optional_path(p, base_dir, "relations");
  c.paths.merge_map = optional_path(p, base_dir, "merge_map");
  c.paths.annotations = optional_path(p, base_dir, "annotations");
  if (o.out) {
    c.paths.output = *o.out;
  } else {
    const auto out = get<std::string>(p, "paths", "output", "out");
    c.paths.output = fs::path(out).is_absolute() ? fs::path(out) : base_dir / out;
  }
  c.paths.output = c.paths.output.lexically_normal();

  if (auto it = j.find("corpus"); it != j.end()) {
    check_keys(*it, "corpus",
               {"min_sentence_frequency", "holdout_count", "dedupe", "stemmer", "threads"});
    c.corpus.min_sentence_frequency = get_size(*it, "corpus", "min_sentence_frequency", 3);
    c.corpus.holdout_count = get_size(*it, "corpus", "holdout_count", 0);
    c.corpus.dedupe = get<bool>(*it, "corpus", "dedupe", true);
    c.corpus.threads = static_cast<unsigned>(get_size(*it, "corpus", "threads", 1));
    c.stemmer = parse_stemmer(get<std::string>(*it, "corpus", "stemmer", "porter2"));
  }
  if (o.threads) c.corpus.threads = *o.threads;
  if (c.corpus.threads == 0) throw ValidationError("threads must be at least 1");
  c.corpus.seed = mix_seed(c.seed, 0xc0);

  if (auto it = j.find("select_k"); it != j.end()) {
    check_keys(*it, "select_k", {"algorithm", "k_min", "k_max", "step", "n_top", "epsilon", "seeds"});
    c.select_k_algorithm = topics::parse_algorithm(get<std::string>(*it, "select_k", "algorithm", "lda_vi"));
    c.select_k.k_min = get_size(*it, "select_k", "k_min", c.select_k.k_min);
    c.select_k.k_max = get_size(*it, "select_k", "k_max", c.select_k.k_max);
    c.select_k.step = get_size(*it, "select_k", "step", c.select_k.step);
    c.select_k.n_top = get_size(*it, "select_k", "n_top", c.select_k.n_top);
    c.select_k.epsilon = get<double>(*it, "select_k", "epsilon", c.select_k.epsilon);
    c.select_k.seeds = get_size(*it, "select_k", "seeds", c.select_k.seeds);
  }
  if (o.seeds) c.select_k.seeds = *o.seeds;
  if (o.algorithm) c.select_k_algorithm = topics::parse_algorithm(*o.algorithm);

  if (!j.contains("models") || !j.at("models").is_array() || j.at("models").empty())
    throw ValidationError("config.models must be a non-empty array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < j.at("models").size(); ++i) {
    auto spec = parse_model(j.at("models")[i], i, c.seed, o.seed.has_value());
    if (!ids.insert(spec.id).second) throw ValidationError("duplicate model id '" + spec.id + "'");
    if (o.k) spec.config.K = *o.k, spec.auto_k = false;
    if (o.alpha) spec.config.alpha = *o.alpha;
    if (o.beta) spec.config.beta = *o.beta;
    if (o.max_iterations) spec.config.max_iterations = *o.max_iterations;
    if (o.tolerance) spec.config.tolerance = *o.tolerance;
    if (o.burn_in) spec.config.burn_in = *o.burn_in;
    if (o.sample_lag) spec.config.sample_lag = *o.sample_lag;
    if (!spec.auto_k && spec.config.K == 0) throw ValidationError(spec.id + ": k must be >= 1");
    c.models.push_back(std::move(spec));
  }
  if (o.algorithm) {
    const auto alg = topics::parse_algorithm(*o.algorithm);
    std::erase_if(c.models, [&](const ModelSpec& m) { return m.config.algorithm != alg; });
    if (c.models.empty())
      throw ValidationError("no configured model uses algorithm " + *o.algorithm);
  }

  c.ensemble.tie_seed = mix_seed(c.seed, 0x7e);
  if (auto it = j.find("aspects"); it != j.end()) {
    check_keys(*it, "aspects", {"prevalence_floor", "n_keywords", "gamma"});
    c.prevalence_floor = get<double>(*it, "aspects", "prevalence_floor", 0.0);
    c.n_keywords = get_size(*it, "aspects", "n_keywords", 10);
    c.ensemble.gamma = get<double>(*it, "aspects", "gamma", 0.7);
  }
  if (o.gamma) c.ensemble.gamma = *o.gamma;
  c.ensemble.validate();
  if (c.prevalence_floor < 0.0 || c.prevalence_floor >= 1.0)
    throw ValidationError("aspects.prevalence_floor must lie in [0, 1)");

  if (auto it = j.find("sentiment"); it != j.end()) {
    check_keys(*it, "sentiment", {"analyzers"});
    const json& arr = it->value("analyzers", json::array());
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      c.analyzers.push_back(parse_analyzer(arr[i], i, base_dir));
      if (!seen.insert(c.analyzers.back().id).second)
        throw ValidationError("duplicate analyzer id '" + c.analyzers.back().id + "'");
    }
  }

  if (auto it = j.find("insights"); it != j.end()) {
    check_keys(*it, "insights", {"margin", "bigram_threshold", "bigram_sentiments"});
    c.margin = get<double>(*it, "insights", "margin", c.margin);
    c.bigram_threshold = get<double>(*it, "insights", "bigram_threshold", c.bigram_threshold);
    if (it->contains("bigram_sentiments")) {
      c.bigram_sentiments.clear();
      for (const auto& s : get<std::vector<std::string>>(*it, "insights", "bigram_sentiments", {}))
        c.bigram_sentiments.push_back(sentiment::parse_category(s));
    }
  }
  if (o.margin) c.margin = *o.margin;
  if (o.bigram_threshold) c.bigram_threshold = *o.bigram_threshold;
  if (!(c.margin >= 0.0 && c.margin < 1.0)) throw ValidationError("insights.margin must lie in [0, 1)");
  if (!(c.bigram_threshold > 0.0 && c.bigram_threshold <= 1.0))
    throw ValidationError("insights.bigram_threshold must lie in (0, 1]");
  return c;
}

ProjectConfig load_config(const fs::path& path, const Overrides& overrides) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  auto c = parse_config(j, base, overrides);
  c.source = path;
  return c;
}

json config_echo(const ProjectConfig& c) {
  auto opt = [](const std::optional<fs::path>& p) -> json { return p ? json(p->string()) : json(); };
  json models = json::array();
  for (const auto& m : c.models) {
    auto cfg = topics::config_to_json(m.config);
    cfg["id"] = m.id;
    cfg["auto_k"] = m.auto_k;
    models.push_back(cfg);
  }
  json analyzers = json::array();
  for (const auto& a : c.analyzers)
    analyzers.push_back({{"id", a.id},
                         {"style", sentiment::style_name(a.style)},
                         {"lexicon", a.lexicon.string()},
                         {"scale", {a.scale_min, a.scale_max}},
                         {"modifiers", opt(a.modifiers)},
                         {"thresholds", {a.thresholds.minus, a.thresholds.plus}}});
  json sentiments = json::array();
  for (auto s : c.bigram_sentiments) sentiments.push_back(sentiment::category_name(s));
  return {
      {"paths",
       {{"reviews", c.paths.reviews.string()},
        {"format", c.paths.format == corpus::InputFormat::csv ? "csv" : "jsonl"},
        {"stopwords", opt(c.paths.stopwords)},
        {"abbreviations", opt(c.paths.abbreviations)},
        {"standardization", opt(c.paths.standardization)},
        {"relations", opt(c.paths.relations)},
        {"merge_map", opt(c.paths.merge_map)},
        {"annotations", opt(c.paths.annotations)}}},
      {"corpus",
       {{"min_sentence_frequency", c.corpus.min_sentence_frequency},
        {"holdout_count", c.corpus.holdout_count},
        {"dedupe", c.corpus.dedupe},
        {"stemmer", stemmer_name(c.stemmer)}}},
      {"seed", c.seed},
      {"select_k",
       {{"algorithm", topics::algorithm_name(c.select_k_algorithm)},
        {"k_min", c.select_k.k_min},
        {"k_max", c.select_k.k_max},
        {"step", c.select_k.step},
        {"n_top", c.select_k.n_top},
        {"epsilon", c.select_k.epsilon},
        {"seeds", c.select_k.seeds}}},
      {"models", models},
      {"aspects",
       {{"prevalence_floor", c.prevalence_floor},
        {"n_keywords", c.n_keywords},
        {"gamma", c.ensemble.gamma},
        {"tie_seed", c.ensemble.tie_seed}}},
      {"sentiment", {{"analyzers", analyzers}}},
      {"insights",
       {{"margin", c.margin},
        {"bigram_threshold", c.bigram_threshold},
        {"bigram_sentiments", sentiments}}},
  };
}

}  // namespace aspectlens::cli
