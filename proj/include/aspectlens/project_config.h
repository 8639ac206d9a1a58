#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aspectlens/aspect_ensemble.h"
#include "aspectlens/corpus.h"
#include "aspectlens/corpus_io.h"
#include "aspectlens/sentiment.h"
#include "aspectlens/topic_model.h"
#include "json.hpp"

namespace aspectlens::cli {

namespace fs = std::filesystem;

struct Paths {
  fs::path reviews;
  corpus::InputFormat format = corpus::InputFormat::csv;
  std::optional<fs::path> stopwords;
  std::optional<fs::path> abbreviations;
  std::optional<fs::path> standardization;
  std::optional<fs::path> relations;
  std::optional<fs::path> merge_map;
  std::optional<fs::path> annotations;
  fs::path output;
};

struct ModelSpec {
  std::string id;
  topics::ModelConfig config;
  bool auto_k = false;  // K comes from the select-k artifact
};

struct AnalyzerSpec {
  std::string id;
  sentiment::Style style = sentiment::Style::sum;
  fs::path lexicon;
  double scale_min = -5.0, scale_max = 5.0;
  std::optional<fs::path> modifiers;
  sentiment::Thresholds thresholds;
};

struct ProjectConfig {
  fs::path source;  // the config file itself
  Paths paths;
  corpus::CorpusOptions corpus;
  StemmerKind stemmer = StemmerKind::porter2;
  std::uint64_t seed = 1;

  topics::Algorithm select_k_algorithm = topics::Algorithm::lda_vi;
  topics::SelectKOptions select_k;

  std::vector<ModelSpec> models;

  double prevalence_floor = 0.0;
  std::size_t n_keywords = 10;
  aspects::EnsembleConfig ensemble;

  std::vector<AnalyzerSpec> analyzers;

  double margin = 0.10;
  double bigram_threshold = 0.15;
  std::vector<sentiment::Category> bigram_sentiments{sentiment::Category::negative,
                                                     sentiment::Category::positive};
};

// Values given on the command line; each replaces the configured one.
struct Overrides {
  std::optional<fs::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> algorithm;  // restricts fit to models of this algorithm
  std::optional<std::size_t> k;
  std::optional<double> gamma;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::size_t> max_iterations;
  std::optional<double> tolerance;
  std::optional<std::size_t> burn_in;
  std::optional<std::size_t> sample_lag;
  std::optional<std::size_t> seeds;
  std::optional<double> margin;
  std::optional<double> bigram_threshold;
};

// Parses and validates. Relative paths resolve against the config file's
// directory; every input path must exist. Unknown keys are errors.
ProjectConfig parse_config(const nlohmann::json& j, const fs::path& base_dir,
                           const Overrides& overrides = {});
ProjectConfig load_config(const fs::path& path, const Overrides& overrides = {});

// Canonical echo of the resolved configuration, used for the run manifest.
nlohmann::json config_echo(const ProjectConfig& c);

}  // namespace aspectlens::cli
