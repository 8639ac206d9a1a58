#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "aspectlens/commands.h"

namespace {

template <typename T>
void optional_flag(CLI::App* app, const std::string& name, std::optional<T>& target,
                   const std::string& help) {
  app->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

const std::map<std::string_view, std::string> kDescriptions{
    {"ingest", "read reviews, split sentences, build the corpus artifact"},
    {"select-k", "coherence sweep over K"},
    {"fit", "fit every configured topic model"},
    {"classify-aspects", "label sentences with single models and the EA-TM ensemble"},
    {"classify-sentiment", "score sentences with every analyzer and the E-SA ensemble"},
    {"evaluate", "per-class precision, recall and F1 against annotations"},
    {"aos", "aspect-based opinion summaries and verdicts per entity"},
    {"bigrams", "frequent bigrams per aspect and sentiment"},
    {"matrix", "competitor matrix of net sentiment"},
    {"pipeline", "run every stage in order"},
};

}  // namespace

int main(int argc, char** argv) {
  using aspectlens::cli::RunOptions;
  CLI::App app{"aspectlens: aspect-based opinion mining of review corpora"};
  app.set_version_flag("--version", std::string(aspectlens::cli::kVersion));
  app.require_subcommand(1);

  RunOptions options;
  std::string config;
  auto& o = options.overrides;
  std::string chosen;
  for (auto name : aspectlens::cli::subcommands()) {
    auto* sub = app.add_subcommand(std::string(name), kDescriptions.at(name));
    sub->add_option("-c,--config", config, "project config (JSON)")->required();
    sub->add_option_function<std::string>(
        "-o,--out", [&o](const std::string& v) { o.out = v; }, "output directory");
    optional_flag(sub, "--seed", o.seed, "global seed");
    optional_flag(sub, "--threads", o.threads, "worker threads for preprocessing");
    optional_flag(sub, "--algorithm", o.algorithm, "plsa_em | lda_vi | lda_gs");
    optional_flag(sub, "--k", o.k, "number of topics for every model");
    optional_flag(sub, "--gamma", o.gamma, "EA-TM confidence threshold");
    optional_flag(sub, "--alpha", o.alpha, "Dirichlet prior on sentence-topic mixtures");
    optional_flag(sub, "--beta", o.beta, "Dirichlet prior on topic-term distributions");
    optional_flag(sub, "--max-iter", o.max_iterations, "iterations or Gibbs sweeps");
    optional_flag(sub, "--tol", o.tolerance, "relative convergence tolerance");
    optional_flag(sub, "--burn-in", o.burn_in, "Gibbs burn-in sweeps");
    optional_flag(sub, "--lag", o.sample_lag, "Gibbs sample lag");
    optional_flag(sub, "--seeds", o.seeds, "fits per K during select-k");
    optional_flag(sub, "--margin", o.margin, "strength/weakness margin");
    optional_flag(sub, "--bigram-threshold", o.bigram_threshold, "bigram sentence-share threshold");
    sub->callback([&chosen, name] { chosen = std::string(name); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  options.config = config;
  options.color = std::getenv("NO_COLOR") == nullptr && ::isatty(STDOUT_FILENO);
  return aspectlens::cli::run(chosen, options, std::cout, std::cerr);
}
