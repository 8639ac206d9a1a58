#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "aspectlens/project_config.h"

namespace aspectlens::cli {

inline constexpr std::string_view kVersion = "0.1.0";

// ingest, select-k, fit, classify-aspects, classify-sentiment, evaluate,
// aos, bigrams, matrix, pipeline.
const std::vector<std::string_view>& subcommands();

struct RunOptions {
  std::filesystem::path config;
  Overrides overrides;
  bool color = false;  // ANSI colors in text reports printed to the terminal
};

// Runs one subcommand and writes its artifacts plus manifest_<name>.json into
// the output directory. Throws ValidationError or IoError.
void execute(std::string_view subcommand, const ProjectConfig& config, std::ostream& out,
             bool color = false);

// Loads the config, takes the output-directory lock and maps failures to exit
// codes: 0 success, 1 validation error, 2 I/O error.
int run(std::string_view subcommand, const RunOptions& options, std::ostream& out,
        std::ostream& err);

}  // namespace aspectlens::cli
