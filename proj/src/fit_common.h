#pragma once

#include "aspectlens/topic_model.h"

namespace aspectlens::topics::detail {

inline void check_corpus(const CorpusMatrix& matrix, const ModelConfig& config,
                         Algorithm expected) {
  if (config.algorithm != expected)
    throw ValidationError("config algorithm is " + std::string(algorithm_name(config.algorithm)) +
                          ", expected " + std::string(algorithm_name(expected)));
  if (matrix.num_sentences() == 0 || matrix.total_tokens() == 0)
    throw ValidationError("empty corpus");
  config.validate(matrix.num_terms());
}

}  // namespace aspectlens::topics::detail
