#pragma once

#include <string>
#include <string_view>

namespace aspectlens {

enum class StemmerKind { porter2, none };

StemmerKind parse_stemmer(std::string_view name);
std::string_view stemmer_name(StemmerKind kind);

// English Porter2 (Snowball) stemmer. Input is expected lowercase ASCII;
// words containing other bytes are returned unchanged.
std::string porter2_stem(std::string_view word);

inline std::string stem(std::string_view word, StemmerKind kind) {
  return kind == StemmerKind::porter2 ? porter2_stem(word) : std::string(word);
}

}  // namespace aspectlens
