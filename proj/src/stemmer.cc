#include "aspectlens/stemmer.h"

#include <array>
#include <utility>

#include "aspectlens/util.h"

namespace aspectlens {

StemmerKind parse_stemmer(std::string_view name) {
  if (name == "porter2" || name == "snowball") return StemmerKind::porter2;
  if (name == "none") return StemmerKind::none;
  throw ValidationError("unknown stemmer '" + std::string(name) + "'");
}

std::string_view stemmer_name(StemmerKind kind) {
  return kind == StemmerKind::porter2 ? "porter2" : "none";
}

namespace {

// 'Y' marks a consonantal y and is deliberately not a vowel.
bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         std::string_view(w).substr(w.size() - suffix.size()) == suffix;
}

class Porter2 {
 public:
  explicit Porter2(std::string w) : w_(std::move(w)) {}

  std::string run() {
    prelude();
    mark_regions();
    step0();
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5();
    for (char& c : w_)
      if (c == 'Y') c = 'y';
    return w_;
  }

 private:
  std::string w_;
  std::size_t p1_ = 0;
  std::size_t p2_ = 0;

  void prelude() {
    if (!w_.empty() && w_[0] == '\'') w_.erase(0, 1);
    if (!w_.empty() && w_[0] == 'y') w_[0] = 'Y';
    for (std::size_t i = 1; i < w_.size(); ++i)
      if (w_[i] == 'y' && is_vowel(w_[i - 1])) w_[i] = 'Y';
  }

  // Position just past the first non-vowel that follows a vowel, from start.
  std::size_t region_after(std::size_t start) const {
    std::size_t i = start;
    while (i < w_.size() && !is_vowel(w_[i])) ++i;
    while (i < w_.size() && is_vowel(w_[i])) ++i;
    return i < w_.size() ? i + 1 : w_.size();
  }

  void mark_regions() {
    static constexpr std::array<std::string_view, 9> kPrefixes = {
        "gener", "commun", "arsen", "past", "univers", "later", "emerg", "organ", "inter"};
    p1_ = w_.size();
    for (auto prefix : kPrefixes) {
      if (w_.starts_with(prefix)) {
        p1_ = prefix.size();
        p2_ = region_after(p1_);
        return;
      }
    }
    // gopast v gopast non-v
    std::size_t i = 0;
    while (i < w_.size() && !is_vowel(w_[i])) ++i;
    if (i == w_.size()) {
      p2_ = w_.size();
      return;
    }
    while (i < w_.size() && is_vowel(w_[i])) ++i;
    p1_ = i < w_.size() ? i + 1 : w_.size();
    p2_ = region_after(p1_);
  }

  bool in_r1(std::size_t suffix_len) const { return w_.size() - suffix_len >= p1_; }
  bool in_r2(std::size_t suffix_len) const { return w_.size() - suffix_len >= p2_; }

  void replace_suffix(std::size_t len, std::string_view with) {
    w_.replace(w_.size() - len, len, with);
  }

  // Whether the word up to `end` (exclusive) ends in a short syllable.
  bool short_syllable_at(std::size_t end) const {
    if (end >= 3) {
      const char a = w_[end - 3], b = w_[end - 2], c = w_[end - 1];
      if (!is_vowel(a) && is_vowel(b) && !is_vowel(c) && c != 'w' && c != 'x' && c != 'Y')
        return true;
    }
    if (end == 2 && is_vowel(w_[0]) && !is_vowel(w_[1])) return true;
    return end >= 4 && std::string_view(w_).substr(end - 4, 4) == "past";
  }

  bool contains_vowel(std::size_t end) const {
    for (std::size_t i = 0; i < end; ++i)
      if (is_vowel(w_[i])) return true;
    return false;
  }

  void step0() {
    for (std::string_view s : {"'s'", "'s", "'"}) {
      if (ends_with(w_, s)) {
        replace_suffix(s.size(), "");
        return;
      }
    }
  }

  void step1a() {
    if (ends_with(w_, "sses")) {
      replace_suffix(4, "ss");
    } else if (ends_with(w_, "ied") || ends_with(w_, "ies")) {
      replace_suffix(3, w_.size() > 4 ? "i" : "ie");
    } else if (ends_with(w_, "us") || ends_with(w_, "ss")) {
      // unchanged
    } else if (ends_with(w_, "s")) {
      // A vowel somewhere before the letter preceding the s.
      if (w_.size() >= 2 && contains_vowel(w_.size() - 2)) replace_suffix(1, "");
    }
  }

  void step1b() {
    static constexpr std::array<std::string_view, 6> kSuffixes = {"eedly", "ingly", "edly",
                                                                  "eed",   "ing",   "ed"};
    std::string_view found;
    for (auto s : kSuffixes) {
      if (ends_with(w_, s)) {
        found = s;
        break;
      }
    }
    if (found.empty()) return;
    const std::size_t stem_end = w_.size() - found.size();
    const std::string_view stem = std::string_view(w_).substr(0, stem_end);
    if (found == "eed" || found == "eedly") {
      if (in_r1(found.size()) && stem != "succ" && stem != "proc" && stem != "exc")
        replace_suffix(found.size(), "ee");
      return;
    }
    if (found == "ing") {
      if (stem.size() == 2 && stem[1] == 'y' && !is_vowel(stem[0])) {
        // dying -> die, lying -> lie
        replace_suffix(4, "ie");
        return;
      }
      for (std::string_view keep : {"even", "cann", "inn", "earr", "herr", "out"})
        if (stem == keep) return;
    }
    if (!contains_vowel(stem_end)) return;
    w_.resize(stem_end);
    if (ends_with(w_, "at") || ends_with(w_, "bl") || ends_with(w_, "iz")) {
      w_ += 'e';
      return;
    }
    static constexpr std::array<std::string_view, 9> kDoubles = {"bb", "dd", "ff", "gg", "mm",
                                                                 "nn", "pp", "rr", "tt"};
    for (auto d : kDoubles) {
      if (ends_with(w_, d)) {
        // A bare vowel-led stem such as "add" or "egg" keeps its double.
        const bool keep = w_.size() == 3 && (w_[0] == 'a' || w_[0] == 'e' || w_[0] == 'o');
        if (!keep) w_.pop_back();
        return;
      }
    }
    if (p1_ == w_.size() && short_syllable_at(w_.size())) w_ += 'e';
  }

  void step1c() {
    if (w_.size() > 2 && (w_.back() == 'y' || w_.back() == 'Y') && !is_vowel(w_[w_.size() - 2]))
      w_.back() = 'i';
  }

  void step2() {
    static const std::array<std::pair<std::string_view, std::string_view>, 24> kRules = {{
        {"ization", "ize"}, {"ogist", "og"}, {"ational", "ate"}, {"fulness", "ful"}, {"ousness", "ous"},
        {"iveness", "ive"}, {"tional", "tion"}, {"biliti", "ble"},  {"lessli", "less"},
        {"entli", "ent"},   {"ation", "ate"},   {"alism", "al"},    {"aliti", "al"},
        {"ousli", "ous"},   {"iviti", "ive"},   {"fulli", "ful"},   {"enci", "ence"},
        {"anci", "ance"},   {"abli", "able"},   {"izer", "ize"},    {"ator", "ate"},
        {"alli", "al"},     {"bli", "ble"},     {"ogi", "og"},
    }};
    for (const auto& [suffix, repl] : kRules) {
      if (!ends_with(w_, suffix)) continue;
      if (!in_r1(suffix.size())) return;
      if (suffix == "ogi") {
        if (w_.size() >= 4 && w_[w_.size() - 4] == 'l') replace_suffix(3, repl);
        return;
      }
      replace_suffix(suffix.size(), repl);
      return;
    }
    if (ends_with(w_, "li") && in_r1(2) && w_.size() >= 3) {
      const char c = w_[w_.size() - 3];
      if (std::string_view("cdeghkmnrt").find(c) != std::string_view::npos) replace_suffix(2, "");
    }
  }

  void step3() {
    static const std::array<std::pair<std::string_view, std::string_view>, 9> kRules = {{
        {"ational", "ate"},
        {"tional", "tion"},
        {"alize", "al"},
        {"icate", "ic"},
        {"iciti", "ic"},
        {"ative", ""},
        {"ical", "ic"},
        {"ness", ""},
        {"ful", ""},
    }};
    for (const auto& [suffix, repl] : kRules) {
      if (!ends_with(w_, suffix)) continue;
      if (!in_r1(suffix.size())) return;
      if (suffix == "ative" && !in_r2(suffix.size())) return;
      replace_suffix(suffix.size(), repl);
      return;
    }
  }

  void step4() {
    static constexpr std::array<std::string_view, 18> kSuffixes = {
        "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ism",
        "ate",   "iti",  "ous",  "ive",  "ize",  "ion",  "al",  "er",  "ic"};
    for (auto suffix : kSuffixes) {
      if (!ends_with(w_, suffix)) continue;
      if (!in_r2(suffix.size())) return;
      if (suffix == "ion") {
        const std::size_t before = w_.size() - 3;
        if (before >= 1 && (w_[before - 1] == 's' || w_[before - 1] == 't')) replace_suffix(3, "");
        return;
      }
      replace_suffix(suffix.size(), "");
      return;
    }
  }

  void step5() {
    if (ends_with(w_, "e")) {
      if (in_r2(1) || (in_r1(1) && !short_syllable_at(w_.size() - 1))) w_.pop_back();
    } else if (ends_with(w_, "l")) {
      if (in_r2(1) && w_.size() >= 2 && w_[w_.size() - 2] == 'l') w_.pop_back();
    }
  }
};

}  // namespace

std::string porter2_stem(std::string_view word) {
  for (char c : word)
    if (!((c >= 'a' && c <= 'z') || c == '\'')) return std::string(word);

  static const std::array<std::pair<std::string_view, std::string_view>, 15> kExceptions = {{
      {"skis", "ski"},     {"skies", "sky"},  {"idly", "idl"},   {"gently", "gentl"}, {"ugly", "ugli"},
      {"early", "earli"},  {"only", "onli"},  {"singly", "singl"}, {"sky", "sky"},
      {"news", "news"},    {"howe", "howe"},  {"atlas", "atlas"},  {"cosmos", "cosmos"},
      {"bias", "bias"},    {"andes", "andes"},
  }};
  for (const auto& [from, to] : kExceptions)
    if (word == from) return std::string(to);
  if (word.size() <= 2) return std::string(word);
  return Porter2(std::string(word)).run();
}

}  // namespace aspectlens
