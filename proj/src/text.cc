#include "aspectlens/text.h"

#include <cctype>

#include "aspectlens/util.h"

namespace aspectlens::corpus {

namespace {

constexpr std::string_view kStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've",
    "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his",
    "himself", "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself",
    "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this",
    "that", "that'll", "these", "those", "am", "is", "are", "was", "were", "be", "been",
    "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an", "the",
    "and", "but", "if", "or", "because", "as", "until", "while", "of", "at", "by", "for",
    "with", "about", "against", "between", "into", "through", "during", "before", "after",
    "above", "below", "to", "from", "up", "down", "in", "out", "on", "off", "over", "under",
    "again", "further", "then", "once", "here", "there", "when", "where", "why", "how", "all",
    "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
    "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don",
    "don't", "should", "should've", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain",
    "aren", "aren't", "couldn", "couldn't", "didn", "didn't", "doesn", "doesn't", "hadn",
    "hadn't", "hasn", "hasn't", "haven", "haven't", "isn", "isn't", "ma", "mightn",
    "mightn't", "mustn", "mustn't", "needn", "needn't", "shan", "shan't", "shouldn",
    "shouldn't", "wasn", "wasn't", "weren", "weren't", "won", "won't", "wouldn", "wouldn't",
};

constexpr std::string_view kAbbreviations[] = {
    "mr.",  "mrs.", "ms.",  "dr.",   "prof.", "sr.",     "jr.",   "st.",  "vs.",
    "etc.", "e.g.", "i.e.", "a.m.",  "p.m.",  "u.s.",    "u.k.",  "inc.", "ltd.",
    "approx.", "dept.", "jan.", "feb.", "aug.", "sept.", "oct.", "nov.", "dec.",
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
// Non-ASCII bytes are treated as word characters so UTF-8 words stay whole.
bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::string collapse_repeated_punct(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (is_punct(c) && !out.empty() && out.back() == c) continue;
    out += c;
  }
  return out;
}

// Applies the map to the core of each space-separated word, keeping leading and
// trailing punctuation around it. Lookup is on the lowercased core.
std::string apply_map(std::string_view s, const StandardizationMap& map) {
  if (map.empty()) return std::string(s);
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i <= s.size()) {
    const auto next = s.find(' ', i);
    const std::string_view word =
        s.substr(i, next == std::string_view::npos ? std::string_view::npos : next - i);
    std::size_t b = 0, e = word.size();
    while (b < e && is_punct(word[b])) ++b;
    while (e > b && is_punct(word[e - 1])) --e;
    if (i > 0) out += ' ';
    const std::string* canonical = b < e ? map.find(to_lower(word.substr(b, e - b))) : nullptr;
    if (canonical) {
      out.append(word.substr(0, b));
      out.append(*canonical);
      out.append(word.substr(e));
    } else {
      out.append(word);
    }
    if (next == std::string_view::npos) break;
    i = next + 1;
  }
  return out;
}

}  // namespace

const WordSet& default_stopwords() {
  static const WordSet words = [] {
    WordSet w;
    for (auto s : kStopwords) w.emplace(s);
    return w;
  }();
  return words;
}

const WordSet& default_abbreviations() {
  static const WordSet words = [] {
    WordSet w;
    for (auto s : kAbbreviations) w.emplace(s);
    return w;
  }();
  return words;
}

WordSet load_word_set(const std::filesystem::path& path) {
  WordSet out;
  for (auto& w : read_word_list(path)) out.insert(to_lower(w));
  return out;
}

StandardizationMap::StandardizationMap(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::unordered_map<std::string, std::string> raw;
  for (const auto& [variant, canonical] : pairs) {
    const std::string key = to_lower(trim(variant));
    const std::string value = collapse_repeated_punct(collapse_whitespace(to_lower(trim(canonical))));
    if (key.empty() || value.empty())
      throw ValidationError("standardization map entry with empty side: '" + variant + "'");
    if (key.find(' ') != std::string::npos)
      throw ValidationError("standardization variant must be a single word: '" + variant + "'");
    if (is_punct(value.front()) || is_punct(value.back()))
      throw ValidationError("canonical form must not start or end with punctuation: '" +
                            canonical + "'");
    if (key != value) raw[key] = value;
  }
  // Follow chains (a -> b, b -> c) so one pass of substitution is a fixed point.
  for (const auto& [key, value] : raw) {
    std::string current = value;
    for (std::size_t steps = 0;; ++steps) {
      if (steps > raw.size())
        throw ValidationError("standardization map has a cycle through '" + key + "'");
      std::string next;
      bool changed = false;
      for (const auto& word : split(current, ' ')) {
        if (!next.empty()) next += ' ';
        auto it = raw.find(word);
        if (it != raw.end()) {
          next += it->second;
          changed = true;
        } else {
          next += word;
        }
      }
      if (!changed) break;
      current = std::move(next);
    }
    map_[key] = current;
  }
}

StandardizationMap StandardizationMap::load(const std::filesystem::path& tsv) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& rec : read_tsv(tsv)) {
    if (rec.fields.size() != 2)
      throw ValidationError(tsv.string() + ":" + std::to_string(rec.line) +
                            ": expected variant<TAB>canonical");
    pairs.emplace_back(rec.fields[0], rec.fields[1]);
  }
  return StandardizationMap(pairs);
}

const std::string* StandardizationMap::find(std::string_view core) const {
  auto it = map_.find(std::string(core));
  return it == map_.end() ? nullptr : &it->second;
}

std::vector<std::string> split_sentences(std::string_view text, const WordSet& abbreviations) {
  std::vector<std::string> out;
  auto emit = [&](std::string_view piece) {
    std::size_t b = 0;
    while (b < piece.size() && (is_space(piece[b]) || is_terminator(piece[b]))) ++b;
    piece = trim(piece.substr(b));
    bool has_word = false;
    for (char c : piece) has_word = has_word || is_word_byte(c);
    if (has_word) out.emplace_back(piece);
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_terminator(text[j])) ++j;
    while (j < text.size() && is_closer(text[j])) ++j;
    const bool at_boundary = j == text.size() || is_space(text[j]);
    bool abbreviation = false;
    if (at_boundary && text[i] == '.' && j - i == 1) {
      std::size_t w = i;
      while (w > start && !is_space(text[w - 1])) --w;
      std::size_t lead = w;
      while (lead < i && (text[lead] == '(' || text[lead] == '"' || text[lead] == '\'')) ++lead;
      abbreviation = abbreviations.contains(to_lower(text.substr(lead, i + 1 - lead)));
    }
    if (at_boundary && !abbreviation) {
      emit(text.substr(start, j - start));
      start = j;
    }
    i = j;
  }
  if (start < text.size()) emit(text.substr(start));
  return out;
}

std::string normalize(std::string_view sentence, const StandardizationMap& map) {
  return apply_map(collapse_repeated_punct(collapse_whitespace(to_lower(sentence))), map);
}

std::string prepare_for_sentiment(std::string_view sentence, const StandardizationMap& map) {
  return apply_map(collapse_whitespace(sentence), map);
}

std::vector<std::string> tokenize(std::string_view normalized, const WordSet& stopwords,
                                  StemmerKind stemmer) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < normalized.size()) {
    if (!is_word_byte(normalized[i])) {
      ++i;
      continue;
    }
    // A word is a run of word bytes, allowing single inner apostrophes ("don't").
    std::size_t j = i;
    while (j < normalized.size()) {
      if (is_word_byte(normalized[j])) {
        ++j;
      } else if (normalized[j] == '\'' && j + 1 < normalized.size() &&
                 is_word_byte(normalized[j + 1])) {
        ++j;
      } else {
        break;
      }
    }
    std::string word = to_lower(normalized.substr(i, j - i));
    i = j;
    bool has_letter = false;
    for (char c : word) {
      const auto u = static_cast<unsigned char>(c);
      has_letter = has_letter || u >= 0x80 || std::isalpha(u);
    }
    if (!has_letter || word.size() < 2 || stopwords.contains(word)) continue;
    std::string stemmed = stem(word, stemmer);
    if (stemmed.size() < 2 || stopwords.contains(stemmed)) continue;
    out.push_back(std::move(stemmed));
  }
  return out;
}

}  // namespace aspectlens::corpus
