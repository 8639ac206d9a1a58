// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aspectlens/aspect_ensemble.h"
#include "aspectlens/commands.h"
#include "aspectlens/corpus_io.h"
#include "aspectlens/evaluation.h"
#include "aspectlens/insights.h"
#include "aspectlens/sentiment.h"
#include "aspectlens/topic_model.h"
#include "aspectlens/util.h"
#include "json.hpp"
#include "support/oracles.h"
#include "support/synthetic.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace aspectlens;
namespace syn = aspectlens::testing;

namespace {

// Pinned tolerances.
constexpr double kF1Tolerance = 0.01;
constexpr double kMonotoneSlack = 1e-8;
constexpr double kRecoveryLda = 0.15;
constexpr double kRecoveryPlsa = 0.20;
constexpr double kCoherenceTolerance = 1e-12;
constexpr double kEnsembleSlack = 0.02;
constexpr double kStochasticTolerance = 1e-6;

struct Outcome {
  bool pass = false;
  std::string detail;
};

topics::ModelConfig model_config(topics::Algorithm a, std::size_t K, std::uint64_t seed) {
  auto c = topics::ModelConfig::defaults(a);
  c.K = K;
  c.seed = seed;
  return c;
}

std::string fmt(double v, int digits = 4) { return format_fixed(v, digits); }

// 1
Outcome fixture_consistency() {
  const auto triples =
      evaluation::load_published(fs::path(ASPECTLENS_TEST_DATA) / "published_metrics.csv");
  const auto report = evaluation::consistency_check(triples, kF1Tolerance);
  double worst = 0.0;
  for (const auto& r : report.rows) worst = std::max(worst, std::abs(r.recomputed - r.triple.f1));
  std::ostringstream d;
  d << triples.size() - report.failures() << "/" << triples.size()
    << " triples within 0.01, worst gap " << fmt(worst);
  return {triples.size() == 60 && report.failures() == 0, d.str()};
}

Outcome monotone(topics::Algorithm a) {
  std::size_t violations = 0, corpora = 100;
  double worst = 0.0;
  for (std::size_t i = 0; i < corpora; ++i) {
    const auto x = syn::random_matrix(50, 200, 5, 25, 1000 + i);
    const auto m = topics::fit(x, model_config(a, 5, 500 + i));
    for (std::size_t t = 1; t < m.objective_trace.size(); ++t) {
      const double step = m.objective_trace[t] - m.objective_trace[t - 1];
      worst = std::min(worst, step);
      if (step < -kMonotoneSlack) ++violations;
    }
  }
  return {violations == 0, std::to_string(corpora) + " corpora, " + std::to_string(violations) +
                               " violations, most negative step " + std::to_string(worst)};
}

// 4
Outcome recovery() {
  const auto data = syn::generate(3, 60, 500, 50, 0.1, 4242);
  std::ostringstream d;
  bool ok = true;
  for (auto a : topics::kAllAlgorithms) {
    auto c = model_config(a, 3, 77);
    c.alpha = 0.1;
    c.beta = 0.01;
    const auto m = topics::fit(data.matrix, c);
    const double tv = syn::align(data.phi, m.phi, 60).mean_tv;
    const double bound = a == topics::Algorithm::plsa_em ? kRecoveryPlsa : kRecoveryLda;
    ok = ok && tv <= bound;
    d << topics::algorithm_name(a) << " " << fmt(tv) << " (<= " << fmt(bound, 2) << ") ";
  }
  return {ok, d.str()};
}

// 5
Outcome coherence_oracle() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto x = syn::random_matrix(20 + 3 * i, 30, 2, 9, 70 + i);
    const auto m = topics::fit(x, model_config(topics::Algorithm::plsa_em, 4, i));
    const std::size_t n = 2 + i % 8;
    const auto got = topics::coherence(m, x, n, 1.0);
    const auto want = syn::coherence_oracle(m.phi, m.num_topics, x, n, 1.0);
    for (std::size_t k = 0; k < want.size(); ++k)
      worst = std::max(worst, std::abs(got.per_topic[k] - want[k]));
  }
  return {worst <= kCoherenceTolerance, "10 corpora, max |diff| " + std::to_string(worst)};
}

// 6
Outcome ensemble_branches() {
  using aspects::Branch;
  using aspects::MemberView;
  const std::vector<aspects::CustomWordList> lists = {
      {0, {"seat"}}, {1, {"food", "meal", "burger"}}, {2, {"delay"}}, {3, {"crew"}}};
  const aspects::EnsembleConfig cfg{0.7, 11};
  struct Case {
    std::string name;
    std::vector<MemberView> members;
    std::vector<std::string> tokens;
    std::optional<std::size_t> aspect;
    Branch branch;
  };
  const std::vector<Case> cases = {
      {"mode", {{{0, 0, 0, 0.4}, false}, {{0.1, 0, 0, 0.9}, false}, {{0, 0.8, 0, 0.2}, false}},
       {}, 3, Branch::mode},
      {"confidence",
       {{{0.1, 0.5, 0.2, 0.2}, false}, {{0.1, 0.2, 0.3, 0.4}, false}, {{0.03, 0.03, 0.91, 0.03}, false}},
       {}, 2, Branch::confidence},
      {"wordlist",
       {{{0.6, 0.2, 0.1, 0.1}, false}, {{0.2, 0.6, 0.1, 0.1}, false}, {{0.1, 0.2, 0.6, 0.1}, false}},
       {"burger", "stale"}, 1, Branch::wordlist},
      {"null",
       {{{0.6, 0.2, 0.1, 0.1}, false}, {{0.2, 0.6, 0.1, 0.1}, false}, {{0.1, 0.2, 0.6, 0.1}, false}},
       {"weather"}, std::nullopt, Branch::null},
  };
  aspects::BranchCounters counters;
  std::size_t exact = 0;
  for (const auto& c : cases) {
    const auto d = aspects::classify_ensemble(c.members, c.tokens, lists, cfg, c.name);
    counters.add(d.branch);
    exact += d.aspect == c.aspect && d.branch == c.branch;
  }
  const bool all = counters.mode == 1 && counters.confidence == 1 && counters.wordlist == 1 &&
                   counters.null == 1;
  return {exact == cases.size() && all,
          std::to_string(exact) + "/4 fixtures exact; branch counters " +
              std::to_string(counters.mode) + "/" + std::to_string(counters.confidence) + "/" +
              std::to_string(counters.wordlist) + "/" + std::to_string(counters.null)};
}

// 7
Outcome sentiment_branches() {
  using sentiment::Category;
  using sentiment::DecisionPath;
  const std::vector<sentiment::Thresholds> th(3, {-0.05, 0.05});
  const sentiment::Calibration unit{{{-1, 1}, {-1, 1}, {-1, 1}}};
  struct Case {
    std::vector<double> v;
    sentiment::Calibration cal;
    Category want;
    DecisionPath path;
  };
  const std::vector<Case> cases = {
      {{0.3, 0.6, 0.9}, unit, Category::positive, DecisionPath::mode},
      {{0.5, 0.2, -0.4}, unit, Category::positive, DecisionPath::mode},
      {{0.40, -0.05, -0.62}, unit, Category::negative, DecisionPath::tiebreak},
      // The negative analyzer is degenerate and scores 0; the positive one wins.
      {{0.2, 0.0, -0.9}, {{{-1, 1}, {-1, 1}, {-0.9, -0.9}}}, Category::positive, DecisionPath::tiebreak},
  };
  std::size_t exact = 0;
  for (const auto& c : cases) {
    const auto d = sentiment::classify_sentiment_ensemble(c.v, th, c.cal);
    exact += d.ensemble == c.want && d.path == c.path;
  }
  return {exact == cases.size(), std::to_string(exact) + "/4 fixtures exact (unanimity, 2-of-3, "
                                                         "tie-break, degenerate calibration)"};
}

// 8
Outcome ensemble_sanity() {
  const std::size_t K = 3, U = 60;
  std::vector<std::string> terms;
  for (std::size_t w = 0; w < U; ++w) terms.push_back("w" + std::to_string(w));
  const corpus::Vocabulary vocab(terms, std::vector<std::uint32_t>(U, 1));
  const std::vector<std::pair<std::string, topics::Algorithm>> members = {
      {"plsa", topics::Algorithm::plsa_em},
      {"lda_vi", topics::Algorithm::lda_vi},
      {"lda_gs", topics::Algorithm::lda_gs}};

  bool ok = true;
  double worst_margin = 1.0;
  std::size_t unanimous = 0, unanimous_disagree = 0;
  std::ostringstream d;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(mix_seed(seed, 0xacce));
    const auto phi = syn::block_topics(K, U, 0.05, rng);
    auto draw = [&](std::size_t n, std::size_t length, std::vector<std::size_t>* label,
                    std::vector<std::vector<std::string>>* tokens) {
      std::vector<corpus::EncodedSentence> cols;
      const std::vector<double> alpha(K, 0.1);
      for (std::size_t r = 0; r < n; ++r) {
        const auto th = rng.dirichlet(alpha);
        std::vector<std::uint32_t> counts(U, 0);
        std::vector<std::string> toks;
        for (std::size_t i = 0; i < length; ++i) {
          const auto w = rng.categorical(phi[rng.categorical(th)]);
          ++counts[w];
          toks.push_back(terms[w]);
        }
        corpus::EncodedSentence s;
        for (std::size_t w = 0; w < U; ++w)
          if (counts[w]) s.counts.push_back({static_cast<corpus::TermId>(w), counts[w]});
        s.length = length;
        cols.push_back(std::move(s));
        if (label) label->push_back(static_cast<std::size_t>(std::max_element(th.begin(), th.end()) - th.begin()));
        if (tokens) tokens->push_back(std::move(toks));
      }
      return corpus::CorpusMatrix(U, std::move(cols));
    };
    const auto train = draw(500, 50, nullptr, nullptr);
    std::vector<std::size_t> truth;
    std::vector<std::vector<std::string>> tokens;
    const auto test = draw(2000, 8, &truth, &tokens);

    std::vector<topics::FittedTopicModel> models;
    for (const auto& [id, a] : members) {
      auto c = model_config(a, K, mix_seed(seed, fnv1a(id)));
      c.alpha = 0.1;
      models.push_back(topics::fit(train, c, vocab.fingerprint()));
    }
    aspects::MergeMap merge;
    std::vector<aspects::ModelRef> refs;
    const char* labels[] = {"T0", "T1", "T2"};
    for (std::size_t m = 0; m < models.size(); ++m) {
      const auto al = syn::align(phi, models[m].phi, U);
      // Entries in true-topic order so aspect ids equal true labels.
      for (std::size_t t = 0; t < K; ++t)
        merge.push_back({members[m].first, al.estimated_for_true[t], labels[t]});
      refs.push_back({members[m].first, &models[m]});
    }
    std::sort(merge.begin(), merge.end(), [](const auto& a, const auto& b) {
      return a.aspect_label < b.aspect_label;
    });
    const auto catalog = aspects::build_catalog(refs, vocab, 0.0, merge);
    const auto lists = aspects::build_custom_wordlists(catalog, aspects::LexicalRelations{}, 10,
                                                       corpus::default_stopwords(),
                                                       StemmerKind::none)
                           .lists;
    const aspects::EnsembleConfig cfg{0.7, mix_seed(seed, 0x7e)};

    std::vector<std::size_t> correct(members.size(), 0);
    std::size_t ensemble_correct = 0;
    for (std::size_t r = 0; r < truth.size(); ++r) {
      std::vector<aspects::MemberView> views;
      for (std::size_t m = 0; m < models.size(); ++m) {
        const auto inferred = topics::infer_theta(models[m], test.column(r), r);
        views.push_back({catalog.map_probabilities(members[m].first, inferred.p), inferred.oov});
        const auto single = aspects::classify_single(views.back(), cfg.gamma);
        correct[m] += single == truth[r];
      }
      const auto sid = std::to_string(seed) + ":" + std::to_string(r);
      const auto dec = aspects::classify_ensemble(views, tokens[r], lists, cfg, sid);
      ensemble_correct += dec.aspect == truth[r];

      std::set<std::size_t> argmaxes;
      for (const auto& v : views)
        argmaxes.insert(static_cast<std::size_t>(std::max_element(v.p.begin(), v.p.end()) - v.p.begin()));
      if (argmaxes.size() == 1) {
        ++unanimous;
        unanimous_disagree += dec.aspect != *argmaxes.begin();
      }
    }
    const double n = static_cast<double>(truth.size());
    const double ens = static_cast<double>(ensemble_correct) / n;
    for (std::size_t m = 0; m < members.size(); ++m) {
      const double acc = static_cast<double>(correct[m]) / n;
      worst_margin = std::min(worst_margin, ens - acc);
      if (ens < acc - kEnsembleSlack) ok = false;
    }
    if (seed == 0) {
      d << "seed 0 accuracy EA-TM " << fmt(ens, 3);
      for (std::size_t m = 0; m < members.size(); ++m)
        d << " " << members[m].first << " " << fmt(static_cast<double>(correct[m]) / n, 3);
      d << "; ";
    }
  }
  ok = ok && unanimous_disagree == 0;
  d << "10 seeds, min(EA-TM - member) " << fmt(worst_margin) << ", unanimous " << unanimous
    << " with " << unanimous_disagree << " disagreements";
  return {ok, d.str()};
}

// 9
Outcome bigram_oracle() {
  Rng rng(909);
  std::size_t mismatches = 0;
  for (int c = 0; c < 50; ++c) {
    std::vector<std::vector<std::string>> s(1 + rng.below(100));
    const std::size_t vocab = 3 + rng.below(10);
    for (auto& toks : s)
      for (std::size_t i = 0, n = rng.below(12); i < n; ++i)
        toks.push_back("t" + std::to_string(rng.below(vocab)));
    const double threshold = 0.01 + 0.4 * rng.uniform();
    const auto got = insights::frequent_bigrams(s, threshold);
    const auto want = syn::bigram_oracle(s, threshold);
    bool same = got.bigrams.size() == want.size() && got.analyzed == s.size();
    for (std::size_t i = 0; same && i < want.size(); ++i) {
      const auto& g = got.bigrams[i];
      same = g.first == want[i].first && g.second == want[i].second && g.count == want[i].count &&
             g.sentences == want[i].sentences && g.share == want[i].share;
    }
    mismatches += !same;
  }
  return {mismatches == 0, "50 corpora, " + std::to_string(mismatches) + " mismatches"};
}

// Mini-corpus config rewritten with absolute paths and a private output dir.
fs::path mini_config(const fs::path& dir) {
  const fs::path mini = fs::path(ASPECTLENS_DATA_DIR) / "mini";
  auto j = json::parse(read_file(mini / "config.json"));
  auto abs = [&](const json& v) { return (mini / v.get<std::string>()).lexically_normal().string(); };
  for (auto& [key, v] : j["paths"].items())
    if (key != "format") v = abs(v);
  j["paths"]["output"] = (dir / "out").string();
  for (auto& a : j["sentiment"]["analyzers"]) {
    a["lexicon"] = abs(a["lexicon"]);
    if (a.contains("modifiers")) a["modifiers"] = abs(a["modifiers"]);
  }
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_file(dir / "config.json", j.dump(2));
  return dir / "config.json";
}

const fs::path kRunRoot = fs::temp_directory_path() / "aspectlens_acceptance";

// 10
Outcome determinism() {
  std::vector<fs::path> outs;
  for (const char* name : {"run_a", "run_b"}) {
    cli::RunOptions opt;
    opt.config = mini_config(kRunRoot / name);
    std::ostringstream out, err;
    if (cli::run("pipeline", opt, out, err) != 0) return {false, "pipeline failed: " + err.str()};
    outs.push_back(kRunRoot / name / "out");
  }
  std::size_t files = 0, differing = 0;
  std::string first_diff;
  for (const auto& entry : fs::directory_iterator(outs[0])) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("manifest_") || name.starts_with(".")) continue;
    ++files;
    const auto other = outs[1] / name;
    if (!fs::exists(other) || read_file(entry.path()) != read_file(other)) {
      ++differing;
      if (first_diff.empty()) first_diff = name;
    }
  }
  std::string detail = std::to_string(files) + " artifacts compared, " +
                       std::to_string(differing) + " differ";
  if (!first_diff.empty()) detail += " (first: " + first_diff + ")";
  return {files >= 20 && differing == 0, detail};
}

bool rows_stochastic(const topics::FittedTopicModel& m) {
  auto check = [](std::span<const double> row) {
    double s = 0.0;
    for (double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) return false;
      s += v;
    }
    return std::abs(s - 1.0) <= kStochasticTolerance;
  };
  for (std::size_t k = 0; k < m.num_topics; ++k)
    if (!check(m.phi_row(k))) return false;
  for (std::size_t r = 0; r < m.num_sentences; ++r)
    if (!check(m.theta_row(r))) return false;
  return true;
}

// 11
Outcome structural() {
  std::vector<std::string> failed;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) failed.push_back(what);
  };

  // Fits and inference on synthetic fixtures.
  for (std::uint64_t i = 0; i < 5; ++i) {
    const auto x = syn::random_matrix(40, 50, 3, 15, 300 + i);
    for (auto a : topics::kAllAlgorithms) {
      auto c = model_config(a, 4, i);
      c.max_iterations = 200;
      c.burn_in = 100;
      const auto m = topics::fit(x, c);
      expect(rows_stochastic(m), std::string("row-stochastic ") + std::string(topics::algorithm_name(a)));
      for (std::size_t r = 0; r < 5; ++r) {
        const auto p = topics::infer_theta(m, x.column(r), r).p;
        double s = 0.0;
        for (double v : p) s += std::isfinite(v) ? v : 1e9;
        expect(std::abs(s - 1.0) <= kStochasticTolerance, "infer_theta normalization");
      }
    }
    topics::GibbsSampler g(x, model_config(topics::Algorithm::lda_gs, 4, i));
    for (int sweep = 0; sweep < 10; ++sweep) {
      g.sweep();
      std::size_t total = 0;
      for (std::size_t k = 0; k < g.num_topics(); ++k) {
        std::size_t s = 0;
        for (std::size_t w = 0; w < g.num_terms(); ++w) s += g.topic_word(k, w);
        expect(s == g.topic_total(k), "Gibbs topic totals");
        total += s;
      }
      for (std::size_t r = 0; r < g.num_sentences(); ++r) {
        std::size_t s = 0;
        for (std::size_t k = 0; k < g.num_topics(); ++k) s += g.sentence_topic(r, k);
        expect(s == g.sentence_length(r), "Gibbs sentence totals");
      }
      expect(total == x.total_tokens(), "Gibbs token conservation");
    }
  }

  // Artifacts of the determinism run.
  const auto out = kRunRoot / "run_a" / "out";
  if (!fs::exists(out / "corpus.json")) return {false, "pipeline artifacts missing"};
  const auto corpus = corpus::load_corpus(out / "corpus.json");
  for (std::size_t i = 0; i < corpus.split.learning.size(); ++i) {
    const auto& col = corpus.matrix.column(i);
    std::size_t s = 0;
    for (const auto& tc : col.counts) s += tc.count;
    const auto& toks = corpus.sentences[corpus.split.learning[i]].tokens;
    std::size_t known = 0;
    for (const auto& t : toks) known += corpus.vocabulary.find(t).has_value();
    expect(s == col.length && s == known, "matrix column sums");
  }
  for (const char* id : {"plsa", "lda_vi", "lda_gs"})
    expect(rows_stochastic(topics::load_model(out / ("model_" + std::string(id) + ".json"))),
           std::string("row-stochastic model_") + id);

  const auto cal = json::parse(read_file(out / "calibration.json"));
  std::map<std::string, std::pair<double, double>> range;
  for (const auto& a : cal["analyzers"])
    range[a["analyzer"]] = {a["min"].get<double>(), a["max"].get<double>()};
  std::map<std::string, std::pair<bool, bool>> endpoints;
  std::map<std::string, std::map<std::string, std::size_t>> per_entity;
  std::map<std::string, std::string> aspect_of;
  for (const auto& line : split(read_file(out / "aspects.jsonl"), '\n')) {
    if (line.empty()) continue;
    const auto j = json::parse(line);
    aspect_of[j["sentence_id"]] = j["aspect"];
  }
  for (const auto& line : split(read_file(out / "sentiment.jsonl"), '\n')) {
    if (line.empty()) continue;
    const auto j = json::parse(line);
    for (const auto& [id, v] : j["scores"].items()) {
      const auto [lo, hi] = range[id];
      const double n = sentiment::normalize_score(v.get<double>(), {lo, hi});
      expect(n >= -1.0 && n <= 1.0, "normalized score range");
      endpoints[id].first = endpoints[id].first || n == -1.0;
      endpoints[id].second = endpoints[id].second || n == 1.0;
    }
    ++per_entity[j["entity_id"]][aspect_of[j["sentence_id"]]];
  }
  for (const auto& [id, e] : endpoints) expect(e.first && e.second, "normalized endpoints " + id);

  const auto aos = json::parse(read_file(out / "aos.json"));
  for (const auto& entity : aos) {
    const auto& counts = per_entity[entity["entity_id"]];
    std::size_t total = 0;
    for (const auto& [a, n] : counts) total += n;
    std::size_t summed = entity["excluded_null"].get<std::size_t>();
    for (const auto& a : entity["aspects"]) {
      const auto t = a["total"].get<std::size_t>();
      summed += t;
      expect(t == counts.at(a["aspect"].get<std::string>()), "AOS counts");
      const double shares = a["positive_share"].get<double>() + a["neutral_share"].get<double>() +
                            a["negative_share"].get<double>();
      expect(std::abs(shares - 1.0) <= 1e-9, "AOS proportions");
    }
    expect(summed == total, "AOS totals");
  }

  std::set<std::string> unique(failed.begin(), failed.end());
  std::string detail = unique.empty() ? "all invariant checks hold" : "failed:";
  for (const auto& f : unique) detail += " [" + f + "]";
  return {unique.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"published F1 fixture consistency", fixture_consistency},
      {"pLSA log-likelihood monotonicity", [] { return monotone(topics::Algorithm::plsa_em); }},
      {"LDA-VI ELBO monotonicity", [] { return monotone(topics::Algorithm::lda_vi); }},
      {"synthetic topic recovery", recovery},
      {"coherence oracle equivalence", coherence_oracle},
      {"EA-TM branch coverage", ensemble_branches},
      {"E-SA branch coverage", sentiment_branches},
      {"ensemble sanity on synthetic labels", ensemble_sanity},
      {"bigram oracle", bigram_oracle},
      {"end-to-end determinism", determinism},
      {"structural invariants", structural},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s [%2zu] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}
