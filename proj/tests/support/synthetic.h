#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "aspectlens/corpus.h"
#include "aspectlens/util.h"

namespace aspectlens::testing {

struct SyntheticCorpus {
  std::size_t K = 0, U = 0;
  std::vector<std::vector<double>> phi;    // K rows over U terms
  std::vector<std::vector<double>> theta;  // per sentence
  std::vector<std::vector<std::size_t>> topic_of_token;
  corpus::CorpusMatrix matrix;
  std::vector<std::vector<std::string>> tokens;  // "w<index>" strings
  std::vector<std::size_t> dominant;             // argmax of theta
};

// Topics own disjoint blocks of U/K terms and leak `leak` of their mass
// uniformly over the rest.
inline std::vector<std::vector<double>> block_topics(std::size_t K, std::size_t U, double leak,
                                                     Rng& rng) {
  std::vector<std::vector<double>> phi(K, std::vector<double>(U, 0.0));
  const std::size_t block = U / K;
  for (std::size_t k = 0; k < K; ++k) {
    double own = 0.0;
    std::vector<double> w(U, 0.0);
    for (std::size_t u = k * block; u < (k + 1) * block; ++u) own += w[u] = 0.5 + rng.uniform();
    for (std::size_t u = 0; u < U; ++u) {
      const bool mine = u >= k * block && u < (k + 1) * block;
      phi[k][u] = mine ? (1.0 - leak) * w[u] / own : leak / static_cast<double>(U - block);
    }
  }
  return phi;
}

inline SyntheticCorpus generate(std::size_t K, std::size_t U, std::size_t sentences,
                                std::size_t length, double alpha, std::uint64_t seed,
                                double leak = 0.02) {
  Rng rng(seed);
  SyntheticCorpus out;
  out.K = K;
  out.U = U;
  out.phi = block_topics(K, U, leak, rng);
  std::vector<double> a(K, alpha);
  std::vector<corpus::EncodedSentence> cols;
  for (std::size_t r = 0; r < sentences; ++r) {
    auto th = rng.dirichlet(a);
    std::vector<std::size_t> counts(U, 0);
    std::vector<std::size_t> topics;
    std::vector<std::string> toks;
    for (std::size_t i = 0; i < length; ++i) {
      const auto k = rng.categorical(th);
      const auto w = rng.categorical(out.phi[k]);
      ++counts[w];
      topics.push_back(k);
      toks.push_back("w" + std::to_string(w));
    }
    corpus::EncodedSentence s;
    for (std::size_t w = 0; w < U; ++w)
      if (counts[w]) s.counts.push_back({static_cast<corpus::TermId>(w), static_cast<std::uint32_t>(counts[w])});
    s.length = length;
    cols.push_back(std::move(s));
    out.dominant.push_back(static_cast<std::size_t>(
        std::max_element(th.begin(), th.end()) - th.begin()));
    out.theta.push_back(std::move(th));
    out.topic_of_token.push_back(std::move(topics));
    out.tokens.push_back(std::move(toks));
  }
  out.matrix = corpus::CorpusMatrix(U, std::move(cols));
  return out;
}

inline double total_variation(const std::vector<double>& a, const double* b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

// Greedy one-to-one matching of estimated topics to true topics by smallest
// total variation. Returns the mean distance and assignment[true] = estimated.
struct Alignment {
  double mean_tv = 0.0;
  std::vector<std::size_t> estimated_for_true;
};

inline Alignment align(const std::vector<std::vector<double>>& truth, const std::vector<double>& phi,
                       std::size_t U) {
  const std::size_t K = truth.size();
  std::vector<std::vector<double>> d(K, std::vector<double>(K));
  for (std::size_t t = 0; t < K; ++t)
    for (std::size_t e = 0; e < K; ++e) d[t][e] = total_variation(truth[t], phi.data() + e * U);
  Alignment out;
  out.estimated_for_true.assign(K, K);
  std::vector<bool> used_t(K, false), used_e(K, false);
  double sum = 0.0;
  for (std::size_t step = 0; step < K; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bt = 0, be = 0;
    for (std::size_t t = 0; t < K; ++t)
      for (std::size_t e = 0; e < K; ++e)
        if (!used_t[t] && !used_e[e] && d[t][e] < best) best = d[t][e], bt = t, be = e;
    used_t[bt] = used_e[be] = true;
    out.estimated_for_true[bt] = be;
    sum += best;
  }
  out.mean_tv = sum / static_cast<double>(K);
  return out;
}

// Random sparse corpus: `sentences` columns of Poisson-ish length over U terms.
inline corpus::CorpusMatrix random_matrix(std::size_t sentences, std::size_t U,
                                          std::size_t min_len, std::size_t max_len,
                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<corpus::EncodedSentence> cols;
  for (std::size_t r = 0; r < sentences; ++r) {
    const std::size_t len = min_len + rng.below(max_len - min_len + 1);
    std::vector<std::uint32_t> counts(U, 0);
    for (std::size_t i = 0; i < len; ++i) ++counts[rng.below(U)];
    corpus::EncodedSentence s;
    for (std::size_t w = 0; w < U; ++w)
      if (counts[w]) s.counts.push_back({static_cast<corpus::TermId>(w), counts[w]});
    s.length = len;
    cols.push_back(std::move(s));
  }
  return corpus::CorpusMatrix(U, std::move(cols));
}

}  // namespace aspectlens::testing
