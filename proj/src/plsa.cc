#include <cmath>
#include <numeric>

#include "aspectlens/topic_model.h"
#include "fit_common.h"

namespace aspectlens::topics {

FittedTopicModel fit_plsa(const CorpusMatrix& matrix, const ModelConfig& config) {
  detail::check_corpus(matrix, config, Algorithm::plsa_em);
  const std::size_t K = config.K, U = matrix.num_terms(), R = matrix.num_sentences();
  Rng rng(mix_seed(config.seed, 0x9145a));

  FittedTopicModel m;
  m.config = config;
  m.num_topics = K;
  m.num_terms = U;
  m.num_sentences = R;
  m.phi.resize(K * U);
  m.theta.resize(R * K);
  for (auto& v : m.phi) v = 0.1 + rng.uniform();
  for (auto& v : m.theta) v = 0.1 + rng.uniform();
  auto normalize_rows = [](std::vector<double>& a, std::size_t rows, std::size_t cols) {
    for (std::size_t i = 0; i < rows; ++i) {
      double* row = a.data() + i * cols;
      const double s = std::accumulate(row, row + cols, 0.0);
      for (std::size_t j = 0; j < cols; ++j) row[j] = s > 0 ? row[j] / s : 1.0 / cols;
    }
  };
  normalize_rows(m.phi, K, U);
  normalize_rows(m.theta, R, K);

  std::vector<double> phi_next(K * U), theta_next(R * K), resp(K);
  double prev = 0.0;
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    // E-step fused with the expected-count accumulation of the M-step.
    std::fill(phi_next.begin(), phi_next.end(), 0.0);
    std::fill(theta_next.begin(), theta_next.end(), 0.0);
    for (std::size_t r = 0; r < R; ++r) {
      const double* th = m.theta.data() + r * K;
      double* th_next = theta_next.data() + r * K;
      for (const auto& tc : matrix.column(r).counts) {
        double z = 0.0;
        for (std::size_t k = 0; k < K; ++k) z += resp[k] = m.phi[k * U + tc.term] * th[k];
        if (z <= 0.0) continue;
        const double scale = tc.count / z;
        for (std::size_t k = 0; k < K; ++k) {
          const double e = resp[k] * scale;
          phi_next[k * U + tc.term] += e;
          th_next[k] += e;
        }
      }
    }
    // Sentences without tokens keep their current mixture.
    for (std::size_t r = 0; r < R; ++r)
      if (matrix.column(r).length == 0)
        std::copy_n(m.theta.data() + r * K, K, theta_next.data() + r * K);
    normalize_rows(phi_next, K, U);
    normalize_rows(theta_next, R, K);
    m.phi.swap(phi_next);
    m.theta.swap(theta_next);

    const double ll = log_likelihood(m, matrix);
    m.objective_trace.push_back(ll);
    if (it > 0 && std::abs(ll - prev) < config.tolerance * std::abs(prev)) break;
    prev = ll;
  }
  return m;
}

}  // namespace aspectlens::topics
