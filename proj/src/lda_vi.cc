#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/digamma.hpp>

#include "aspectlens/topic_model.h"
#include "fit_common.h"

namespace aspectlens::topics {

namespace {

constexpr std::size_t kInnerIterations = 100;
constexpr double kInnerTolerance = 1e-6;

}  // namespace

FittedTopicModel fit_lda_vi(const CorpusMatrix& matrix, const ModelConfig& config) {
  using boost::math::digamma;
  detail::check_corpus(matrix, config, Algorithm::lda_vi);
  const std::size_t K = config.K, U = matrix.num_terms(), R = matrix.num_sentences();
  const double alpha = config.alpha_value(), beta = config.beta;
  const double Kd = static_cast<double>(K), Ud = static_cast<double>(U);
  Rng rng(mix_seed(config.seed, 0x7f1a));

  std::vector<double> lambda(K * U);
  for (auto& v : lambda) v = rng.gamma(100.0) / 100.0;
  std::vector<double> gamma(R * K, alpha);

  std::vector<double> elog_beta(K * U), sstats(K * U), lambda_sum(K);
  std::vector<double> elog_theta(K), gamma_next(K), phi;
  const double doc_const = std::lgamma(Kd * alpha) - Kd * std::lgamma(alpha);
  const double topic_const = std::lgamma(Ud * beta) - Ud * std::lgamma(beta);

  FittedTopicModel m;
  double prev = 0.0;
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    for (std::size_t k = 0; k < K; ++k) {
      lambda_sum[k] = std::accumulate(lambda.begin() + k * U, lambda.begin() + (k + 1) * U, 0.0);
      const double dsum = digamma(lambda_sum[k]);
      for (std::size_t w = 0; w < U; ++w) elog_beta[k * U + w] = digamma(lambda[k * U + w]) - dsum;
    }
    std::fill(sstats.begin(), sstats.end(), 0.0);
    double elbo = 0.0;

    // E-step from a fresh gamma per sentence. The bound is evaluated at the new
    // local parameters and the lambda they were computed against.
    for (std::size_t r = 0; r < R; ++r) {
      const auto& col = matrix.column(r);
      if (col.length == 0) continue;
      double* g = gamma.data() + r * K;
      std::fill_n(g, K, alpha + static_cast<double>(col.length) / Kd);
      const std::size_t n = col.counts.size();
      phi.resize(n * K);
      for (std::size_t inner = 0; inner < kInnerIterations; ++inner) {
        const double dsum = digamma(std::accumulate(g, g + K, 0.0));
        for (std::size_t k = 0; k < K; ++k) elog_theta[k] = digamma(g[k]) - dsum;
        std::fill(gamma_next.begin(), gamma_next.end(), alpha);
        for (std::size_t i = 0; i < n; ++i) {
          double* p = phi.data() + i * K;
          double mx = -INFINITY;
          for (std::size_t k = 0; k < K; ++k)
            mx = std::max(mx, p[k] = elog_beta[k * U + col.counts[i].term] + elog_theta[k]);
          double z = 0.0;
          for (std::size_t k = 0; k < K; ++k) z += p[k] = std::exp(p[k] - mx);
          for (std::size_t k = 0; k < K; ++k) {
            p[k] /= z;
            gamma_next[k] += col.counts[i].count * p[k];
          }
        }
        double change = 0.0;
        for (std::size_t k = 0; k < K; ++k) change += std::abs(gamma_next[k] - g[k]);
        std::copy(gamma_next.begin(), gamma_next.end(), g);
        if (change / Kd < kInnerTolerance) break;
      }

      const double gsum = std::accumulate(g, g + K, 0.0);
      const double dsum = digamma(gsum);
      for (std::size_t k = 0; k < K; ++k) elog_theta[k] = digamma(g[k]) - dsum;
      double doc = doc_const - std::lgamma(gsum);
      for (std::size_t k = 0; k < K; ++k)
        doc += (alpha - g[k]) * elog_theta[k] + std::lgamma(g[k]);
      for (std::size_t i = 0; i < n; ++i) {
        const auto w = col.counts[i].term;
        const double c = col.counts[i].count;
        const double* p = phi.data() + i * K;
        for (std::size_t k = 0; k < K; ++k) {
          if (p[k] <= 0.0) continue;
          doc += c * p[k] * (elog_theta[k] + elog_beta[k * U + w] - std::log(p[k]));
          sstats[k * U + w] += c * p[k];
        }
      }
      elbo += doc;
    }
    for (std::size_t k = 0; k < K; ++k) {
      double topic = topic_const - std::lgamma(lambda_sum[k]);
      for (std::size_t w = 0; w < U; ++w) {
        const double l = lambda[k * U + w];
        topic += (beta - l) * elog_beta[k * U + w] + std::lgamma(l);
      }
      elbo += topic;
    }
    m.objective_trace.push_back(elbo);

    // M-step.
    for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] = beta + sstats[i];

    if (it > 0 && std::abs(elbo - prev) < config.tolerance * std::abs(prev)) break;
    prev = elbo;
  }

  m.config = config;
  m.num_topics = K;
  m.num_terms = U;
  m.num_sentences = R;
  m.phi.resize(K * U);
  m.topic_mass.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double s = std::accumulate(lambda.begin() + k * U, lambda.begin() + (k + 1) * U, 0.0);
    m.topic_mass[k] = s;
    for (std::size_t w = 0; w < U; ++w) m.phi[k * U + w] = lambda[k * U + w] / s;
  }
  m.theta.resize(R * K);
  for (std::size_t r = 0; r < R; ++r) {
    const double* g = gamma.data() + r * K;
    const double s = std::accumulate(g, g + K, 0.0);
    for (std::size_t k = 0; k < K; ++k) m.theta[r * K + k] = g[k] / s;
  }
  return m;
}

}  // namespace aspectlens::topics
