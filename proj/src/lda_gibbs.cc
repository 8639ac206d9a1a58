#include <cmath>

#include "aspectlens/topic_model.h"
#include "fit_common.h"

namespace aspectlens::topics {

GibbsSampler::GibbsSampler(const CorpusMatrix& matrix, const ModelConfig& config)
    : config_(config),
      K_(config.K),
      U_(matrix.num_terms()),
      R_(matrix.num_sentences()),
      alpha_(config.alpha_value()),
      beta_(config.beta),
      rng_(mix_seed(config.seed, 0x61bb5)) {
  offsets_.reserve(R_ + 1);
  offsets_.push_back(0);
  for (std::size_t r = 0; r < R_; ++r) {
    for (const auto& tc : matrix.column(r).counts)
      for (std::uint32_t i = 0; i < tc.count; ++i) words_.push_back(tc.term);
    offsets_.push_back(words_.size());
  }
  z_.resize(words_.size());
  nkw_.assign(K_ * U_, 0);
  nk_.assign(K_, 0);
  nrk_.assign(R_ * K_, 0);
  for (std::size_t r = 0; r < R_; ++r) {
    for (std::size_t i = offsets_[r]; i < offsets_[r + 1]; ++i) {
      const auto k = static_cast<std::uint32_t>(rng_.below(K_));
      z_[i] = k;
      ++nkw_[k * U_ + words_[i]];
      ++nk_[k];
      ++nrk_[r * K_ + k];
    }
  }
  sum_nkw_.assign(K_ * U_, 0.0);
  sum_nk_.assign(K_, 0.0);
  sum_nrk_.assign(R_ * K_, 0.0);
  weights_.resize(K_);
}

void GibbsSampler::sweep() {
  const double u_beta = static_cast<double>(U_) * beta_;
  for (std::size_t r = 0; r < R_; ++r) {
    std::uint32_t* nr = nrk_.data() + r * K_;
    for (std::size_t i = offsets_[r]; i < offsets_[r + 1]; ++i) {
      const auto w = words_[i];
      auto k = z_[i];
      --nkw_[k * U_ + w];
      --nk_[k];
      --nr[k];
      for (std::size_t t = 0; t < K_; ++t)
        weights_[t] = (nkw_[t * U_ + w] + beta_) / (nk_[t] + u_beta) * (nr[t] + alpha_);
      k = static_cast<std::uint32_t>(rng_.categorical(weights_));
      z_[i] = k;
      ++nkw_[k * U_ + w];
      ++nk_[k];
      ++nr[k];
    }
  }
}

double GibbsSampler::log_likelihood() const {
  const double u_beta = static_cast<double>(U_) * beta_;
  const double lg_beta = std::lgamma(beta_);
  double ll = 0.0;
  for (std::size_t k = 0; k < K_; ++k) {
    ll += std::lgamma(u_beta) - std::lgamma(nk_[k] + u_beta);
    for (std::size_t w = 0; w < U_; ++w) {
      const auto n = nkw_[k * U_ + w];
      if (n > 0) ll += std::lgamma(n + beta_) - lg_beta;
    }
  }
  return ll;
}

void GibbsSampler::accumulate() {
  for (std::size_t i = 0; i < nkw_.size(); ++i) sum_nkw_[i] += nkw_[i];
  for (std::size_t i = 0; i < nk_.size(); ++i) sum_nk_[i] += nk_[i];
  for (std::size_t i = 0; i < nrk_.size(); ++i) sum_nrk_[i] += nrk_[i];
  ++samples_;
}

FittedTopicModel GibbsSampler::estimate() const {
  FittedTopicModel m;
  m.config = config_;
  m.num_topics = K_;
  m.num_terms = U_;
  m.num_sentences = R_;
  m.phi.resize(K_ * U_);
  m.theta.resize(R_ * K_);
  const bool averaged = samples_ > 0;
  const double n = averaged ? static_cast<double>(samples_) : 1.0;
  auto nkw = [&](std::size_t i) { return averaged ? sum_nkw_[i] / n : double(nkw_[i]); };
  auto nk = [&](std::size_t k) { return averaged ? sum_nk_[k] / n : double(nk_[k]); };
  auto nrk = [&](std::size_t i) { return averaged ? sum_nrk_[i] / n : double(nrk_[i]); };
  const double u_beta = static_cast<double>(U_) * beta_;
  const double k_alpha = static_cast<double>(K_) * alpha_;
  for (std::size_t k = 0; k < K_; ++k) {
    const double denom = nk(k) + u_beta;
    for (std::size_t w = 0; w < U_; ++w) m.phi[k * U_ + w] = (nkw(k * U_ + w) + beta_) / denom;
  }
  for (std::size_t r = 0; r < R_; ++r) {
    const double denom = static_cast<double>(sentence_length(r)) + k_alpha;
    for (std::size_t k = 0; k < K_; ++k) m.theta[r * K_ + k] = (nrk(r * K_ + k) + alpha_) / denom;
  }
  return m;
}

FittedTopicModel fit_lda_gibbs(const CorpusMatrix& matrix, const ModelConfig& config) {
  detail::check_corpus(matrix, config, Algorithm::lda_gs);
  GibbsSampler sampler(matrix, config);
  std::vector<double> trace;
  trace.reserve(config.max_iterations);
  for (std::size_t sweep = 1; sweep <= config.max_iterations; ++sweep) {
    sampler.sweep();
    trace.push_back(sampler.log_likelihood());
    if (sweep > config.burn_in && (sweep - config.burn_in) % config.sample_lag == 0)
      sampler.accumulate();
  }
  if (sampler.samples() == 0) sampler.accumulate();
  auto m = sampler.estimate();
  m.objective_trace = std::move(trace);
  return m;
}

}  // namespace aspectlens::topics
