#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aspectlens/corpus.h"
#include "aspectlens/util.h"
#include "json.hpp"

namespace aspectlens::topics {

using corpus::CorpusMatrix;
using corpus::EncodedSentence;

enum class Algorithm { plsa_em, lda_vi, lda_gs };

Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm a);
inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::plsa_em, Algorithm::lda_vi,
                                               Algorithm::lda_gs};

struct ModelConfig {
  Algorithm algorithm = Algorithm::plsa_em;
  std::size_t K = 10;
  std::optional<double> alpha;  // unset: 50 / K
  double beta = 0.01;
  std::size_t max_iterations = 500;
  double tolerance = 1e-5;
  std::size_t burn_in = 500;
  std::size_t sample_lag = 10;
  std::uint64_t seed = 1;

  // Per-algorithm defaults: 500 iterations at relative tolerance 1e-5 for EM
  // and VI; 1000 sweeps with burn-in 500 and lag 10 for Gibbs.
  static ModelConfig defaults(Algorithm algorithm);

  double alpha_value() const { return alpha ? *alpha : 50.0 / static_cast<double>(K); }
  void validate(std::size_t num_terms) const;
};

nlohmann::json config_to_json(const ModelConfig& c);
ModelConfig config_from_json(const nlohmann::json& j);

class FittedTopicModel {
 public:
  ModelConfig config;
  std::uint64_t vocabulary_fingerprint = 0;
  std::size_t num_topics = 0;
  std::size_t num_terms = 0;
  std::size_t num_sentences = 0;
  std::vector<double> phi;    // K x U, row-major
  std::vector<double> theta;  // R x K, row-major
  // Variational topic totals (sum over w of lambda); only for lda_vi. Together
  // with phi they reconstruct the variational topic parameters.
  std::vector<double> topic_mass;
  std::vector<double> objective_trace;

  Algorithm algorithm() const { return config.algorithm; }
  std::span<const double> phi_row(std::size_t k) const {
    return {phi.data() + k * num_terms, num_terms};
  }
  std::span<const double> theta_row(std::size_t r) const {
    return {theta.data() + r * num_topics, num_topics};
  }
  double phi_at(std::size_t k, std::size_t w) const { return phi[k * num_terms + w]; }
  double theta_at(std::size_t r, std::size_t k) const { return theta[r * num_topics + k]; }

  // Mean theta mass of each topic over the training sentences.
  std::vector<double> prevalence() const;
  // Indices of the n highest-phi terms of topic k; ties go to the lower index.
  std::vector<corpus::TermId> top_terms(std::size_t k, std::size_t n) const;
};

inline constexpr int kModelFormatVersion = 1;

nlohmann::json model_to_json(const FittedTopicModel& m);
FittedTopicModel model_from_json(const nlohmann::json& j);
void save_model(const std::filesystem::path& path, const FittedTopicModel& m);
FittedTopicModel load_model(const std::filesystem::path& path);

FittedTopicModel fit_plsa(const CorpusMatrix& matrix, const ModelConfig& config);
FittedTopicModel fit_lda_gibbs(const CorpusMatrix& matrix, const ModelConfig& config);
FittedTopicModel fit_lda_vi(const CorpusMatrix& matrix, const ModelConfig& config);
// Dispatches on config.algorithm and stamps the vocabulary fingerprint.
FittedTopicModel fit(const CorpusMatrix& matrix, const ModelConfig& config,
                     std::uint64_t vocabulary_fingerprint = 0);

// Collapsed Gibbs sampler state, exposed so the count bookkeeping can be
// inspected between sweeps.
class GibbsSampler {
 public:
  GibbsSampler(const CorpusMatrix& matrix, const ModelConfig& config);

  void sweep();
  // log P(w | z) with phi integrated out.
  double log_likelihood() const;
  // Adds the current counts to the running average used for the estimates.
  void accumulate();
  std::size_t samples() const { return samples_; }
  FittedTopicModel estimate() const;

  std::size_t num_topics() const { return K_; }
  std::size_t num_terms() const { return U_; }
  std::size_t num_sentences() const { return R_; }
  std::size_t num_tokens() const { return words_.size(); }
  std::uint32_t topic_word(std::size_t k, std::size_t w) const { return nkw_[k * U_ + w]; }
  std::uint32_t topic_total(std::size_t k) const { return nk_[k]; }
  std::uint32_t sentence_topic(std::size_t r, std::size_t k) const { return nrk_[r * K_ + k]; }
  std::size_t sentence_length(std::size_t r) const { return offsets_[r + 1] - offsets_[r]; }

 private:
  ModelConfig config_;
  std::size_t K_, U_, R_;
  double alpha_, beta_;
  std::vector<corpus::TermId> words_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> z_;
  std::vector<std::uint32_t> nkw_, nk_, nrk_;
  std::vector<double> sum_nkw_, sum_nk_, sum_nrk_;
  std::size_t samples_ = 0;
  Rng rng_;
  std::vector<double> weights_;
};

struct InferenceOptions {
  std::size_t em_iterations = 1000;
  double em_tolerance = 1e-10;
  std::size_t gibbs_sweeps = 200;
  std::size_t gibbs_burn_in = 100;
  std::size_t gibbs_lag = 5;
  std::size_t vi_iterations = 200;
  double vi_tolerance = 1e-8;
};

struct InferredTheta {
  std::vector<double> p;
  bool oov = false;  // no in-vocabulary token: p is uniform
};

// Aspect distribution of a sentence under a frozen model: folding-in for
// pLSA, Gibbs sampling with frozen topic-word counts for lda_gs, the
// variational E-step for lda_vi.
InferredTheta infer_theta(const FittedTopicModel& model, const EncodedSentence& sentence,
                          std::uint64_t seed_salt = 0, const InferenceOptions& options = {});

// Encodes tokens through `vocab` after checking it matches the model.
InferredTheta infer_theta(const FittedTopicModel& model, const corpus::Vocabulary& vocab,
                          const std::vector<std::string>& tokens,
                          const InferenceOptions& options = {});

// Log-likelihood: sum over sentences of c(w,r) log sum_k phi theta.
double log_likelihood(const FittedTopicModel& model, const CorpusMatrix& matrix);

// exp(-LL / N) of held-out sentences with theta from infer_theta.
double perplexity(const FittedTopicModel& model, const std::vector<EncodedSentence>& sentences,
                  const InferenceOptions& options = {});

struct CoherenceReport {
  std::vector<double> per_topic;
  double mean = 0.0;
  std::size_t n_top = 10;
  double epsilon = 1.0;
};

CoherenceReport coherence(const FittedTopicModel& model, const CorpusMatrix& matrix,
                          std::size_t n_top = 10, double epsilon = 1.0);

struct KSelectionRow {
  std::size_t K = 0;
  std::vector<double> per_seed;
  double mean_coherence = 0.0;
};

struct KSelectionResult {
  std::size_t k_min = 0, k_max = 0, step = 1;
  std::vector<KSelectionRow> rows;
  std::size_t chosen = 0;
};

// Smallest K whose mean coherence equals the maximum over the table.
std::size_t choose_k(const std::vector<KSelectionRow>& rows);

struct SelectKOptions {
  std::size_t k_min = 5, k_max = 50, step = 1;
  std::size_t n_top = 10;
  double epsilon = 1.0;
  std::size_t seeds = 1;  // fits per K, seeds derived from the template seed
};

KSelectionResult select_k(const CorpusMatrix& matrix, const ModelConfig& config_template,
                          const SelectKOptions& options);

nlohmann::json selection_to_json(const KSelectionResult& r, Algorithm algorithm);

}  // namespace aspectlens::topics
