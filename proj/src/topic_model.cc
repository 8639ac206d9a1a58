#include "aspectlens/topic_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/digamma.hpp>

namespace aspectlens::topics {

using nlohmann::json;

Algorithm parse_algorithm(std::string_view name) {
  if (name == "plsa_em" || name == "plsa") return Algorithm::plsa_em;
  if (name == "lda_vi") return Algorithm::lda_vi;
  if (name == "lda_gs" || name == "lda_gibbs") return Algorithm::lda_gs;
  throw ValidationError("unknown algorithm '" + std::string(name) + "' (plsa_em|lda_vi|lda_gs)");
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::plsa_em: return "plsa_em";
    case Algorithm::lda_vi: return "lda_vi";
    case Algorithm::lda_gs: return "lda_gs";
  }
  return "?";
}

ModelConfig ModelConfig::defaults(Algorithm algorithm) {
  ModelConfig c;
  c.algorithm = algorithm;
  if (algorithm == Algorithm::lda_gs) c.max_iterations = 1000;
  return c;
}

void ModelConfig::validate(std::size_t num_terms) const {
  const std::string tag = std::string(algorithm_name(algorithm)) + ": ";
  if (K < 1) throw ValidationError(tag + "K must be at least 1");
  if (num_terms > 0 && K > num_terms)
    throw ValidationError(tag + "K=" + std::to_string(K) + " exceeds vocabulary size " +
                          std::to_string(num_terms));
  if (!(alpha_value() > 0.0)) throw ValidationError(tag + "alpha must be > 0");
  if (!(beta > 0.0)) throw ValidationError(tag + "beta must be > 0");
  if (max_iterations < 1) throw ValidationError(tag + "max_iterations must be >= 1");
  if (!(tolerance > 0.0)) throw ValidationError(tag + "tolerance must be > 0");
  if (algorithm == Algorithm::lda_gs) {
    if (burn_in >= max_iterations)
      throw ValidationError(tag + "burn_in must be smaller than max_iterations");
    if (sample_lag < 1) throw ValidationError(tag + "sample_lag must be >= 1");
  }
}

json config_to_json(const ModelConfig& c) {
  return {{"algorithm", algorithm_name(c.algorithm)},
          {"K", c.K},
          {"alpha", c.alpha_value()},
          {"beta", c.beta},
          {"max_iterations", c.max_iterations},
          {"tolerance", c.tolerance},
          {"burn_in", c.burn_in},
          {"sample_lag", c.sample_lag},
          {"seed", c.seed}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c = ModelConfig::defaults(parse_algorithm(j.at("algorithm").get<std::string>()));
  c.K = j.at("K").get<std::size_t>();
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.max_iterations = j.at("max_iterations").get<std::size_t>();
  c.tolerance = j.at("tolerance").get<double>();
  c.burn_in = j.at("burn_in").get<std::size_t>();
  c.sample_lag = j.at("sample_lag").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

std::vector<double> FittedTopicModel::prevalence() const {
  std::vector<double> p(num_topics, 0.0);
  if (num_sentences == 0) return p;
  for (std::size_t r = 0; r < num_sentences; ++r)
    for (std::size_t k = 0; k < num_topics; ++k) p[k] += theta_at(r, k);
  for (auto& v : p) v /= static_cast<double>(num_sentences);
  return p;
}

std::vector<corpus::TermId> FittedTopicModel::top_terms(std::size_t k, std::size_t n) const {
  std::vector<corpus::TermId> idx(num_terms);
  std::iota(idx.begin(), idx.end(), 0);
  n = std::min(n, num_terms);
  const auto row = phi_row(k);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n), idx.end(),
                    [&](corpus::TermId a, corpus::TermId b) {
                      return row[a] != row[b] ? row[a] > row[b] : a < b;
                    });
  idx.resize(n);
  return idx;
}

json model_to_json(const FittedTopicModel& m) {
  json phi = json::array();
  for (std::size_t k = 0; k < m.num_topics; ++k) {
    const auto row = m.phi_row(k);
    phi.push_back(std::vector<double>(row.begin(), row.end()));
  }
  json theta = json::array();
  for (std::size_t r = 0; r < m.num_sentences; ++r)
    for (std::size_t k = 0; k < m.num_topics; ++k)
      if (m.theta_at(r, k) != 0.0) theta.push_back({r, k, m.theta_at(r, k)});
  json j = {{"format_version", kModelFormatVersion},
            {"kind", "aspectlens.topic_model"},
            {"config", config_to_json(m.config)},
            {"vocabulary_fingerprint", hex64(m.vocabulary_fingerprint)},
            {"num_topics", m.num_topics},
            {"num_terms", m.num_terms},
            {"num_sentences", m.num_sentences},
            {"objective_trace", m.objective_trace},
            {"phi", phi},
            {"theta", theta}};
  if (!m.topic_mass.empty()) j["topic_mass"] = m.topic_mass;
  return j;
}

FittedTopicModel model_from_json(const json& j) {
  try {
    if (j.value("kind", "") != "aspectlens.topic_model")
      throw ValidationError("not a topic model artifact");
    if (j.at("format_version").get<int>() != kModelFormatVersion)
      throw ValidationError("unsupported model format_version");
    FittedTopicModel m;
    m.config = config_from_json(j.at("config"));
    m.vocabulary_fingerprint =
        std::stoull(j.at("vocabulary_fingerprint").get<std::string>(), nullptr, 16);
    m.num_topics = j.at("num_topics").get<std::size_t>();
    m.num_terms = j.at("num_terms").get<std::size_t>();
    m.num_sentences = j.at("num_sentences").get<std::size_t>();
    m.objective_trace = j.at("objective_trace").get<std::vector<double>>();
    const auto& phi = j.at("phi");
    if (phi.size() != m.num_topics) throw ValidationError("phi row count mismatch");
    m.phi.reserve(m.num_topics * m.num_terms);
    for (const auto& row : phi) {
      auto v = row.get<std::vector<double>>();
      if (v.size() != m.num_terms) throw ValidationError("phi row length mismatch");
      m.phi.insert(m.phi.end(), v.begin(), v.end());
    }
    m.theta.assign(m.num_sentences * m.num_topics, 0.0);
    for (const auto& t : j.at("theta")) {
      const auto r = t.at(0).get<std::size_t>();
      const auto k = t.at(1).get<std::size_t>();
      if (r >= m.num_sentences || k >= m.num_topics)
        throw ValidationError("theta entry out of range");
      m.theta[r * m.num_topics + k] = t.at(2).get<double>();
    }
    if (j.contains("topic_mass")) m.topic_mass = j.at("topic_mass").get<std::vector<double>>();
    if (m.algorithm() == Algorithm::lda_vi && m.topic_mass.size() != m.num_topics)
      throw ValidationError("lda_vi model lacks topic_mass");
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model artifact: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const FittedTopicModel& m) {
  write_file(path, model_to_json(m).dump() + "\n");
}

FittedTopicModel load_model(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

FittedTopicModel fit(const CorpusMatrix& matrix, const ModelConfig& config,
                     std::uint64_t vocabulary_fingerprint) {
  FittedTopicModel m;
  switch (config.algorithm) {
    case Algorithm::plsa_em: m = fit_plsa(matrix, config); break;
    case Algorithm::lda_vi: m = fit_lda_vi(matrix, config); break;
    case Algorithm::lda_gs: m = fit_lda_gibbs(matrix, config); break;
  }
  m.vocabulary_fingerprint = vocabulary_fingerprint;
  return m;
}

namespace {

void normalize_in_place(std::vector<double>& v) {
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  if (s > 0.0 && std::isfinite(s)) {
    for (auto& x : v) x /= s;
  } else {
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
  }
}

std::vector<double> fold_in(const FittedTopicModel& m, const EncodedSentence& s,
                            const InferenceOptions& opt) {
  const std::size_t K = m.num_topics;
  std::vector<double> theta(K, 1.0 / static_cast<double>(K)), next(K), resp(K);
  for (std::size_t it = 0; it < opt.em_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (const auto& tc : s.counts) {
      double z = 0.0;
      for (std::size_t k = 0; k < K; ++k) z += resp[k] = m.phi_at(k, tc.term) * theta[k];
      if (z <= 0.0) continue;
      for (std::size_t k = 0; k < K; ++k) next[k] += tc.count * resp[k] / z;
    }
    normalize_in_place(next);
    double change = 0.0;
    for (std::size_t k = 0; k < K; ++k) change = std::max(change, std::abs(next[k] - theta[k]));
    theta.swap(next);
    if (change < opt.em_tolerance) break;
  }
  return theta;
}

std::vector<double> gibbs_infer(const FittedTopicModel& m, const EncodedSentence& s,
                                std::uint64_t salt, const InferenceOptions& opt) {
  const std::size_t K = m.num_topics;
  const double alpha = m.config.alpha_value();
  Rng rng(mix_seed(m.config.seed, salt));
  std::vector<corpus::TermId> words;
  for (const auto& tc : s.counts)
    for (std::uint32_t i = 0; i < tc.count; ++i) words.push_back(tc.term);
  std::vector<std::uint32_t> z(words.size());
  std::vector<double> nk(K, 0.0), acc(K, 0.0), w(K);
  for (std::size_t i = 0; i < words.size(); ++i) {
    z[i] = static_cast<std::uint32_t>(rng.below(K));
    nk[z[i]] += 1.0;
  }
  std::size_t samples = 0;
  for (std::size_t sweep = 1; sweep <= opt.gibbs_sweeps; ++sweep) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      nk[z[i]] -= 1.0;
      for (std::size_t k = 0; k < K; ++k) w[k] = m.phi_at(k, words[i]) * (nk[k] + alpha);
      z[i] = static_cast<std::uint32_t>(rng.categorical(w));
      nk[z[i]] += 1.0;
    }
    if (sweep > opt.gibbs_burn_in && (sweep - opt.gibbs_burn_in) % opt.gibbs_lag == 0) {
      for (std::size_t k = 0; k < K; ++k) acc[k] += nk[k];
      ++samples;
    }
  }
  if (samples == 0) acc = nk, samples = 1;
  const double n = static_cast<double>(words.size());
  std::vector<double> theta(K);
  for (std::size_t k = 0; k < K; ++k)
    theta[k] = (acc[k] / static_cast<double>(samples) + alpha) / (n + K * alpha);
  normalize_in_place(theta);
  return theta;
}

std::vector<double> vi_infer(const FittedTopicModel& m, const EncodedSentence& s,
                             const InferenceOptions& opt) {
  using boost::math::digamma;
  const std::size_t K = m.num_topics;
  const double alpha = m.config.alpha_value();
  std::vector<double> gamma(K, alpha + static_cast<double>(s.length) / static_cast<double>(K));
  std::vector<double> next(K), elog_beta(s.counts.size() * K), phi(K);
  for (std::size_t i = 0; i < s.counts.size(); ++i)
    for (std::size_t k = 0; k < K; ++k) {
      const double lam = m.phi_at(k, s.counts[i].term) * m.topic_mass[k];
      elog_beta[i * K + k] = digamma(lam) - digamma(m.topic_mass[k]);
    }
  for (std::size_t it = 0; it < opt.vi_iterations; ++it) {
    std::vector<double> elog_theta(K);
    for (std::size_t k = 0; k < K; ++k) elog_theta[k] = digamma(gamma[k]);
    std::fill(next.begin(), next.end(), alpha);
    for (std::size_t i = 0; i < s.counts.size(); ++i) {
      double mx = -INFINITY;
      for (std::size_t k = 0; k < K; ++k)
        mx = std::max(mx, phi[k] = elog_beta[i * K + k] + elog_theta[k]);
      double z = 0.0;
      for (std::size_t k = 0; k < K; ++k) z += phi[k] = std::exp(phi[k] - mx);
      for (std::size_t k = 0; k < K; ++k) next[k] += s.counts[i].count * phi[k] / z;
    }
    double change = 0.0;
    for (std::size_t k = 0; k < K; ++k) change += std::abs(next[k] - gamma[k]);
    gamma.swap(next);
    if (change / static_cast<double>(K) < opt.vi_tolerance) break;
  }
  normalize_in_place(gamma);
  return gamma;
}

}  // namespace

InferredTheta infer_theta(const FittedTopicModel& model, const EncodedSentence& sentence,
                          std::uint64_t seed_salt, const InferenceOptions& options) {
  InferredTheta out;
  const std::size_t K = model.num_topics;
  if (sentence.length == 0) {
    out.p.assign(K, 1.0 / static_cast<double>(K));
    out.oov = true;
    return out;
  }
  switch (model.algorithm()) {
    case Algorithm::plsa_em: out.p = fold_in(model, sentence, options); break;
    case Algorithm::lda_gs: out.p = gibbs_infer(model, sentence, seed_salt, options); break;
    case Algorithm::lda_vi: out.p = vi_infer(model, sentence, options); break;
  }
  for (double v : out.p)
    if (!std::isfinite(v)) throw std::logic_error("non-finite inferred theta");
  return out;
}

InferredTheta infer_theta(const FittedTopicModel& model, const corpus::Vocabulary& vocab,
                          const std::vector<std::string>& tokens,
                          const InferenceOptions& options) {
  if (model.vocabulary_fingerprint != 0 && model.vocabulary_fingerprint != vocab.fingerprint())
    throw ValidationError("model was fitted on a different vocabulary");
  std::uint64_t salt = fnv1a("tokens");
  for (const auto& t : tokens) salt = fnv1a(" ", fnv1a(t, salt));
  return infer_theta(model, corpus::encode(vocab, tokens), salt, options);
}

double log_likelihood(const FittedTopicModel& model, const CorpusMatrix& matrix) {
  double ll = 0.0;
  for (std::size_t r = 0; r < matrix.num_sentences(); ++r) {
    for (const auto& tc : matrix.column(r).counts) {
      double p = 0.0;
      for (std::size_t k = 0; k < model.num_topics; ++k)
        p += model.phi_at(k, tc.term) * model.theta_at(r, k);
      ll += tc.count * std::log(p);
    }
  }
  return ll;
}

double perplexity(const FittedTopicModel& model, const std::vector<EncodedSentence>& sentences,
                  const InferenceOptions& options) {
  double ll = 0.0;
  double n = 0.0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto& s = sentences[i];
    if (s.length == 0) continue;
    const auto theta = infer_theta(model, s, mix_seed(0x9e1, i), options).p;
    for (const auto& tc : s.counts) {
      double p = 0.0;
      for (std::size_t k = 0; k < model.num_topics; ++k) p += model.phi_at(k, tc.term) * theta[k];
      ll += tc.count * std::log(p);
    }
    n += static_cast<double>(s.length);
  }
  if (n == 0.0) throw ValidationError("perplexity needs at least one in-vocabulary token");
  return std::exp(-ll / n);
}

}  // namespace aspectlens::topics
