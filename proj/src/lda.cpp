#include "atlas/lda.hpp"

#include <cmath>

namespace atlas {

using nlohmann::json;

Hyperparams Hyperparams::defaults_for(int num_topics) {
  Hyperparams h;
  h.num_topics = num_topics;
  h.alpha = num_topics > 0 ? 50.0 / num_topics : 0.0;
  h.beta = 0.01;
  h.iterations = 1000;
  h.burn_in = 500;
  return h;
}

void Hyperparams::validate() const {
  if (num_topics < 2) throw Error("num_topics must be at least 2");
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  if (!(beta > 0.0)) throw Error("beta must be positive");
  if (iterations < 1) throw Error("iterations must be positive");
  if (burn_in < 0) throw Error("burn_in must be non-negative");
  if (iterations <= burn_in) throw Error("iterations must exceed burn_in");
}

SamplerState SamplerState::from_assignments(const TokenizedCorpus& tc, int num_topics,
                                            std::vector<std::vector<int>> z) {
  SamplerState s;
  s.num_topics = num_topics;
  s.vocab_size = static_cast<int>(tc.vocabulary.size());
  s.doc_topic.assign(tc.docs.size() * num_topics, 0);
  s.word_topic.assign(static_cast<std::size_t>(s.vocab_size) * num_topics, 0);
  s.topic_total.assign(num_topics, 0);
  if (z.size() != tc.docs.size()) throw Error("assignment count does not match documents");
  for (std::size_t d = 0; d < tc.docs.size(); ++d) {
    if (z[d].size() != tc.docs[d].size()) {
      throw Error("assignment length does not match document " + std::to_string(d));
    }
    for (std::size_t i = 0; i < tc.docs[d].size(); ++i) {
      int k = z[d][i];
      if (k < 0 || k >= num_topics) throw Error("topic assignment out of range");
      ++s.doc_topic[d * num_topics + k];
      ++s.word_topic[static_cast<std::size_t>(tc.docs[d][i]) * num_topics + k];
      ++s.topic_total[k];
    }
  }
  s.z = std::move(z);
  return s;
}

bool SamplerState::conserves_counts(const TokenizedCorpus& tc) const {
  SamplerState fresh = from_assignments(tc, num_topics, z);
  if (fresh.doc_topic != doc_topic || fresh.word_topic != word_topic ||
      fresh.topic_total != topic_total) {
    return false;
  }
  std::int64_t total = 0;
  for (std::size_t d = 0; d < tc.docs.size(); ++d) {
    std::int64_t row = 0;
    for (int k = 0; k < num_topics; ++k) row += n_dk(d, k);
    if (row != static_cast<std::int64_t>(tc.docs[d].size())) return false;
    total += row;
  }
  std::int64_t topic_sum = 0;
  for (int k = 0; k < num_topics; ++k) {
    std::int64_t col = 0;
    for (int w = 0; w < vocab_size; ++w) col += n_kw(k, w);
    if (col != topic_total[k]) return false;
    topic_sum += topic_total[k];
  }
  return topic_sum == total;
}

double log_likelihood(const SamplerState& s, double alpha, double beta) {
  const int K = s.num_topics;
  const double V = s.vocab_size;
  double ll = 0.0;
  // Topic-word part.
  ll += K * (std::lgamma(V * beta) - V * std::lgamma(beta));
  for (std::size_t w = 0; w < static_cast<std::size_t>(s.vocab_size); ++w) {
    for (int k = 0; k < K; ++k) ll += std::lgamma(s.word_topic[w * K + k] + beta);
  }
  for (int k = 0; k < K; ++k) ll -= std::lgamma(static_cast<double>(s.topic_total[k]) + V * beta);
  // Document-topic part.
  const std::size_t D = s.z.size();
  ll += static_cast<double>(D) * (std::lgamma(K * alpha) - K * std::lgamma(alpha));
  for (std::size_t d = 0; d < D; ++d) {
    for (int k = 0; k < K; ++k) ll += std::lgamma(s.doc_topic[d * K + k] + alpha);
    ll -= std::lgamma(static_cast<double>(s.z[d].size()) + K * alpha);
  }
  return ll;
}

namespace {

std::vector<std::vector<int>> random_assignments(const TokenizedCorpus& tc, int K,
                                                 SamplerRng& rng) {
  std::vector<std::vector<int>> z(tc.docs.size());
  for (std::size_t d = 0; d < tc.docs.size(); ++d) {
    z[d].resize(tc.docs[d].size());
    for (auto& k : z[d]) k = rng.below(K);
  }
  return z;
}

void check_corpus(const TokenizedCorpus& tc) {
  if (tc.docs.empty() || tc.total_tokens() == 0) throw Error("empty tokenized corpus");
  if (tc.vocabulary.size() == 0) throw Error("empty vocabulary");
}

}  // namespace

GibbsSampler::GibbsSampler(const TokenizedCorpus& tc, const Hyperparams& hyper)
    : tc_(tc), hyper_(hyper), rng_(hyper.seed) {
  hyper_.validate();
  check_corpus(tc);
  state_ = SamplerState::from_assignments(tc, hyper_.num_topics,
                                          random_assignments(tc, hyper_.num_topics, rng_));
  reset_denominators();
}

GibbsSampler::GibbsSampler(const TokenizedCorpus& tc, const Hyperparams& hyper,
                           std::vector<std::vector<int>> initial_z)
    : tc_(tc), hyper_(hyper), rng_(hyper.seed) {
  hyper_.validate();
  check_corpus(tc);
  state_ = SamplerState::from_assignments(tc, hyper_.num_topics, std::move(initial_z));
  reset_denominators();
}

void GibbsSampler::reset_denominators() {
  const double vbeta = static_cast<double>(state_.vocab_size) * hyper_.beta;
  inv_denominator_.resize(hyper_.num_topics);
  for (int k = 0; k < hyper_.num_topics; ++k) {
    inv_denominator_[k] = 1.0 / (static_cast<double>(state_.topic_total[k]) + vbeta);
  }
  cumulative_.resize(hyper_.num_topics);
}

void GibbsSampler::sweep() {
  const int K = hyper_.num_topics;
  const double alpha = hyper_.alpha;
  const double beta = hyper_.beta;
  const double vbeta = static_cast<double>(state_.vocab_size) * beta;
  double* cum = cumulative_.data();
  double* inv = inv_denominator_.data();
  for (std::size_t d = 0; d < tc_.docs.size(); ++d) {
    const auto& doc = tc_.docs[d];
    auto& zd = state_.z[d];
    std::int32_t* ndk = &state_.doc_topic[d * K];
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const std::size_t w = static_cast<std::size_t>(doc[i]);
      std::int32_t* nwk = &state_.word_topic[w * K];
      int k = zd[i];
      --ndk[k];
      --nwk[k];
      inv[k] = 1.0 / (static_cast<double>(--state_.topic_total[k]) + vbeta);

      double total = 0.0;
      for (int t = 0; t < K; ++t) {
        total += (ndk[t] + alpha) * (nwk[t] + beta) * inv[t];
        cum[t] = total;
      }
      const double u = rng_.uniform() * total;
      k = 0;
      while (k < K - 1 && cum[k] <= u) ++k;

      zd[i] = k;
      ++ndk[k];
      ++nwk[k];
      inv[k] = 1.0 / (static_cast<double>(++state_.topic_total[k]) + vbeta);
    }
  }
  ++sweeps_;
}

std::vector<double> GibbsSampler::conditional(std::size_t d, std::size_t i) const {
  const int K = hyper_.num_topics;
  const double vbeta = static_cast<double>(state_.vocab_size) * hyper_.beta;
  const std::size_t w = static_cast<std::size_t>(tc_.docs.at(d).at(i));
  const int current = state_.z[d][i];
  std::vector<double> p(K);
  for (int k = 0; k < K; ++k) {
    const int own = k == current ? 1 : 0;
    p[k] = (state_.n_dk(d, k) - own + hyper_.alpha) * (state_.n_kw(k, w) - own + hyper_.beta) /
           (static_cast<double>(state_.topic_total[k] - own) + vbeta);
  }
  return p;
}

void GibbsSampler::accumulate() {
  if (doc_topic_sum_.empty()) {
    doc_topic_sum_.assign(state_.doc_topic.size(), 0);
    word_topic_sum_.assign(state_.word_topic.size(), 0);
  }
  for (std::size_t i = 0; i < state_.doc_topic.size(); ++i) {
    doc_topic_sum_[i] += static_cast<std::uint64_t>(state_.doc_topic[i]);
  }
  for (std::size_t i = 0; i < state_.word_topic.size(); ++i) {
    word_topic_sum_[i] += static_cast<std::uint64_t>(state_.word_topic[i]);
  }
  ++accumulated_;
}

TopicModel GibbsSampler::estimate() const {
  const int K = hyper_.num_topics;
  const std::size_t V = static_cast<std::size_t>(state_.vocab_size);
  const std::size_t D = tc_.docs.size();
  const double samples = accumulated_ > 0 ? accumulated_ : 1.0;
  auto doc_topic = [&](std::size_t i) {
    return accumulated_ > 0 ? static_cast<double>(doc_topic_sum_[i]) / samples
                            : static_cast<double>(state_.doc_topic[i]);
  };
  auto word_topic = [&](std::size_t i) {
    return accumulated_ > 0 ? static_cast<double>(word_topic_sum_[i]) / samples
                            : static_cast<double>(state_.word_topic[i]);
  };

  TopicModel model;
  model.hyper = hyper_;
  model.vocabulary = tc_.vocabulary.terms;
  model.phi.resize(K, static_cast<Eigen::Index>(V));
  model.theta.resize(static_cast<Eigen::Index>(D), K);

  std::vector<double> topic_mass(K, 0.0);
  for (std::size_t w = 0; w < V; ++w) {
    for (int k = 0; k < K; ++k) topic_mass[k] += word_topic(w * K + k);
  }
  const double vbeta = static_cast<double>(V) * hyper_.beta;
  for (int k = 0; k < K; ++k) {
    const double denom = topic_mass[k] + vbeta;
    for (std::size_t w = 0; w < V; ++w) {
      model.phi(k, static_cast<Eigen::Index>(w)) = (word_topic(w * K + k) + hyper_.beta) / denom;
    }
  }
  const double kalpha = K * hyper_.alpha;
  for (std::size_t d = 0; d < D; ++d) {
    const double denom = static_cast<double>(tc_.docs[d].size()) + kalpha;
    for (int k = 0; k < K; ++k) {
      model.theta(static_cast<Eigen::Index>(d), k) = (doc_topic(d * K + k) + hyper_.alpha) / denom;
    }
  }
  return model;
}

TopicModel train(const TokenizedCorpus& tc, const Hyperparams& hyper,
                 const SweepObserver& observer) {
  GibbsSampler sampler(tc, hyper);
  for (int sweep = 1; sweep <= hyper.iterations; ++sweep) {
    sampler.sweep();
    if (sweep > hyper.burn_in) sampler.accumulate();
    if (observer) observer(sweep, sampler);
  }
  return sampler.estimate();
}

std::vector<double> doc_vector(const TopicModel& model, int k) {
  if (k < 0 || k >= model.num_topics()) {
    throw Error("topic index " + std::to_string(k) + " out of range");
  }
  std::vector<double> v(model.num_docs());
  for (std::size_t d = 0; d < v.size(); ++d) v[d] = model.theta(static_cast<Eigen::Index>(d), k);
  return v;
}

void to_json(json& j, const Hyperparams& h) {
  j = json{{"num_topics", h.num_topics}, {"alpha", h.alpha},         {"beta", h.beta},
           {"iterations", h.iterations}, {"burn_in", h.burn_in},     {"seed", h.seed}};
}

void from_json(const json& j, Hyperparams& h) {
  h.num_topics = j.at("num_topics").get<int>();
  h.alpha = j.at("alpha").get<double>();
  h.beta = j.at("beta").get<double>();
  h.iterations = j.at("iterations").get<int>();
  h.burn_in = j.at("burn_in").get<int>();
  h.seed = j.at("seed").get<std::uint64_t>();
}

namespace {

json matrix_rows(const RowMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  return rows;
}

RowMatrix matrix_from_rows(const json& rows, Eigen::Index cols, const char* name) {
  RowMatrix m(static_cast<Eigen::Index>(rows.size()), cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(std::string("model ") + name + " row " + std::to_string(r) +
                  " has the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

}  // namespace

void to_json(json& j, const TopicModel& model) {
  j = json{{"hyper", model.hyper},
           {"vocabulary", model.vocabulary},
           {"doc_ids", model.doc_ids},
           {"phi", matrix_rows(model.phi)},
           {"theta", matrix_rows(model.theta)}};
}

void from_json(const json& j, TopicModel& model) {
  model.hyper = j.at("hyper").get<Hyperparams>();
  model.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
  model.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
  model.phi = matrix_from_rows(j.at("phi"), static_cast<Eigen::Index>(model.vocabulary.size()), "phi");
  model.theta = matrix_from_rows(j.at("theta"), model.hyper.num_topics, "theta");
  if (model.phi.rows() != model.hyper.num_topics) throw Error("model phi has the wrong row count");
  if (model.theta.rows() != static_cast<Eigen::Index>(model.doc_ids.size())) {
    throw Error("model theta has the wrong row count");
  }
}

}  // namespace atlas
