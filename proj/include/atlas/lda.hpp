#pragma once

#include "atlas/common.hpp"
#include "atlas/textprep.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace atlas {

struct Hyperparams {
  int num_topics = 2;
  double alpha = 25.0;
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 500;
  std::uint64_t seed = 1;

  // alpha = 50/K, beta = 0.01, 1000 sweeps with 500 burn-in.
  static Hyperparams defaults_for(int num_topics);

  // Throws atlas::Error on K < 2, non-positive priors or burn_in >= iterations.
  void validate() const;

  bool operator==(const Hyperparams&) const = default;
};

/// Seedable, portable source of randomness for the sampler. The engine is
/// std::mt19937_64, whose output sequence is fixed by the standard; doubles
/// are built from the top 53 bits so results do not depend on the library's
/// distribution implementations.
class SamplerRng {
 public:
  explicit SamplerRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  int below(int n) { return static_cast<int>(uniform() * n); }

 private:
  std::mt19937_64 engine_;
};

/// Count statistics of the collapsed sampler. Topic-word counts are stored
/// word-major so the per-token inner loop walks contiguous memory.
struct SamplerState {
  int num_topics = 0;
  int vocab_size = 0;
  std::vector<std::vector<int>> z;        // per document, per token
  std::vector<std::int32_t> doc_topic;    // D x K
  std::vector<std::int32_t> word_topic;   // V x K
  std::vector<std::int64_t> topic_total;  // K

  std::int32_t n_dk(std::size_t d, int k) const { return doc_topic[d * num_topics + k]; }
  std::int32_t n_kw(int k, std::size_t w) const { return word_topic[w * num_topics + k]; }

  /// Builds the counts from explicit assignments.
  static SamplerState from_assignments(const TokenizedCorpus& tc, int num_topics,
                                       std::vector<std::vector<int>> z);

  /// True when every count equals the one recomputed from z and the
  /// marginal identities hold exactly.
  bool conserves_counts(const TokenizedCorpus& tc) const;
};

/// Collapsed joint log p(w, z) under symmetric Dirichlet priors.
double log_likelihood(const SamplerState& state, double alpha, double beta);

struct TopicModel {
  Hyperparams hyper;
  std::vector<std::string> vocabulary;
  std::vector<std::string> doc_ids;
  RowMatrix phi;    // K x V
  RowMatrix theta;  // D x K

  int num_topics() const { return static_cast<int>(phi.rows()); }
  std::size_t num_docs() const { return static_cast<std::size_t>(theta.rows()); }
};

/// Sequential collapsed Gibbs sampler over a tokenized corpus.
class GibbsSampler {
 public:
  /// Draws the initial assignments uniformly from hyper.seed.
  GibbsSampler(const TokenizedCorpus& tc, const Hyperparams& hyper);
  /// Starts from explicit assignments; the RNG is still seeded from hyper.seed.
  GibbsSampler(const TokenizedCorpus& tc, const Hyperparams& hyper,
               std::vector<std::vector<int>> initial_z);

  /// One pass over every token in document order.
  void sweep();

  /// Unnormalized conditional for token `i` of document `d`, with that
  /// token's own assignment excluded from the counts.
  std::vector<double> conditional(std::size_t d, std::size_t i) const;

  /// Adds the current counts to the running estimate.
  void accumulate();

  /// Point estimate from the accumulated sweeps, or from the current counts
  /// when nothing has been accumulated.
  TopicModel estimate() const;

  const SamplerState& state() const { return state_; }
  int sweeps_done() const { return sweeps_; }

 private:
  void reset_denominators();

  const TokenizedCorpus& tc_;
  Hyperparams hyper_;
  SamplerState state_;
  SamplerRng rng_;
  std::vector<double> inv_denominator_;  // 1 / (n_k + V beta)
  std::vector<double> cumulative_;
  std::vector<std::uint64_t> doc_topic_sum_;
  std::vector<std::uint64_t> word_topic_sum_;
  int accumulated_ = 0;
  int sweeps_ = 0;
};

/// Called after each sweep with the 1-based sweep number.
using SweepObserver = std::function<void(int sweep, const GibbsSampler&)>;

/// Runs hyper.iterations sweeps and estimates phi and theta by averaging
/// the counts over every sweep after burn-in. Identical inputs produce
/// bit-identical output.
TopicModel train(const TokenizedCorpus& tc, const Hyperparams& hyper,
                 const SweepObserver& observer = {});

/// Column k of theta: the topic's weight in every document.
std::vector<double> doc_vector(const TopicModel& model, int k);

void to_json(nlohmann::json& j, const Hyperparams& hyper);
void from_json(const nlohmann::json& j, Hyperparams& hyper);
void to_json(nlohmann::json& j, const TopicModel& model);
void from_json(const nlohmann::json& j, TopicModel& model);

}  // namespace atlas
