#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "topicmine/corpus.hpp"
#include "topicmine/matrix.hpp"
#include "topicmine/rng.hpp"

namespace topicmine::lda {

struct LdaConfig {
  std::size_t topics = 20;
  double alpha = 50.0 / 20.0;
  double beta = 0.01;
  std::size_t sweeps = 1000;
  std::size_t burn_in = 200;
  std::uint64_t seed = 42;
  std::size_t top_n = 10;
  // Record the log-likelihood every this many sweeps (0 disables; the last
  // sweep is always recorded when nonzero).
  std::size_t likelihood_every = 10;

  void validate() const;

  // Default config for K topics, with alpha = 50/K.
  static LdaConfig with_topics(std::size_t k);
};

using Count = std::int32_t;

// Sufficient statistics of the collapsed sampler.
struct CountTables {
  Matrix<Count> doc_topic;    // D x K
  Matrix<Count> topic_word;   // K x V
  std::vector<Count> topic_total;  // K
  std::vector<Count> doc_length;   // D

  std::size_t num_docs() const { return doc_topic.rows(); }
  std::size_t num_topics() const { return doc_topic.cols(); }
  std::size_t vocab_size() const { return topic_word.cols(); }

  bool operator==(const CountTables&) const = default;
};

// z[d][i] is the topic of token i in document d.
using Assignments = std::vector<std::vector<std::uint32_t>>;

// Recounts tables from scratch.
CountTables count_assignments(const Corpus& corpus, const Assignments& z, std::size_t topics);

// Empty string when consistent; otherwise a description of the first
// violated identity (row sums, column sums, totals, non-negativity).
std::string check_tables(const CountTables& tables);

// Normalized full conditional of a token of `word` in document `doc`, given
// tables from which that token has already been removed:
//   p[k] ∝ (n_dk + alpha) (n_kw + beta) / (n_k + V beta)
std::vector<double> full_conditional(const CountTables& excluded, std::size_t doc, WordId word,
                                     const LdaConfig& config);

// theta[d][k] = (n_dk + alpha) / (n_d + K alpha)
RealMatrix theta_of(const CountTables& tables, const LdaConfig& config);
// phi[k][w] = (n_kw + beta) / (n_k + V beta)
RealMatrix phi_of(const CountTables& tables, const LdaConfig& config);

// Sum over tokens of log sum_k theta[d][k] phi[k][w].
double log_likelihood(const RealMatrix& theta, const RealMatrix& phi, const Corpus& corpus);

// Sequential collapsed Gibbs sampler. Tokens are visited in document order,
// then position order; initial topics are uniform draws from the seeded Rng.
class GibbsSampler {
 public:
  // Called with the normalized distribution a token is about to be drawn
  // from, while that token is still excluded from the tables.
  using Probe = std::function<void(std::size_t doc, std::size_t pos, std::span<const double> p)>;

  GibbsSampler(const Corpus& corpus, const LdaConfig& config);

  void sweep();
  void set_probe(Probe probe) { probe_ = std::move(probe); }

  const CountTables& tables() const { return tables_; }
  const Assignments& assignments() const { return z_; }
  const LdaConfig& config() const { return config_; }
  std::size_t sweeps_done() const { return sweeps_done_; }

 private:
  const Corpus& corpus_;
  LdaConfig config_;
  Rng rng_;
  CountTables tables_;
  Assignments z_;
  std::vector<double> weights_;
  std::vector<double> scratch_;
  Probe probe_;
  std::size_t sweeps_done_ = 0;
};

struct LikelihoodPoint {
  std::size_t sweep;  // 1-based
  double log_likelihood;
};

struct FitReport {
  std::vector<LikelihoodPoint> trace;
  std::size_t documents = 0;
  std::size_t tokens = 0;
  bool topics_exceed_tokens = false;
  bool topics_exceed_vocab = false;
};

// CSV `sweep,log_likelihood`.
void write_fit_report(std::ostream& out, const FitReport& report);

class LdaModel {
 public:
  LdaModel(LdaConfig config, Vocabulary vocabulary, CountTables tables, Assignments z);

  const LdaConfig& config() const { return config_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  const CountTables& tables() const { return tables_; }
  const Assignments& assignments() const { return z_; }
  const RealMatrix& theta() const { return theta_; }
  const RealMatrix& phi() const { return phi_; }

  std::size_t num_topics() const { return config_.topics; }

 private:
  LdaConfig config_;
  Vocabulary vocabulary_;
  CountTables tables_;
  Assignments z_;
  RealMatrix theta_;
  RealMatrix phi_;
};

struct SweepObserver {
  // Called after every sweep (1-based index). Optional.
  std::function<void(std::size_t sweep, const GibbsSampler&)> after_sweep;
};

// Deterministic given (corpus, config). Throws ValidationError on an empty
// corpus or invalid config.
LdaModel fit(const Corpus& corpus, const LdaConfig& config, FitReport* report = nullptr,
             const SweepObserver& observer = {});

double log_likelihood(const LdaModel& model, const Corpus& corpus);

struct WordScore {
  std::string token;
  double probability;
};

// The n tokens with the largest phi[k][.], ties broken lexicographically.
// n is clamped to V.
std::vector<WordScore> top_words(const LdaModel& model, std::size_t topic, std::size_t n);
std::vector<WordScore> top_words(const RealMatrix& phi, const Vocabulary& vocabulary,
                                 std::size_t topic, std::size_t n);

}  // namespace topicmine::lda
