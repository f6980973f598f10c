#include "topicmine/lda.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "topicmine/error.hpp"
#include "topicmine/format.hpp"
#include "topicmine/kernels.hpp"

namespace topicmine::lda {

void LdaConfig::validate() const {
  if (topics < 1) throw ValidationError("number of topics must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be > 0");
  if (sweeps < 1) throw ValidationError("sweeps must be >= 1");
  if (burn_in >= sweeps) throw ValidationError("burn_in must be < sweeps");
}

LdaConfig LdaConfig::with_topics(std::size_t k) {
  LdaConfig c;
  c.topics = k;
  c.alpha = k == 0 ? 0.0 : 50.0 / static_cast<double>(k);
  return c;
}

CountTables count_assignments(const Corpus& corpus, const Assignments& z, std::size_t topics) {
  const std::size_t docs = corpus.documents.size();
  const std::size_t vocab = corpus.vocabulary.size();
  if (z.size() != docs) throw ValidationError("assignments do not match corpus");
  CountTables t{Matrix<Count>(docs, topics), Matrix<Count>(topics, vocab), std::vector<Count>(topics, 0),
                std::vector<Count>(docs, 0)};
  for (std::size_t d = 0; d < docs; ++d) {
    const auto& words = corpus.documents[d].word_ids;
    if (z[d].size() != words.size()) throw ValidationError("assignments do not match document length");
    t.doc_length[d] = static_cast<Count>(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      const std::uint32_t k = z[d][i];
      if (k >= topics) throw ValidationError("assignment out of range");
      if (words[i] >= vocab) throw ValidationError("word id out of range");
      ++t.doc_topic(d, k);
      ++t.topic_word(k, words[i]);
      ++t.topic_total[k];
    }
  }
  return t;
}

std::string check_tables(const CountTables& t) {
  const std::size_t docs = t.num_docs();
  const std::size_t topics = t.num_topics();
  if (t.topic_word.rows() != topics || t.topic_total.size() != topics || t.doc_length.size() != docs)
    return "table dimensions disagree";

  std::int64_t tokens = 0;
  for (std::size_t d = 0; d < docs; ++d) {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < topics; ++k) {
      if (t.doc_topic(d, k) < 0) return "negative doc_topic entry";
      s += t.doc_topic(d, k);
    }
    if (s != t.doc_length[d]) return "doc_topic row " + std::to_string(d) + " does not sum to doc length";
    tokens += t.doc_length[d];
  }
  std::int64_t topic_sum = 0;
  for (std::size_t k = 0; k < topics; ++k) {
    std::int64_t s = 0;
    for (std::size_t w = 0; w < t.vocab_size(); ++w) {
      if (t.topic_word(k, w) < 0) return "negative topic_word entry";
      s += t.topic_word(k, w);
    }
    if (t.topic_total[k] < 0) return "negative topic total";
    if (s != t.topic_total[k]) return "topic_word row " + std::to_string(k) + " does not sum to topic total";
    topic_sum += t.topic_total[k];
  }
  if (topic_sum != tokens) return "topic totals do not sum to token count";
  for (std::size_t k = 0; k < topics; ++k) {
    std::int64_t s = 0;
    for (std::size_t d = 0; d < docs; ++d) s += t.doc_topic(d, k);
    if (s != t.topic_total[k]) return "doc_topic column " + std::to_string(k) + " does not sum to topic total";
  }
  return {};
}

namespace {

// Unnormalized conditional weights into `out`; returns their sum.
double conditional_weights(const CountTables& t, std::size_t doc, WordId word, double alpha, double beta,
                           double vocab_beta, std::span<double> out) {
  double total = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double w = (static_cast<double>(t.doc_topic(doc, k)) + alpha) *
                     (static_cast<double>(t.topic_word(k, word)) + beta) /
                     (static_cast<double>(t.topic_total[k]) + vocab_beta);
    out[k] = w;
    total += w;
  }
  return total;
}

}  // namespace

std::vector<double> full_conditional(const CountTables& excluded, std::size_t doc, WordId word,
                                     const LdaConfig& config) {
  std::vector<double> p(config.topics);
  const double vb = static_cast<double>(excluded.vocab_size()) * config.beta;
  const double total = conditional_weights(excluded, doc, word, config.alpha, config.beta, vb, p);
  for (double& v : p) v /= total;
  return p;
}

RealMatrix theta_of(const CountTables& tables, const LdaConfig& config) {
  return kernels::parallel::smoothed_rows(tables.doc_topic, tables.doc_length, config.alpha);
}

RealMatrix phi_of(const CountTables& tables, const LdaConfig& config) {
  return kernels::parallel::smoothed_rows(tables.topic_word, tables.topic_total, config.beta);
}

double log_likelihood(const RealMatrix& theta, const RealMatrix& phi, const Corpus& corpus) {
  return kernels::parallel::log_likelihood(theta, phi, corpus.documents);
}

// ---------------------------------------------------------------- sampler

GibbsSampler::GibbsSampler(const Corpus& corpus, const LdaConfig& config)
    : corpus_(corpus), config_(config), rng_(config.seed) {
  config_.validate();
  const std::size_t topics = config_.topics;
  z_.resize(corpus.documents.size());
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    z_[d].resize(corpus.documents[d].word_ids.size());
    for (auto& k : z_[d]) k = static_cast<std::uint32_t>(rng_.uniform_below(topics));
  }
  tables_ = count_assignments(corpus, z_, topics);
  weights_.resize(topics);
  scratch_.resize(topics);
}

void GibbsSampler::sweep() {
  const std::size_t topics = config_.topics;
  const double alpha = config_.alpha;
  const double beta = config_.beta;
  const double vocab_beta = static_cast<double>(corpus_.vocabulary.size()) * beta;

  for (std::size_t d = 0; d < corpus_.documents.size(); ++d) {
    const auto& words = corpus_.documents[d].word_ids;
    auto& zd = z_[d];
    for (std::size_t i = 0; i < words.size(); ++i) {
      const WordId w = words[i];
      const std::uint32_t old = zd[i];
      --tables_.doc_topic(d, old);
      --tables_.topic_word(old, w);
      --tables_.topic_total[old];

      const double total = conditional_weights(tables_, d, w, alpha, beta, vocab_beta, weights_);
      if (probe_) {
        for (std::size_t k = 0; k < topics; ++k) scratch_[k] = weights_[k] / total;
        probe_(d, i, scratch_);
      }

      const double u = rng_.uniform01() * total;
      double acc = 0.0;
      std::size_t chosen = topics - 1;
      for (std::size_t k = 0; k < topics; ++k) {
        acc += weights_[k];
        if (u < acc) {
          chosen = k;
          break;
        }
      }

      zd[i] = static_cast<std::uint32_t>(chosen);
      ++tables_.doc_topic(d, chosen);
      ++tables_.topic_word(chosen, w);
      ++tables_.topic_total[chosen];
    }
  }
  ++sweeps_done_;
}

// ---------------------------------------------------------------- model

LdaModel::LdaModel(LdaConfig config, Vocabulary vocabulary, CountTables tables, Assignments z)
    : config_(std::move(config)),
      vocabulary_(std::move(vocabulary)),
      tables_(std::move(tables)),
      z_(std::move(z)),
      theta_(theta_of(tables_, config_)),
      phi_(phi_of(tables_, config_)) {}

LdaModel fit(const Corpus& corpus, const LdaConfig& config, FitReport* report, const SweepObserver& observer) {
  config.validate();
  if (corpus.documents.empty() || corpus.num_tokens() == 0) throw ValidationError("cannot fit an empty corpus");

  FitReport r;
  r.documents = corpus.documents.size();
  r.tokens = corpus.num_tokens();
  r.topics_exceed_tokens = config.topics > r.tokens;
  r.topics_exceed_vocab = config.topics > corpus.vocabulary.size();

  GibbsSampler sampler(corpus, config);
  for (std::size_t s = 1; s <= config.sweeps; ++s) {
    sampler.sweep();
    if (observer.after_sweep) observer.after_sweep(s, sampler);
    if (report && config.likelihood_every > 0 && (s % config.likelihood_every == 0 || s == config.sweeps)) {
      const auto theta = theta_of(sampler.tables(), config);
      const auto phi = phi_of(sampler.tables(), config);
      r.trace.push_back({s, log_likelihood(theta, phi, corpus)});
    }
  }
  if (report) *report = std::move(r);
  return LdaModel(config, corpus.vocabulary, sampler.tables(), sampler.assignments());
}

double log_likelihood(const LdaModel& model, const Corpus& corpus) {
  return log_likelihood(model.theta(), model.phi(), corpus);
}

void write_fit_report(std::ostream& out, const FitReport& report) {
  out << "sweep,log_likelihood\n";
  for (const auto& p : report.trace) out << p.sweep << ',' << format_fixed(p.log_likelihood, 6) << '\n';
}

std::vector<WordScore> top_words(const RealMatrix& phi, const Vocabulary& vocabulary, std::size_t topic,
                                 std::size_t n) {
  if (topic >= phi.rows())
    throw ValidationError("topic " + std::to_string(topic) + " out of range (K=" + std::to_string(phi.rows()) + ")");
  const auto row = phi.row(topic);
  std::vector<WordId> ids(row.size());
  for (std::size_t w = 0; w < ids.size(); ++w) ids[w] = static_cast<WordId>(w);
  const std::size_t take = std::min(n, ids.size());
  auto better = [&](WordId a, WordId b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return vocabulary.token_of(a) < vocabulary.token_of(b);
  };
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(take), ids.end(), better);
  std::vector<WordScore> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({vocabulary.token_of(ids[i]), row[ids[i]]});
  return out;
}

std::vector<WordScore> top_words(const LdaModel& model, std::size_t topic, std::size_t n) {
  return top_words(model.phi(), model.vocabulary(), topic, n);
}

}  // namespace topicmine::lda
