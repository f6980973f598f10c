#include <doctest.h>

#include <omp.h>

#include "test_support.hpp"
#include "topicmine/analysis.hpp"
#include "topicmine/kernels.hpp"
#include "topicmine/lda.hpp"

using namespace topicmine;

namespace {

struct ThreadCount {
  explicit ThreadCount(int n) : saved_(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved_); }
  int saved_;
};

}  // namespace

TEST_CASE("OpenMP kernels are bit-identical to the serial reference") {
  const Corpus corpus = testing::random_corpus(3000, 15, 400, 17);
  auto config = lda::LdaConfig::with_topics(20);
  config.sweeps = 2;
  config.burn_in = 0;
  lda::GibbsSampler sampler(corpus, config);
  sampler.sweep();
  const auto& t = sampler.tables();

  const auto theta_ref = kernels::serial::smoothed_rows(t.doc_topic, t.doc_length, config.alpha);
  const auto phi_ref = kernels::serial::smoothed_rows(t.topic_word, t.topic_total, config.beta);
  const double ll_ref = kernels::serial::log_likelihood(theta_ref, phi_ref, corpus.documents);
  const auto cols_ref = kernels::serial::column_sums(theta_ref);
  std::vector<std::size_t> docs;
  for (std::size_t d = 0; d < corpus.documents.size(); d += 3) docs.push_back(d);
  const auto cats = analysis::paper_label_map().category_indices();
  const auto masses_ref = kernels::serial::category_masses(theta_ref, docs, cats, 5);

  for (int threads : {1, 2, 3, 8}) {
    CAPTURE(threads);
    ThreadCount tc(threads);
    CHECK(kernels::parallel::smoothed_rows(t.doc_topic, t.doc_length, config.alpha) == theta_ref);
    CHECK(kernels::parallel::smoothed_rows(t.topic_word, t.topic_total, config.beta) == phi_ref);
    CHECK(kernels::parallel::log_likelihood(theta_ref, phi_ref, corpus.documents) == ll_ref);
    CHECK(kernels::parallel::column_sums(theta_ref) == cols_ref);
    CHECK(kernels::parallel::category_masses(theta_ref, docs, cats, 5) == masses_ref);
  }
}

TEST_CASE("CompensatedSum keeps small terms") {
  kernels::CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-6));

  // Sum of 10^5 copies of 0.1 stays within one ulp-scale of the exact value.
  kernels::CompensatedSum t;
  for (int i = 0; i < 100000; ++i) t.add(0.1);
  CHECK(std::abs(t.value() - 10000.0) <= 1e-10);
}
