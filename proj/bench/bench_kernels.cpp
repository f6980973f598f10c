// Serial reference vs OpenMP kernels on a planted corpus of configurable size.

#include <benchmark/benchmark.h>

#include "topicmine/analysis.hpp"
#include "topicmine/kernels.hpp"
#include "topicmine/lda.hpp"
#include "topicmine/planted.hpp"

namespace {

using namespace topicmine;

struct Fixture {
  std::vector<RawPost> posts;
  Corpus corpus;
  lda::LdaConfig config;
  lda::CountTables tables;
  RealMatrix theta;
  RealMatrix phi;
  std::vector<std::size_t> all_docs;
  std::vector<std::uint32_t> category_of;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture f;
    planted::PlantedSpec spec;
    spec.topics = 20;
    spec.documents = 50000;
    spec.tokens_per_doc = 12;
    f.posts = planted::generate(spec).posts;
    f.corpus = build_corpus(f.posts, TokenizerConfig::english());
    f.config = lda::LdaConfig::with_topics(20);
    f.config.sweeps = 2;
    f.config.burn_in = 0;
    lda::GibbsSampler sampler(f.corpus, f.config);
    sampler.sweep();
    f.tables = sampler.tables();
    f.theta = lda::theta_of(f.tables, f.config);
    f.phi = lda::phi_of(f.tables, f.config);
    for (std::size_t d = 0; d < f.corpus.documents.size(); ++d) f.all_docs.push_back(d);
    f.category_of = analysis::paper_label_map().category_indices();
    return f;
  }();
  return f;
}

template <bool Parallel>
void BM_Theta(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto m = Parallel ? kernels::parallel::smoothed_rows(f.tables.doc_topic, f.tables.doc_length, f.config.alpha)
                      : kernels::serial::smoothed_rows(f.tables.doc_topic, f.tables.doc_length, f.config.alpha);
    benchmark::DoNotOptimize(m.data().data());
  }
}

template <bool Parallel>
void BM_LogLikelihood(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    double ll = Parallel ? kernels::parallel::log_likelihood(f.theta, f.phi, f.corpus.documents)
                         : kernels::serial::log_likelihood(f.theta, f.phi, f.corpus.documents);
    benchmark::DoNotOptimize(ll);
  }
}

template <bool Parallel>
void BM_ColumnSums(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto s = Parallel ? kernels::parallel::column_sums(f.theta) : kernels::serial::column_sums(f.theta);
    benchmark::DoNotOptimize(s.data());
  }
}

template <bool Parallel>
void BM_CategoryMasses(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto m = Parallel ? kernels::parallel::category_masses(f.theta, f.all_docs, f.category_of, 5)
                      : kernels::serial::category_masses(f.theta, f.all_docs, f.category_of, 5);
    benchmark::DoNotOptimize(m.data());
  }
}

template <bool Parallel>
void BM_Tokenize(benchmark::State& state) {
  const auto& f = fixture();
  const auto config = TokenizerConfig::english();
  for (auto _ : state) {
    auto t = Parallel ? kernels::parallel::tokenize_all(f.posts, config) : kernels::serial::tokenize_all(f.posts, config);
    benchmark::DoNotOptimize(t.data());
  }
}

void BM_GibbsSweep(benchmark::State& state) {
  const auto& f = fixture();
  lda::GibbsSampler sampler(f.corpus, f.config);
  for (auto _ : state) sampler.sweep();
}

}  // namespace

BENCHMARK(BM_Theta<false>)->Name("theta/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Theta<true>)->Name("theta/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LogLikelihood<false>)->Name("log_likelihood/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LogLikelihood<true>)->Name("log_likelihood/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ColumnSums<false>)->Name("topic_weights/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ColumnSums<true>)->Name("topic_weights/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CategoryMasses<false>)->Name("category_masses/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CategoryMasses<true>)->Name("category_masses/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Tokenize<false>)->Name("tokenize/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Tokenize<true>)->Name("tokenize/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GibbsSweep)->Name("gibbs_sweep/serial")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
