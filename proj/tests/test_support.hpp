#pragma once

// Shared fixtures and independent oracles for the test suites. Nothing here
// calls into the sampler or estimator code it is used to check.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "topicmine/corpus.hpp"
#include "topicmine/harvest.hpp"
#include "topicmine/lda.hpp"
#include "topicmine/post.hpp"

namespace topicmine::testing {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("topicmine-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Corpus directly from word-id lists; vocabulary tokens are "t0".."t{V-1}".
inline Corpus make_corpus(const std::vector<std::vector<WordId>>& docs, std::size_t vocab,
                          const std::vector<std::string>& groups = {}) {
  Corpus c;
  for (std::size_t w = 0; w < vocab; ++w) c.vocabulary.add("t" + std::to_string(w));
  for (std::size_t d = 0; d < docs.size(); ++d) {
    Document doc;
    doc.post_id = "d" + std::to_string(d);
    doc.account = "acct";
    doc.group = groups.empty() ? "G" : groups[d];
    doc.word_ids = docs[d];
    c.documents.push_back(std::move(doc));
  }
  c.index_groups();
  return c;
}

// Random corpus with docs of 1..max_len tokens drawn uniformly from V words.
inline Corpus random_corpus(std::size_t docs, std::size_t max_len, std::size_t vocab, unsigned seed) {
  std::mt19937 gen(seed);
  std::vector<std::vector<WordId>> lists(docs);
  for (auto& l : lists) {
    const std::size_t len = 1 + gen() % max_len;
    for (std::size_t i = 0; i < len; ++i) l.push_back(static_cast<WordId>(gen() % vocab));
  }
  return make_corpus(lists, vocab);
}

// Brute force: recount every table entry needed from the raw assignments,
// skipping position (doc, pos), and evaluate
//   (n_dk + a)(n_kw + b) / (n_k + V b), normalized.
inline std::vector<double> brute_force_conditional(const Corpus& corpus, const lda::Assignments& z,
                                                   std::size_t doc, std::size_t pos, std::size_t topics,
                                                   double alpha, double beta) {
  const WordId word = corpus.documents[doc].word_ids[pos];
  const double vocab = static_cast<double>(corpus.vocabulary.size());
  std::vector<double> p(topics);
  double total = 0.0;
  for (std::size_t k = 0; k < topics; ++k) {
    long n_dk = 0, n_kw = 0, n_k = 0;
    for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
      for (std::size_t i = 0; i < corpus.documents[d].word_ids.size(); ++i) {
        if (d == doc && i == pos) continue;
        if (z[d][i] != k) continue;
        ++n_k;
        if (d == doc) ++n_dk;
        if (corpus.documents[d].word_ids[i] == word) ++n_kw;
      }
    }
    p[k] = (static_cast<double>(n_dk) + alpha) * (static_cast<double>(n_kw) + beta) /
           (static_cast<double>(n_k) + vocab * beta);
    total += p[k];
  }
  for (double& v : p) v /= total;
  return p;
}

// Direct re-summation of sum_d sum_i log sum_k theta[d][k] phi[k][w] with
// estimators recomputed from a recount of the assignments, in long double.
inline long double brute_force_log_likelihood(const Corpus& corpus, const lda::Assignments& z, std::size_t topics,
                                              double alpha, double beta) {
  const std::size_t V = corpus.vocabulary.size();
  std::vector<std::vector<long>> n_kw(topics, std::vector<long>(V));
  std::vector<long> n_k(topics);
  for (std::size_t d = 0; d < corpus.documents.size(); ++d)
    for (std::size_t i = 0; i < z[d].size(); ++i) {
      ++n_kw[z[d][i]][corpus.documents[d].word_ids[i]];
      ++n_k[z[d][i]];
    }
  long double total = 0.0L;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    std::vector<long> n_dk(topics);
    for (auto k : z[d]) ++n_dk[k];
    const long double nd = static_cast<long double>(z[d].size());
    for (WordId w : corpus.documents[d].word_ids) {
      long double p = 0.0L;
      for (std::size_t k = 0; k < topics; ++k) {
        const long double th = (n_dk[k] + static_cast<long double>(alpha)) / (nd + topics * static_cast<long double>(alpha));
        const long double ph = (n_kw[k][w] + static_cast<long double>(beta)) / (n_k[k] + V * static_cast<long double>(beta));
        p += th * ph;
      }
      total += std::log(p);
    }
  }
  return total;
}

// Per-state post counts of the reference study's collection table, spread
// over the shipped 48-account manifest (every account posts at least once).
struct StateCount {
  const char* group;
  std::uint64_t posts;
};
inline constexpr StateCount kTable2Counts[] = {
    {"AK", 26739}, {"CA", 65153}, {"HI", 1739}, {"OR", 29166}, {"WA", 24259}};

inline std::filesystem::path shipped_manifest() {
  return std::filesystem::path(TOPICMINE_DATA_DIR) / "fixtures" / "west_coast_manifest.csv";
}

inline std::vector<RawPost> table2_posts() {
  const auto manifest = harvest::load_manifest(shipped_manifest());
  std::vector<RawPost> posts;
  for (const auto& [group, count] : kTable2Counts) {
    std::vector<const harvest::AccountEntry*> accts;
    for (const auto& e : manifest)
      if (e.group == group) accts.push_back(&e);
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto* e = accts[i % accts.size()];
      posts.push_back(RawPost{std::string(group) + "-" + std::to_string(i), e->handle, e->group,
                              "post " + std::to_string(i), {}});
    }
  }
  return posts;
}

}  // namespace topicmine::testing
