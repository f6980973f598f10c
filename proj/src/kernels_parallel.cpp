#include <cmath>

#include <omp.h>

#include "topicmine/kernels.hpp"

namespace topicmine::kernels {

int max_threads() { return omp_get_max_threads(); }

namespace parallel {

namespace {
// Below this many rows the fork/join overhead dominates.
constexpr std::ptrdiff_t kMinParallelRows = 256;
}  // namespace

RealMatrix smoothed_rows(const Matrix<Count>& counts, std::span<const Count> row_totals, double prior) {
  const auto rows = static_cast<std::ptrdiff_t>(counts.rows());
  const std::size_t cols = counts.cols();
  RealMatrix out(counts.rows(), cols);
  const double col_prior = static_cast<double>(cols) * prior;
#pragma omp parallel for schedule(static) if (rows >= kMinParallelRows)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    const double denom = static_cast<double>(row_totals[ur]) + col_prior;
    for (std::size_t c = 0; c < cols; ++c) out(ur, c) = (static_cast<double>(counts(ur, c)) + prior) / denom;
  }
  return out;
}

double log_likelihood(const RealMatrix& theta, const RealMatrix& phi, std::span<const Document> docs) {
  const std::size_t topics = theta.cols();
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
  std::vector<double> per_doc(docs.size());
#pragma omp parallel for schedule(dynamic, 64) if (n >= kMinParallelRows)
  for (std::ptrdiff_t d = 0; d < n; ++d) {
    const auto ud = static_cast<std::size_t>(d);
    CompensatedSum doc_sum;
    for (WordId w : docs[ud].word_ids) {
      double p = 0.0;
      for (std::size_t k = 0; k < topics; ++k) p += theta(ud, k) * phi(k, w);
      doc_sum.add(std::log(p));
    }
    per_doc[ud] = doc_sum.value();
  }
  CompensatedSum total;
  for (double v : per_doc) total.add(v);
  return total.value();
}

std::vector<double> column_sums(const RealMatrix& m) {
  const auto cols = static_cast<std::ptrdiff_t>(m.cols());
  std::vector<double> out(m.cols());
#pragma omp parallel for schedule(static) if (m.rows() * m.cols() >= 4096)
  for (std::ptrdiff_t c = 0; c < cols; ++c) {
    CompensatedSum s;
    for (std::size_t r = 0; r < m.rows(); ++r) s.add(m(r, static_cast<std::size_t>(c)));
    out[static_cast<std::size_t>(c)] = s.value();
  }
  return out;
}

std::vector<double> category_masses(const RealMatrix& theta, std::span<const std::size_t> docs,
                                    std::span<const std::uint32_t> category_of, std::size_t categories) {
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
  std::vector<double> rows(docs.size() * categories, 0.0);
#pragma omp parallel for schedule(static) if (n >= kMinParallelRows)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    double* row = rows.data() + ui * categories;
    for (std::size_t k = 0; k < theta.cols(); ++k) row[category_of[k]] += theta(docs[ui], k);
  }
  std::vector<CompensatedSum> sums(categories);
  for (std::size_t i = 0; i < docs.size(); ++i)
    for (std::size_t c = 0; c < categories; ++c) sums[c].add(rows[i * categories + c]);
  std::vector<double> out(categories);
  for (std::size_t c = 0; c < categories; ++c) out[c] = sums[c].value();
  return out;
}

std::vector<std::vector<std::string>> tokenize_all(std::span<const RawPost> posts, const TokenizerConfig& config) {
  const auto n = static_cast<std::ptrdiff_t>(posts.size());
  std::vector<std::vector<std::string>> out(posts.size());
#pragma omp parallel for schedule(dynamic, 128) if (n >= kMinParallelRows)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    out[ui] = tokenize(posts[ui].text, config);
  }
  return out;
}

}  // namespace parallel
}  // namespace topicmine::kernels
