#include <algorithm>
#include <cmath>

#include "topicmine/kernels.hpp"

namespace topicmine::kernels::serial {

RealMatrix smoothed_rows(const Matrix<Count>& counts, std::span<const Count> row_totals, double prior) {
  const std::size_t rows = counts.rows();
  const std::size_t cols = counts.cols();
  RealMatrix out(rows, cols);
  const double col_prior = static_cast<double>(cols) * prior;
  for (std::size_t r = 0; r < rows; ++r) {
    const double denom = static_cast<double>(row_totals[r]) + col_prior;
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = (static_cast<double>(counts(r, c)) + prior) / denom;
  }
  return out;
}

double log_likelihood(const RealMatrix& theta, const RealMatrix& phi, std::span<const Document> docs) {
  const std::size_t topics = theta.cols();
  CompensatedSum total;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    CompensatedSum doc_sum;
    for (WordId w : docs[d].word_ids) {
      double p = 0.0;
      for (std::size_t k = 0; k < topics; ++k) p += theta(d, k) * phi(k, w);
      doc_sum.add(std::log(p));
    }
    total.add(doc_sum.value());
  }
  return total.value();
}

std::vector<double> column_sums(const RealMatrix& m) {
  std::vector<double> out(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    CompensatedSum s;
    for (std::size_t r = 0; r < m.rows(); ++r) s.add(m(r, c));
    out[c] = s.value();
  }
  return out;
}

std::vector<double> category_masses(const RealMatrix& theta, std::span<const std::size_t> docs,
                                    std::span<const std::uint32_t> category_of, std::size_t categories) {
  std::vector<CompensatedSum> sums(categories);
  std::vector<double> row(categories);
  for (std::size_t d : docs) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t k = 0; k < theta.cols(); ++k) row[category_of[k]] += theta(d, k);
    for (std::size_t c = 0; c < categories; ++c) sums[c].add(row[c]);
  }
  std::vector<double> out(categories);
  for (std::size_t c = 0; c < categories; ++c) out[c] = sums[c].value();
  return out;
}

std::vector<std::vector<std::string>> tokenize_all(std::span<const RawPost> posts, const TokenizerConfig& config) {
  std::vector<std::vector<std::string>> out(posts.size());
  for (std::size_t i = 0; i < posts.size(); ++i) out[i] = tokenize(posts[i].text, config);
  return out;
}

}  // namespace topicmine::kernels::serial
