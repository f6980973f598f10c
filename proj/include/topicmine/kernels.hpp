#pragma once

// Data-parallel kernels behind the estimators and reports. Each kernel has a
// serial reference and an OpenMP version. The OpenMP versions split work so
// that every output element is still reduced serially in a fixed order, which
// makes the two paths bit-identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "topicmine/corpus.hpp"
#include "topicmine/matrix.hpp"
#include "topicmine/post.hpp"
#include "topicmine/tokenizer.hpp"

namespace topicmine::kernels {

using Count = std::int32_t;

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Dirichlet-smoothed row normalization:
//   out[r][c] = (counts[r][c] + prior) / (row_totals[r] + cols * prior)
// This is theta with (n_dk, n_d, alpha) and phi with (n_kw, n_k, beta).
// row_totals must equal the row sums of counts.
namespace serial {
RealMatrix smoothed_rows(const Matrix<Count>& counts, std::span<const Count> row_totals, double prior);
double log_likelihood(const RealMatrix& theta, const RealMatrix& phi, std::span<const Document> docs);
std::vector<double> column_sums(const RealMatrix& m);
// masses[c] = sum over docs d, topics k with category_of[k] == c of theta[d][k]
std::vector<double> category_masses(const RealMatrix& theta, std::span<const std::size_t> docs,
                                    std::span<const std::uint32_t> category_of, std::size_t categories);
std::vector<std::vector<std::string>> tokenize_all(std::span<const RawPost> posts,
                                                   const TokenizerConfig& config);
}  // namespace serial

namespace parallel {
RealMatrix smoothed_rows(const Matrix<Count>& counts, std::span<const Count> row_totals, double prior);
double log_likelihood(const RealMatrix& theta, const RealMatrix& phi, std::span<const Document> docs);
std::vector<double> column_sums(const RealMatrix& m);
std::vector<double> category_masses(const RealMatrix& theta, std::span<const std::size_t> docs,
                                    std::span<const std::uint32_t> category_of, std::size_t categories);
std::vector<std::vector<std::string>> tokenize_all(std::span<const RawPost> posts,
                                                   const TokenizerConfig& config);
}  // namespace parallel

int max_threads();

}  // namespace topicmine::kernels
