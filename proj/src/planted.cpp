#include "topicmine/planted.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "topicmine/error.hpp"
#include "topicmine/rng.hpp"

namespace topicmine::planted {

namespace {

double standard_normal(Rng& rng) {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Marsaglia-Tsang.
double gamma_sample(Rng& rng, double shape) {
  if (shape < 1.0) {
    const double u = 1.0 - rng.uniform01();
    return gamma_sample(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - rng.uniform01();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

std::size_t draw(Rng& rng, const std::vector<double>& cumulative) {
  const double u = rng.uniform01() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

}  // namespace

PlantedCorpus generate(const PlantedSpec& spec) {
  if (spec.topics == 0 || spec.support == 0 || spec.heavy_words > spec.support || spec.tokens_per_doc == 0 ||
      !(spec.doc_alpha > 0.0) || !(spec.heavy_weight > 0.0))
    throw ValidationError("invalid planted corpus spec");

  Rng rng(spec.seed);
  PlantedCorpus out;

  std::vector<std::vector<std::string>> words(spec.topics);
  std::vector<std::vector<double>> word_cdf(spec.topics);
  for (std::size_t k = 0; k < spec.topics; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.support; ++i) {
      words[k].push_back("w" + std::to_string(k) + "x" + std::to_string(i));
      acc += i < spec.heavy_words ? spec.heavy_weight : 1.0;
      word_cdf[k].push_back(acc);
    }
    // Ranked list: heavy words then light words, each block sorted by name.
    auto ranked = words[k];
    const auto heavy_end = ranked.begin() + static_cast<std::ptrdiff_t>(spec.heavy_words);
    std::sort(ranked.begin(), heavy_end);
    std::sort(heavy_end, ranked.end());
    if (spec.heavy_weight < 1.0) std::rotate(ranked.begin(), heavy_end, ranked.end());
    out.topic_words.push_back(std::move(ranked));
  }

  std::vector<double> mix(spec.topics);
  for (std::size_t d = 0; d < spec.documents; ++d) {
    double acc = 0.0;
    for (std::size_t k = 0; k < spec.topics; ++k) {
      acc += gamma_sample(rng, spec.doc_alpha);
      mix[k] = acc;
    }
    if (!(acc > 0.0)) {
      // All gammas underflowed; fall back to a single random topic.
      std::fill(mix.begin(), mix.end(), 0.0);
      const auto k = rng.uniform_below(spec.topics);
      for (std::size_t j = k; j < spec.topics; ++j) mix[j] = 1.0;
    }
    std::string text;
    for (std::size_t t = 0; t < spec.tokens_per_doc; ++t) {
      const std::size_t k = draw(rng, mix);
      const std::size_t w = draw(rng, word_cdf[k]);
      if (!text.empty()) text += ' ';
      text += words[k][w];
    }
    out.posts.push_back(RawPost{"p" + std::to_string(d), "planted", "PL", std::move(text), std::nullopt});
  }
  return out;
}

double recovery_score(const std::vector<std::vector<std::string>>& fitted_top,
                      const std::vector<std::vector<std::string>>& planted_top, std::size_t n) {
  if (n == 0) throw ValidationError("recovery_score needs n >= 1");
  auto head = [n](const std::vector<std::string>& v) {
    return std::set<std::string>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(n, v.size())));
  };
  std::vector<std::set<std::string>> fitted;
  std::vector<std::set<std::string>> planted;
  for (const auto& v : fitted_top) fitted.push_back(head(v));
  for (const auto& v : planted_top) planted.push_back(head(v));

  std::vector<std::vector<std::size_t>> overlap(fitted.size(), std::vector<std::size_t>(planted.size()));
  for (std::size_t i = 0; i < fitted.size(); ++i)
    for (std::size_t j = 0; j < planted.size(); ++j)
      for (const auto& w : fitted[i]) overlap[i][j] += planted[j].count(w);

  const std::size_t pairs = std::min(fitted.size(), planted.size());
  if (pairs == 0) return 0.0;
  std::vector<bool> used_f(fitted.size()), used_p(planted.size());
  double total = 0.0;
  for (std::size_t step = 0; step < pairs; ++step) {
    std::size_t bi = 0, bj = 0;
    bool found = false;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
      if (used_f[i]) continue;
      for (std::size_t j = 0; j < planted.size(); ++j) {
        if (used_p[j]) continue;
        if (!found || overlap[i][j] > overlap[bi][bj]) {
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    used_f[bi] = used_p[bj] = true;
    total += static_cast<double>(overlap[bi][bj]) / static_cast<double>(n);
  }
  return total / static_cast<double>(pairs);
}

void write_truth(std::ostream& out, const PlantedCorpus& corpus) {
  for (const auto& words : corpus.topic_words) {
    for (std::size_t i = 0; i < words.size(); ++i) out << (i ? " " : "") << words[i];
    out << '\n';
  }
}

std::vector<std::vector<std::string>> read_truth(std::istream& in) {
  std::vector<std::vector<std::string>> topics;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::vector<std::string> words;
    for (std::string w; ss >> w;) words.push_back(w);
    if (!words.empty()) topics.push_back(std::move(words));
  }
  return topics;
}

}  // namespace topicmine::planted
