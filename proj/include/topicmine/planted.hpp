#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "topicmine/post.hpp"

namespace topicmine::planted {

struct PlantedSpec {
  std::size_t topics = 5;
  std::size_t support = 40;      // words per topic; supports are disjoint
  std::size_t heavy_words = 20;  // first words of each support get heavy_weight
  double heavy_weight = 3.0;
  double doc_alpha = 0.2;        // Dirichlet concentration of doc mixtures
  std::size_t documents = 1000;
  std::size_t tokens_per_doc = 50;
  std::uint64_t seed = 7;
};

struct PlantedCorpus {
  std::vector<RawPost> posts;
  // Per planted topic, its words sorted by planted probability (desc), ties
  // by word.
  std::vector<std::vector<std::string>> topic_words;
};

// Word names are "w<topic>x<index>" so they survive the default tokenizer
// and never collide with the stopword list.
PlantedCorpus generate(const PlantedSpec& spec);

// Greedy matching: repeatedly pair the fitted and planted topics with the
// largest top-n overlap. Returns the mean of |fitted ∩ planted| / n over the
// matched pairs (min(#fitted, #planted) of them).
double recovery_score(const std::vector<std::vector<std::string>>& fitted_top,
                      const std::vector<std::vector<std::string>>& planted_top, std::size_t n);

// Truth file: one line per planted topic, words separated by spaces.
void write_truth(std::ostream& out, const PlantedCorpus& corpus);
std::vector<std::vector<std::string>> read_truth(std::istream& in);

}  // namespace topicmine::planted
