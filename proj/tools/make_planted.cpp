// Writes a planted-topic corpus (posts file) and its truth file, for checking
// that `topicmine fit` recovers known topics.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "topicmine/planted.hpp"

int main(int argc, char** argv) {
  topicmine::planted::PlantedSpec spec;
  std::string posts_path = "planted_posts.jsonl";
  std::string truth_path = "planted_truth.txt";

  CLI::App app{"Generate a planted-topic corpus"};
  app.add_option("--posts", posts_path)->capture_default_str();
  app.add_option("--truth", truth_path)->capture_default_str();
  app.add_option("--topics", spec.topics)->capture_default_str();
  app.add_option("--support", spec.support)->capture_default_str();
  app.add_option("--heavy-words", spec.heavy_words)->capture_default_str();
  app.add_option("--heavy-weight", spec.heavy_weight)->capture_default_str();
  app.add_option("--doc-alpha", spec.doc_alpha)->capture_default_str();
  app.add_option("--documents", spec.documents)->capture_default_str();
  app.add_option("--tokens-per-doc", spec.tokens_per_doc)->capture_default_str();
  app.add_option("--seed", spec.seed)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    const auto corpus = topicmine::planted::generate(spec);
    topicmine::write_posts(std::filesystem::path(posts_path), corpus.posts);
    std::ofstream truth(truth_path);
    topicmine::planted::write_truth(truth, corpus);
    if (!truth) throw std::runtime_error("cannot write " + truth_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cout << "wrote " << posts_path << " and " << truth_path << '\n';
  return 0;
}
