#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "topicmine/analysis.hpp"
#include "topicmine/corpus.hpp"
#include "topicmine/harvest.hpp"
#include "topicmine/lda.hpp"
#include "topicmine/tokenizer.hpp"

namespace topicmine {

struct PipelinePaths {
  std::filesystem::path manifest;
  std::filesystem::path posts;
  std::filesystem::path stopwords;  // empty: bundled English list
  std::string label_map = "paper";  // file path, or "paper" for the bundled map
  std::filesystem::path output_dir = ".";
};

struct PipelineConfig {
  PipelinePaths paths;
  TokenizerConfig tokenizer = TokenizerConfig::english();
  lda::LdaConfig lda;
  std::optional<double> alpha;  // unset: 50 / topics
  harvest::FetchPolicy fetch;
  std::size_t min_active_posts = 100;
  std::size_t workers = 4;

  // Applies the alpha default and validates every section.
  lda::LdaConfig resolved_lda() const;
};

// Structured config file (JSON). Every key is optional; unknown keys are
// rejected.
//
//   {
//     "paths":     {"manifest", "posts", "stopwords", "label_map", "output_dir"},
//     "tokenizer": {"lowercase", "min_token_len", "strip_urls", "strip_mentions",
//                   "keep_hashtag_body"},
//     "lda":       {"topics", "alpha", "beta", "sweeps", "burn_in", "seed", "top_n",
//                   "likelihood_every"},
//     "fetch":     {"max_posts_per_account", "page_size", "max_retries", "backoff_ms"},
//     "min_active_posts": n,
//     "workers": n
//   }
//
// A "stopwords" path replaces the bundled list. Relative paths are resolved
// against the config file's directory.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void apply_pipeline_json(PipelineConfig& config, const std::string& json_text,
                         const std::filesystem::path& base_dir, const std::string& source_name);

analysis::LabelMap resolve_label_map(const std::string& spec, std::size_t topics);

// The three report tables as CSV text.
struct Reports {
  std::string topic_weights;
  std::string category_weights_by_group;
  std::string top_words;
};

Reports build_reports(const lda::LdaModel& model, const Corpus& corpus, const analysis::LabelMap& labels,
                      std::size_t top_n);

}  // namespace topicmine
