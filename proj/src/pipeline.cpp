#include "topicmine/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "topicmine/error.hpp"
#include "topicmine/format.hpp"

namespace topicmine {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw ValidationError("unknown config key " + where + "." + k);
  }
}

template <typename T>
void take(const json& obj, const char* key, T& dst, const std::string& where) {
  if (auto it = obj.find(key); it != obj.end()) {
    try {
      dst = it->get<T>();
    } catch (const json::exception&) {
      throw ValidationError("config key " + where + "." + key + " has the wrong type");
    }
  }
}

void take_path(const json& obj, const char* key, std::filesystem::path& dst, const std::filesystem::path& base,
               const std::string& where) {
  std::string s;
  if (!obj.contains(key)) return;
  take(obj, key, s, where);
  std::filesystem::path p(s);
  dst = p.is_relative() ? base / p : p;
}

}  // namespace

lda::LdaConfig PipelineConfig::resolved_lda() const {
  lda::LdaConfig c = lda;
  if (alpha)
    c.alpha = *alpha;
  else if (c.topics > 0)
    c.alpha = 50.0 / static_cast<double>(c.topics);
  c.validate();
  tokenizer.validate();
  fetch.validate();
  return c;
}

void apply_pipeline_json(PipelineConfig& config, const std::string& json_text, const std::filesystem::path& base_dir,
                         const std::string& source_name) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(source_name + ": invalid JSON: " + e.what());
  }
  reject_unknown(root, {"paths", "tokenizer", "lda", "fetch", "min_active_posts", "workers"}, "config");

  if (auto it = root.find("paths"); it != root.end()) {
    const auto& p = *it;
    reject_unknown(p, {"manifest", "posts", "stopwords", "label_map", "output_dir"}, "paths");
    take_path(p, "manifest", config.paths.manifest, base_dir, "paths");
    take_path(p, "posts", config.paths.posts, base_dir, "paths");
    take_path(p, "stopwords", config.paths.stopwords, base_dir, "paths");
    take_path(p, "output_dir", config.paths.output_dir, base_dir, "paths");
    if (p.contains("label_map")) {
      std::string lm;
      take(p, "label_map", lm, "paths");
      config.paths.label_map = (lm == "paper" || std::filesystem::path(lm).is_absolute())
                                   ? lm
                                   : (base_dir / lm).string();
    }
    if (!config.paths.stopwords.empty()) config.tokenizer.stopwords = read_stopwords(config.paths.stopwords);
  }
  if (auto it = root.find("tokenizer"); it != root.end()) {
    const auto& t = *it;
    reject_unknown(t, {"lowercase", "min_token_len", "strip_urls", "strip_mentions", "keep_hashtag_body"},
                   "tokenizer");
    take(t, "lowercase", config.tokenizer.lowercase, "tokenizer");
    take(t, "min_token_len", config.tokenizer.min_token_len, "tokenizer");
    take(t, "strip_urls", config.tokenizer.strip_urls, "tokenizer");
    take(t, "strip_mentions", config.tokenizer.strip_mentions, "tokenizer");
    take(t, "keep_hashtag_body", config.tokenizer.keep_hashtag_body, "tokenizer");
  }
  if (auto it = root.find("lda"); it != root.end()) {
    const auto& l = *it;
    reject_unknown(l, {"topics", "alpha", "beta", "sweeps", "burn_in", "seed", "top_n", "likelihood_every"}, "lda");
    take(l, "topics", config.lda.topics, "lda");
    if (l.contains("alpha")) {
      double a = 0;
      take(l, "alpha", a, "lda");
      config.alpha = a;
    }
    take(l, "beta", config.lda.beta, "lda");
    take(l, "sweeps", config.lda.sweeps, "lda");
    take(l, "burn_in", config.lda.burn_in, "lda");
    take(l, "seed", config.lda.seed, "lda");
    take(l, "top_n", config.lda.top_n, "lda");
    take(l, "likelihood_every", config.lda.likelihood_every, "lda");
  }
  if (auto it = root.find("fetch"); it != root.end()) {
    const auto& f = *it;
    reject_unknown(f, {"max_posts_per_account", "page_size", "max_retries", "backoff_ms"}, "fetch");
    take(f, "max_posts_per_account", config.fetch.max_posts_per_account, "fetch");
    take(f, "page_size", config.fetch.page_size, "fetch");
    take(f, "max_retries", config.fetch.max_retries, "fetch");
    if (f.contains("backoff_ms")) {
      std::int64_t ms = 0;
      take(f, "backoff_ms", ms, "fetch");
      config.fetch.backoff_base = std::chrono::milliseconds(ms);
    }
  }
  take(root, "min_active_posts", config.min_active_posts, "config");
  take(root, "workers", config.workers, "config");
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  PipelineConfig config;
  apply_pipeline_json(config, ss.str(), path.parent_path(), path.string());
  return config;
}

analysis::LabelMap resolve_label_map(const std::string& spec, std::size_t topics) {
  if (spec == "paper") {
    const auto& map = analysis::paper_label_map();
    if (map.size() != topics)
      throw ValidationError("bundled label map covers " + std::to_string(map.size()) + " topics, model has " +
                            std::to_string(topics));
    return map;
  }
  return analysis::load_label_map(std::filesystem::path(spec), topics);
}

Reports build_reports(const lda::LdaModel& model, const Corpus& corpus, const analysis::LabelMap& labels,
                      std::size_t top_n) {
  if (labels.size() != model.num_topics())
    throw ValidationError("label map covers " + std::to_string(labels.size()) + " topics, model has " +
                          std::to_string(model.num_topics()));
  Reports r;
  const auto weights = analysis::topic_weights(model.theta());
  {
    std::ostringstream out;
    analysis::write_topic_weights_csv(out, weights, labels);
    r.topic_weights = out.str();
  }
  {
    std::ostringstream out;
    analysis::write_category_weights_csv(out,
                                         analysis::group_category_weights(model.theta(), corpus.group_index, labels));
    r.category_weights_by_group = out.str();
  }
  {
    std::ostringstream out;
    out << "topic,label,rank,word,probability\n";
    for (std::size_t k = 0; k < model.num_topics(); ++k) {
      const auto words = lda::top_words(model, k, top_n);
      for (std::size_t i = 0; i < words.size(); ++i)
        out << k << ',' << csv_field(labels.at(k).label) << ',' << (i + 1) << ',' << csv_field(words[i].token) << ','
            << format_fixed(words[i].probability, 12) << '\n';
    }
    r.top_words = out.str();
  }
  return r;
}

}  // namespace topicmine
