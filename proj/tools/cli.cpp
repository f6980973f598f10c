#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "topicmine/corpus.hpp"
#include "topicmine/error.hpp"
#include "topicmine/format.hpp"
#include "topicmine/harvest.hpp"
#include "topicmine/http_source.hpp"
#include "topicmine/lda.hpp"
#include "topicmine/pipeline.hpp"
#include "topicmine/planted.hpp"
#include "topicmine/snapshot.hpp"

namespace topicmine::cli {

namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << text;
  if (!out) throw RuntimeFailure("write failed: " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw RuntimeFailure("cannot create output directory " + dir.string());
}

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) throw ValidationError(std::string("missing ") + what + " path");
  if (!fs::exists(p)) throw ValidationError(std::string(what) + " not found: " + p.string());
}

std::optional<std::string> find_config_arg(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].starts_with("--config=")) return args[i].substr(9);
  }
  return std::nullopt;
}

struct Options {
  PipelineConfig cfg;
  std::string config_path;
  // harvest
  std::string replay_dir;
  std::string live_url;
  std::string posts_out = "posts.jsonl";
  std::int64_t backoff_ms = 0;
  // stats
  std::string stats_out;
  // fit
  std::string snapshot_path;
  std::string report_path;
  std::string planted_truth;
  std::size_t recovery_top = 20;
  std::optional<double> recovery_threshold;
  std::optional<double> alpha;
  // report
  std::optional<std::size_t> top_n;
};

// Loads the tokenizer stopwords named by the config (bundled list otherwise).
void apply_stopwords(PipelineConfig& cfg) {
  if (!cfg.paths.stopwords.empty()) {
    require_file(cfg.paths.stopwords, "stopword file");
    cfg.tokenizer.stopwords = read_stopwords(cfg.paths.stopwords);
  }
}

int cmd_harvest(Options& o, std::ostream& out, std::ostream& err) {
  auto& cfg = o.cfg;
  if (o.backoff_ms > 0) cfg.fetch.backoff_base = std::chrono::milliseconds(o.backoff_ms);
  cfg.fetch.validate();
  require_file(cfg.paths.manifest, "manifest");
  const auto manifest = harvest::load_manifest(cfg.paths.manifest);

  std::unique_ptr<harvest::PostSource> source;
  if (!o.replay_dir.empty() == !o.live_url.empty())
    throw ValidationError("choose exactly one of --replay-dir or --live-url");
  if (!o.replay_dir.empty()) {
    if (!fs::is_directory(o.replay_dir)) throw ValidationError("replay directory not found: " + o.replay_dir);
    source = std::make_unique<harvest::ReplaySource>(o.replay_dir);
  } else {
    source = harvest::HttpPostSource::from_environment(o.live_url);
  }

  harvest::HarvestOptions opts;
  opts.policy = cfg.fetch;
  opts.min_active_posts = cfg.min_active_posts;
  opts.workers = cfg.workers;
  auto result = harvest::harvest_all(manifest, *source, opts);

  const std::size_t before = result.posts.size();
  const auto posts = dedupe(result.posts);
  const fs::path out_path = o.posts_out;
  if (out_path.has_parent_path()) ensure_dir(out_path.parent_path());
  write_posts(out_path, posts);

  out << "accounts in manifest: " << manifest.size() << '\n'
      << "accounts fetched: " << result.fetched.size() << '\n'
      << "accounts inactive (< " << cfg.min_active_posts << " posts): " << result.inactive.size() << '\n'
      << "accounts failed: " << result.failures.size() << '\n'
      << "posts fetched: " << before << '\n'
      << "duplicates removed: " << (before - posts.size()) << '\n'
      << "posts written: " << posts.size() << " -> " << out_path.string() << '\n';
  for (const auto& h : result.inactive) out << "inactive: " << h << '\n';
  for (const auto& f : result.failures) err << "failed: " << f.handle << ": " << f.message << '\n';
  return result.failures.empty() ? kExitOk : kExitPartial;
}

int cmd_stats(Options& o, std::ostream& out, std::ostream&) {
  auto& cfg = o.cfg;
  require_file(cfg.paths.posts, "posts file");
  require_file(cfg.paths.manifest, "manifest");
  const auto manifest = harvest::load_manifest(cfg.paths.manifest);
  const auto posts = read_posts(cfg.paths.posts);
  const auto stats = corpus_stats(posts, manifest);
  std::ostringstream csv;
  write_stats_csv(csv, stats);
  out << csv.str();
  if (!o.stats_out.empty()) write_text(o.stats_out, csv.str());
  return kExitOk;
}

int cmd_fit(Options& o, std::ostream& out, std::ostream& err) {
  auto& cfg = o.cfg;
  if (o.alpha) cfg.alpha = o.alpha;
  apply_stopwords(cfg);
  const auto lda_cfg = cfg.resolved_lda();
  require_file(cfg.paths.posts, "posts file");

  const auto posts = dedupe(read_posts(cfg.paths.posts));
  BuildReport build;
  const Corpus corpus = build_corpus(posts, cfg.tokenizer, &build);
  if (corpus.documents.empty()) {
    err << "error: corpus is empty after tokenization (" << build.dropped_empty << " posts dropped)\n";
    return kExitUsage;
  }

  lda::FitReport report;
  const auto model = lda::fit(corpus, lda_cfg, &report);

  const fs::path out_dir = cfg.paths.output_dir;
  ensure_dir(out_dir);
  const fs::path snapshot_path = o.snapshot_path.empty() ? out_dir / "model.snapshot" : fs::path(o.snapshot_path);
  const fs::path report_path = o.report_path.empty() ? out_dir / "fit_report.csv" : fs::path(o.report_path);
  lda::write_snapshot(snapshot_path, lda::make_snapshot(model, corpus));
  {
    std::ostringstream csv;
    lda::write_fit_report(csv, report);
    write_text(report_path, csv.str());
  }

  if (report.topics_exceed_tokens) err << "warning: K=" << lda_cfg.topics << " exceeds the token count\n";
  if (report.topics_exceed_vocab) err << "warning: K=" << lda_cfg.topics << " exceeds the vocabulary size\n";
  out << "documents: " << corpus.documents.size() << " (dropped empty: " << build.dropped_empty << ")\n"
      << "tokens: " << corpus.num_tokens() << '\n'
      << "vocabulary: " << corpus.vocabulary.size() << '\n'
      << "topics: " << lda_cfg.topics << ", alpha: " << format_shortest(lda_cfg.alpha)
      << ", beta: " << format_shortest(lda_cfg.beta) << ", sweeps: " << lda_cfg.sweeps
      << ", seed: " << lda_cfg.seed << '\n';
  if (!report.trace.empty())
    out << "final log-likelihood: " << format_fixed(report.trace.back().log_likelihood, 6) << '\n';
  out << "snapshot: " << snapshot_path.string() << '\n' << "fit report: " << report_path.string() << '\n';

  if (!o.planted_truth.empty()) {
    std::ifstream in(o.planted_truth);
    if (!in) throw ValidationError("cannot open planted truth " + o.planted_truth);
    const auto truth = planted::read_truth(in);
    std::vector<std::vector<std::string>> fitted;
    for (std::size_t k = 0; k < model.num_topics(); ++k) {
      std::vector<std::string> words;
      for (auto& w : lda::top_words(model, k, o.recovery_top)) words.push_back(std::move(w.token));
      fitted.push_back(std::move(words));
    }
    const double score = planted::recovery_score(fitted, truth, o.recovery_top);
    out << "planted recovery (mean top-" << o.recovery_top << " overlap): " << format_fixed(score, 4) << '\n';
    if (o.recovery_threshold && score < *o.recovery_threshold) {
      err << "error: recovery " << format_fixed(score, 4) << " below threshold "
          << format_fixed(*o.recovery_threshold, 4) << '\n';
      return kExitRuntime;
    }
  }
  return kExitOk;
}

int cmd_report(Options& o, std::ostream& out, std::ostream&) {
  auto& cfg = o.cfg;
  require_file(o.snapshot_path, "snapshot");
  const auto snapshot = lda::read_snapshot(fs::path(o.snapshot_path));
  const auto model = snapshot.model();
  const auto labels = resolve_label_map(cfg.paths.label_map, model.num_topics());
  const std::size_t top_n = o.top_n.value_or(snapshot.config.top_n);

  const auto reports = build_reports(model, snapshot.corpus, labels, top_n);
  const fs::path out_dir = cfg.paths.output_dir;
  ensure_dir(out_dir);
  write_text(out_dir / "topic_weights.csv", reports.topic_weights);
  write_text(out_dir / "category_weights_by_group.csv", reports.category_weights_by_group);
  write_text(out_dir / "top_words.csv", reports.top_words);
  out << "wrote topic_weights.csv, category_weights_by_group.csv, top_words.csv to " << out_dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  try {
    if (auto path = find_config_arg(args)) {
      o.cfg = load_pipeline_config(*path);
      o.config_path = *path;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  auto& cfg = o.cfg;
  if (cfg.alpha) o.alpha = cfg.alpha;

  CLI::App app{"topicmine: harvest posts, fit an LDA topic model, and report topic and category weights"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config_path, "JSON config file; flags override it");

  auto* harvest = app.add_subcommand("harvest", "Fetch posts per account into a posts file");
  harvest->add_option("--manifest", cfg.paths.manifest, "Manifest CSV (library_name,group,handle)");
  harvest->add_option("--replay-dir", o.replay_dir, "Directory of <handle>.jsonl replay fixtures");
  harvest->add_option("--live-url", o.live_url, "Base URL of a live source (token from HARVEST_BEARER_TOKEN)");
  harvest->add_option("--out", o.posts_out, "Output posts file")->capture_default_str();
  harvest->add_option("--cap", cfg.fetch.max_posts_per_account, "Max posts per account")->capture_default_str();
  harvest->add_option("--page-size", cfg.fetch.page_size, "Posts per page request")->capture_default_str();
  harvest->add_option("--max-retries", cfg.fetch.max_retries, "Retries on rate limiting")->capture_default_str();
  harvest->add_option("--backoff-ms", o.backoff_ms, "Base backoff delay in milliseconds");
  harvest->add_option("--min-active", cfg.min_active_posts, "Minimum total posts for an account to be fetched")
      ->capture_default_str();
  harvest->add_option("--workers", cfg.workers, "Accounts fetched concurrently")->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Per-group post and account statistics");
  stats->add_option("--posts", cfg.paths.posts, "Posts file");
  stats->add_option("--manifest", cfg.paths.manifest, "Manifest CSV");
  stats->add_option("--out", o.stats_out, "Also write the CSV here");

  auto* fit = app.add_subcommand("fit", "Build the corpus and fit the topic model");
  fit->add_option("--posts", cfg.paths.posts, "Posts file");
  fit->add_option("--stopwords", cfg.paths.stopwords, "Stopword file (default: bundled English list)");
  fit->add_option("--out-dir", cfg.paths.output_dir, "Output directory")->capture_default_str();
  fit->add_option("--snapshot", o.snapshot_path, "Snapshot path (default <out-dir>/model.snapshot)");
  fit->add_option("--fit-report", o.report_path, "Fit report path (default <out-dir>/fit_report.csv)");
  fit->add_option("--topics", cfg.lda.topics, "Number of topics K")->capture_default_str();
  fit->add_option("--alpha", o.alpha, "Doc-topic prior (default 50/K)");
  fit->add_option("--beta", cfg.lda.beta, "Topic-word prior")->capture_default_str();
  fit->add_option("--sweeps", cfg.lda.sweeps, "Gibbs sweeps")->capture_default_str();
  fit->add_option("--burn-in", cfg.lda.burn_in, "Burn-in sweeps")->capture_default_str();
  fit->add_option("--seed", cfg.lda.seed, "Random seed")->capture_default_str();
  fit->add_option("--top-n", cfg.lda.top_n, "Words per topic in reports")->capture_default_str();
  fit->add_option("--likelihood-every", cfg.lda.likelihood_every, "Log-likelihood interval (0: off)")
      ->capture_default_str();
  fit->add_option("--min-token-len", cfg.tokenizer.min_token_len, "Shortest kept token")->capture_default_str();
  fit->add_flag("--lowercase,!--no-lowercase", cfg.tokenizer.lowercase, "Lowercase tokens");
  fit->add_flag("--strip-urls,!--keep-urls", cfg.tokenizer.strip_urls, "Drop URLs");
  fit->add_flag("--strip-mentions,!--keep-mentions", cfg.tokenizer.strip_mentions, "Drop @mentions");
  fit->add_flag("--hashtag-body,!--drop-hashtags", cfg.tokenizer.keep_hashtag_body, "Keep hashtag text");
  fit->add_option("--planted-truth", o.planted_truth, "Planted-topic truth file; prints the recovery score");
  fit->add_option("--recovery-top", o.recovery_top, "Words compared per topic for recovery")->capture_default_str();
  fit->add_option("--recovery-threshold", o.recovery_threshold, "Fail when recovery is below this");

  auto* report = app.add_subcommand("report", "Write topic, category and top-word reports from a snapshot");
  report->add_option("--snapshot", o.snapshot_path, "Model snapshot")->required();
  report->add_option("--labels", cfg.paths.label_map, "Label map CSV, or 'paper' for the bundled map")
      ->capture_default_str();
  report->add_option("--out-dir", cfg.paths.output_dir, "Output directory")->capture_default_str();
  report->add_option("--top-n", o.top_n, "Words per topic (default from snapshot)");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("topicmine");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (harvest->parsed()) return cmd_harvest(o, out, err);
    if (stats->parsed()) return cmd_stats(o, out, err);
    if (fit->parsed()) return cmd_fit(o, out, err);
    if (report->parsed()) return cmd_report(o, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace topicmine::cli
