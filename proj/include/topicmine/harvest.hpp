#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "topicmine/error.hpp"
#include "topicmine/post.hpp"

namespace topicmine::harvest {

struct AccountEntry {
  std::string library_name;
  std::string group;
  std::string handle;

  bool operator==(const AccountEntry&) const = default;
};

struct FetchPolicy {
  std::size_t max_posts_per_account = 3200;
  std::size_t page_size = 200;
  std::size_t max_retries = 5;
  std::chrono::milliseconds backoff_base{1000};

  void validate() const;
};

// Source errors. RateLimited is retried by fetch_account; the other two are not.
class RateLimited : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};
class UnknownAccount : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};
class TransportFailure : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

struct Page {
  std::vector<RawPost> posts;           // newest-first
  std::optional<std::string> next;      // empty at end of stream
};

// Paged, cursor-based post source. Pages for a handle are newest-first and a
// given (handle, cursor) pair must be replayable. Implementations must be
// safe to call from several threads at once.
class PostSource {
 public:
  virtual ~PostSource() = default;

  // `cursor` is empty for the first page.
  virtual Page fetch_page(const std::string& handle, const std::optional<std::string>& cursor,
                          std::size_t limit) = 0;

  // Total number of posts the account has published, as reported by the source.
  virtual std::size_t post_count(const std::string& handle) = 0;
};

// Replays recorded posts from `<dir>/<handle>.jsonl` (post file format, a
// leading '@' in the handle is dropped from the file name). File order is
// taken as newest-first. Cursors are decimal offsets.
class ReplaySource : public PostSource {
 public:
  explicit ReplaySource(std::filesystem::path directory);

  Page fetch_page(const std::string& handle, const std::optional<std::string>& cursor,
                  std::size_t limit) override;
  std::size_t post_count(const std::string& handle) override;

  std::filesystem::path file_for(const std::string& handle) const;

 private:
  std::vector<RawPost> load(const std::string& handle) const;

  std::filesystem::path directory_;
};

// Manifest CSV: header `library_name,group,handle`, one row per account.
std::vector<AccountEntry> load_manifest(std::istream& in, const std::string& source_name = "<stream>");
std::vector<AccountEntry> load_manifest(const std::filesystem::path& path);

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// Pages through `source` until end of stream or the per-account cap. Rate
// limits are retried with exponential backoff (backoff_base * 2^attempt) up
// to max_retries. Every returned post is stamped with entry.group.
std::vector<RawPost> fetch_account(const AccountEntry& entry, const FetchPolicy& policy,
                                   PostSource& source, const Sleeper& sleep = {});

// Handles whose count is at least min_posts.
std::set<std::string> filter_active(const std::map<std::string, std::size_t>& handle_post_counts,
                                    std::size_t min_posts);

struct AccountFailure {
  std::string handle;
  std::string message;
};

struct HarvestResult {
  std::vector<RawPost> posts;                // manifest order
  std::vector<std::string> fetched;          // handles fetched successfully
  std::vector<std::string> inactive;         // dropped by the activity filter
  std::vector<AccountFailure> failures;
};

struct HarvestOptions {
  FetchPolicy policy;
  std::size_t min_active_posts = 100;
  std::size_t workers = 4;
  Sleeper sleep;
};

// Counts posts per account, applies the activity filter, then fetches active
// accounts concurrently. Results are merged in manifest order so output does
// not depend on scheduling. Per-account failures are collected, not thrown.
HarvestResult harvest_all(const std::vector<AccountEntry>& manifest, PostSource& source,
                          const HarvestOptions& options);

}  // namespace topicmine::harvest
