#include "topicmine/harvest.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "topicmine/format.hpp"

namespace topicmine::harvest {

void FetchPolicy::validate() const {
  if (max_posts_per_account < 1) throw ValidationError("max_posts_per_account must be >= 1");
  if (page_size < 1) throw ValidationError("page_size must be >= 1");
  if (backoff_base.count() < 0) throw ValidationError("backoff_base must be nonnegative");
}

// ---------------------------------------------------------------- manifest

std::vector<AccountEntry> load_manifest(std::istream& in, const std::string& source_name) {
  std::vector<AccountEntry> entries;
  std::unordered_set<std::string> handles;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    auto fields = parse_csv_line(line);
    if (!fields) throw ParseError(source_name, line_no, "unterminated quoted field");
    if (!header_seen) {
      if (*fields != std::vector<std::string>{"library_name", "group", "handle"})
        throw ParseError(source_name, line_no, "expected header 'library_name,group,handle'");
      header_seen = true;
      continue;
    }
    if (fields->size() != 3)
      throw ParseError(source_name, line_no, "expected 3 fields, got " + std::to_string(fields->size()));
    AccountEntry e{(*fields)[0], (*fields)[1], (*fields)[2]};
    if (e.handle.empty()) throw ParseError(source_name, line_no, "empty handle");
    if (e.group.empty() || e.group.find_first_of(" \t") != std::string::npos)
      throw ParseError(source_name, line_no, "invalid group code '" + e.group + "'");
    if (!handles.insert(e.handle).second)
      throw ValidationError(source_name + ":" + std::to_string(line_no) + ": duplicate handle " + e.handle);
    entries.push_back(std::move(e));
  }
  if (!header_seen) throw ParseError(source_name, line_no + 1, "missing header 'library_name,group,handle'");
  return entries;
}

std::vector<AccountEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open manifest " + path.string());
  return load_manifest(in, path.string());
}

// ---------------------------------------------------------------- replay

ReplaySource::ReplaySource(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::filesystem::path ReplaySource::file_for(const std::string& handle) const {
  std::string name = handle;
  if (name.starts_with('@')) name.erase(0, 1);
  if (name.empty() || name.find_first_of("/\\") != std::string::npos || name == "." || name == "..")
    throw UnknownAccount("handle cannot name a replay file: " + handle);
  return directory_ / (name + ".jsonl");
}

std::vector<RawPost> ReplaySource::load(const std::string& handle) const {
  const auto path = file_for(handle);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UnknownAccount("no replay fixture for " + handle + " (" + path.string() + ")");
  return read_posts(in, path.string());
}

Page ReplaySource::fetch_page(const std::string& handle, const std::optional<std::string>& cursor,
                              std::size_t limit) {
  const auto all = load(handle);
  std::size_t offset = 0;
  if (cursor) {
    auto [p, ec] = std::from_chars(cursor->data(), cursor->data() + cursor->size(), offset);
    if (ec != std::errc{} || p != cursor->data() + cursor->size())
      throw TransportFailure("bad replay cursor '" + *cursor + "'");
  }
  Page page;
  const std::size_t end = std::min(all.size(), offset + limit);
  for (std::size_t i = std::min(offset, all.size()); i < end; ++i) page.posts.push_back(all[i]);
  if (end < all.size()) page.next = std::to_string(end);
  return page;
}

std::size_t ReplaySource::post_count(const std::string& handle) { return load(handle).size(); }

// ---------------------------------------------------------------- fetching

namespace {

template <typename Fn>
auto with_retries(const FetchPolicy& policy, const Sleeper& sleep, Fn&& fn) {
  for (std::size_t attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (const RateLimited& e) {
      if (attempt >= policy.max_retries)
        throw RateLimited(std::string(e.what()) + " (gave up after " + std::to_string(policy.max_retries) +
                          " retries)");
      const auto delay = policy.backoff_base * (std::int64_t{1} << std::min<std::size_t>(attempt, 30));
      if (sleep)
        sleep(delay);
      else
        std::this_thread::sleep_for(delay);
    }
  }
}

}  // namespace

std::vector<RawPost> fetch_account(const AccountEntry& entry, const FetchPolicy& policy, PostSource& source,
                                   const Sleeper& sleep) {
  policy.validate();
  std::vector<RawPost> posts;
  std::optional<std::string> cursor;
  while (posts.size() < policy.max_posts_per_account) {
    const std::size_t want = std::min(policy.page_size, policy.max_posts_per_account - posts.size());
    Page page = with_retries(policy, sleep, [&] { return source.fetch_page(entry.handle, cursor, want); });
    for (auto& p : page.posts) {
      if (posts.size() == policy.max_posts_per_account) break;
      p.account = entry.handle;
      p.group = entry.group;
      posts.push_back(std::move(p));
    }
    if (!page.next) break;
    if (page.posts.empty()) break;  // a source that pages forever without data
    cursor = std::move(page.next);
  }
  return posts;
}

std::set<std::string> filter_active(const std::map<std::string, std::size_t>& handle_post_counts,
                                    std::size_t min_posts) {
  std::set<std::string> active;
  for (const auto& [handle, count] : handle_post_counts)
    if (count >= min_posts) active.insert(handle);
  return active;
}

namespace {

// Shared rate-limit budget: a backoff requested by any worker pauses every
// worker until it expires.
class BackoffGate {
 public:
  void extend(std::chrono::milliseconds delay) {
    std::lock_guard lock(mu_);
    resume_at_ = std::max(resume_at_, std::chrono::steady_clock::now() + delay);
  }
  void wait() {
    std::unique_lock lock(mu_);
    while (std::chrono::steady_clock::now() < resume_at_) {
      const auto until = resume_at_;
      lock.unlock();
      std::this_thread::sleep_until(until);
      lock.lock();
    }
  }

 private:
  std::mutex mu_;
  std::chrono::steady_clock::time_point resume_at_{};
};

class GatedSource : public PostSource {
 public:
  GatedSource(PostSource& inner, BackoffGate& gate) : inner_(inner), gate_(gate) {}
  Page fetch_page(const std::string& handle, const std::optional<std::string>& cursor,
                  std::size_t limit) override {
    gate_.wait();
    return inner_.fetch_page(handle, cursor, limit);
  }
  std::size_t post_count(const std::string& handle) override {
    gate_.wait();
    return inner_.post_count(handle);
  }

 private:
  PostSource& inner_;
  BackoffGate& gate_;
};

}  // namespace

HarvestResult harvest_all(const std::vector<AccountEntry>& manifest, PostSource& source,
                          const HarvestOptions& options) {
  options.policy.validate();

  BackoffGate gate;
  GatedSource gated(source, gate);
  PostSource& src = options.sleep ? source : static_cast<PostSource&>(gated);
  Sleeper sleep = options.sleep ? options.sleep : Sleeper([&gate](std::chrono::milliseconds d) {
    gate.extend(d);
    gate.wait();
  });

  const std::size_t n = manifest.size();
  std::vector<std::optional<std::size_t>> counts(n);
  std::vector<std::vector<RawPost>> fetched(n);
  std::vector<std::optional<std::string>> errors(n);

  auto run_parallel = [&](auto&& task) {
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, n));
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            task(i);
          } catch (const std::exception& e) {
            errors[i] = e.what();
          }
        }
      });
    }
  };

  // Activity filter first, on the source-reported totals.
  run_parallel([&](std::size_t i) {
    counts[i] = with_retries(options.policy, sleep, [&] { return src.post_count(manifest[i].handle); });
  });

  std::map<std::string, std::size_t> count_map;
  for (std::size_t i = 0; i < n; ++i)
    if (counts[i]) count_map[manifest[i].handle] = *counts[i];
  const auto active = filter_active(count_map, options.min_active_posts);

  run_parallel([&](std::size_t i) {
    if (errors[i] || !active.contains(manifest[i].handle)) return;
    fetched[i] = fetch_account(manifest[i], options.policy, src, sleep);
  });

  HarvestResult result;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& handle = manifest[i].handle;
    if (errors[i]) {
      result.failures.push_back({handle, *errors[i]});
    } else if (!active.contains(handle)) {
      result.inactive.push_back(handle);
    } else {
      result.fetched.push_back(handle);
      for (auto& p : fetched[i]) result.posts.push_back(std::move(p));
    }
  }
  return result;
}

}  // namespace topicmine::harvest
