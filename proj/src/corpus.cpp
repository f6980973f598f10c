#include "topicmine/corpus.hpp"

#include <ostream>
#include <set>
#include <unordered_set>

#include "topicmine/error.hpp"
#include "topicmine/format.hpp"
#include "topicmine/kernels.hpp"

namespace topicmine {

WordId Vocabulary::add(const std::string& token) {
  auto [it, inserted] = ids_.try_emplace(token, static_cast<WordId>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

std::optional<WordId> Vocabulary::find(const std::string& token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

WordId Vocabulary::id_of(const std::string& token) const {
  auto id = find(token);
  if (!id) throw ValidationError("token not in vocabulary: " + token);
  return *id;
}

std::size_t Corpus::num_tokens() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.word_ids.size();
  return n;
}

void Corpus::index_groups() {
  group_index.clear();
  for (std::size_t i = 0; i < documents.size(); ++i) group_index[documents[i].group].push_back(i);
}

std::vector<RawPost> dedupe(const std::vector<RawPost>& posts) {
  struct KeyHash {
    std::size_t operator()(const std::pair<std::string_view, std::string_view>& k) const {
      const std::size_t h1 = std::hash<std::string_view>{}(k.first);
      const std::size_t h2 = std::hash<std::string_view>{}(k.second);
      return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
    }
  };
  std::unordered_set<std::pair<std::string_view, std::string_view>, KeyHash> seen;
  std::vector<RawPost> out;
  out.reserve(posts.size());
  for (const auto& p : posts) {
    if (seen.emplace(p.account, p.text).second) out.push_back(p);
  }
  return out;
}

Corpus build_corpus(const std::vector<RawPost>& posts, const TokenizerConfig& config, BuildReport* report) {
  config.validate();
  const auto token_lists = kernels::parallel::tokenize_all(posts, config);

  Corpus corpus;
  BuildReport r;
  r.posts_in = posts.size();
  for (std::size_t i = 0; i < posts.size(); ++i) {
    const auto& tokens = token_lists[i];
    if (tokens.empty()) {
      ++r.dropped_empty;
      continue;
    }
    Document doc;
    doc.post_id = posts[i].id;
    doc.account = posts[i].account;
    doc.group = posts[i].group;
    doc.word_ids.reserve(tokens.size());
    for (const auto& t : tokens) doc.word_ids.push_back(corpus.vocabulary.add(t));
    r.tokens += doc.word_ids.size();
    corpus.documents.push_back(std::move(doc));
  }
  r.documents = corpus.documents.size();
  corpus.index_groups();
  if (report) *report = r;
  return corpus;
}

std::string GroupRow::average(int decimals) const {
  if (accounts == 0) return format_fixed(0.0, decimals);
  return format_ratio(posts, accounts, decimals);
}

double GroupRow::average_value() const {
  return accounts == 0 ? 0.0 : static_cast<double>(posts) / static_cast<double>(accounts);
}

GroupStats corpus_stats(const std::vector<RawPost>& posts,
                        const std::vector<harvest::AccountEntry>& manifest) {
  std::map<std::string, const harvest::AccountEntry*> by_handle;
  for (const auto& e : manifest) by_handle.emplace(e.handle, &e);

  std::map<std::string, std::uint64_t> post_counts;
  std::map<std::string, std::set<std::string>> accounts;
  for (const auto& p : posts) {
    auto it = by_handle.find(p.account);
    if (it == by_handle.end()) throw ValidationError("unknown account: " + p.account);
    const std::string& group = it->second->group;
    ++post_counts[group];
    accounts[group].insert(p.account);
  }

  GroupStats stats;
  stats.total.group = "TOTAL";
  for (const auto& [group, count] : post_counts) {
    GroupRow row{group, count, accounts[group].size()};
    stats.total.posts += row.posts;
    stats.total.accounts += row.accounts;
    stats.rows.push_back(std::move(row));
  }
  return stats;
}

void write_stats_csv(std::ostream& out, const GroupStats& stats) {
  out << "group,posts,accounts,average\n";
  if (stats.rows.empty()) return;
  auto line = [&out](const GroupRow& r) {
    out << csv_field(r.group) << ',' << r.posts << ',' << r.accounts << ',' << r.average(2) << '\n';
  };
  for (const auto& r : stats.rows) line(r);
  line(stats.total);
}

}  // namespace topicmine
