#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "topicmine/harvest.hpp"
#include "topicmine/post.hpp"
#include "topicmine/tokenizer.hpp"

namespace topicmine {

using WordId = std::uint32_t;

class Vocabulary {
 public:
  // Returns the existing id or assigns the next dense id.
  WordId add(const std::string& token);

  std::optional<WordId> find(const std::string& token) const;
  WordId id_of(const std::string& token) const;  // throws ValidationError if absent
  const std::string& token_of(WordId id) const { return tokens_.at(id); }

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::unordered_map<std::string, WordId> ids_;
  std::vector<std::string> tokens_;
};

struct Document {
  std::string post_id;
  std::string account;
  std::string group;
  std::vector<WordId> word_ids;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  Vocabulary vocabulary;
  std::vector<Document> documents;
  std::map<std::string, std::vector<std::size_t>> group_index;

  std::size_t num_documents() const { return documents.size(); }
  std::size_t num_tokens() const;

  // Rebuilds group_index from the documents' group fields.
  void index_groups();

  bool operator==(const Corpus&) const = default;
};

struct BuildReport {
  std::size_t posts_in = 0;
  std::size_t documents = 0;
  std::size_t dropped_empty = 0;
  std::size_t tokens = 0;
};

// Keeps the first occurrence of each (account, text) pair; order preserved.
std::vector<RawPost> dedupe(const std::vector<RawPost>& posts);

// Tokenizes posts (in parallel), then assigns vocabulary ids in a single
// first-appearance pass over posts in input order. Posts that tokenize to
// nothing are dropped and counted in the report.
Corpus build_corpus(const std::vector<RawPost>& posts, const TokenizerConfig& config,
                    BuildReport* report = nullptr);

struct GroupRow {
  std::string group;
  std::uint64_t posts = 0;
  std::uint64_t accounts = 0;

  // Exact average rendered at `decimals` places (half-up).
  std::string average(int decimals = 2) const;
  double average_value() const;
};

struct GroupStats {
  std::vector<GroupRow> rows;  // sorted by group code
  GroupRow total;              // group == "TOTAL"; column sums
};

// Per-group post counts and distinct posting accounts. Every post's account
// must be in the manifest; its group is taken from the manifest entry.
GroupStats corpus_stats(const std::vector<RawPost>& posts,
                        const std::vector<harvest::AccountEntry>& manifest);

// CSV `group,posts,accounts,average` plus a TOTAL row, averages at 2 d.p.
void write_stats_csv(std::ostream& out, const GroupStats& stats);

}  // namespace topicmine
