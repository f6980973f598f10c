#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace topicmine {

// One harvested post. `text` may be empty; empty documents are dropped when
// the corpus is built.
struct RawPost {
  std::string id;
  std::string account;
  std::string group;
  std::string text;
  std::optional<std::string> created_at;  // ISO-8601 UTC

  bool operator==(const RawPost&) const = default;
};

// Post file format: one JSON object per line with fields id, account, group,
// text and optional created_at. Blank lines are skipped. Numeric ids are
// accepted and kept as their decimal text.
std::vector<RawPost> read_posts(std::istream& in, const std::string& source_name = "<stream>");
std::vector<RawPost> read_posts(const std::filesystem::path& path);

void write_post(std::ostream& out, const RawPost& post);
void write_posts(std::ostream& out, const std::vector<RawPost>& posts);
void write_posts(const std::filesystem::path& path, const std::vector<RawPost>& posts);

RawPost parse_post_line(const std::string& line, const std::string& source_name, std::size_t line_no);

}  // namespace topicmine
