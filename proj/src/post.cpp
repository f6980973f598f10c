#include "topicmine/post.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "topicmine/error.hpp"

namespace topicmine {

namespace {

std::string required_string(const nlohmann::json& j, const char* key, const std::string& source,
                            std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(source, line_no, std::string("missing field '") + key + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer() || it->is_number_unsigned()) return it->dump();
  throw ParseError(source, line_no, std::string("field '") + key + "' must be a string");
}

}  // namespace

RawPost parse_post_line(const std::string& line, const std::string& source_name, std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source_name, line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(source_name, line_no, "record must be a JSON object");

  RawPost post;
  post.id = required_string(j, "id", source_name, line_no);
  post.account = required_string(j, "account", source_name, line_no);
  post.group = required_string(j, "group", source_name, line_no);
  post.text = required_string(j, "text", source_name, line_no);
  if (auto it = j.find("created_at"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(source_name, line_no, "field 'created_at' must be a string");
    post.created_at = it->get<std::string>();
  }
  return post;
}

std::vector<RawPost> read_posts(std::istream& in, const std::string& source_name) {
  std::vector<RawPost> posts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    posts.push_back(parse_post_line(line, source_name, line_no));
  }
  return posts;
}

std::vector<RawPost> read_posts(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open posts file " + path.string());
  return read_posts(in, path.string());
}

void write_post(std::ostream& out, const RawPost& post) {
  nlohmann::ordered_json j;
  j["id"] = post.id;
  j["account"] = post.account;
  j["group"] = post.group;
  j["text"] = post.text;
  if (post.created_at) j["created_at"] = *post.created_at;
  out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

void write_posts(std::ostream& out, const std::vector<RawPost>& posts) {
  for (const auto& p : posts) write_post(out, p);
}

void write_posts(const std::filesystem::path& path, const std::vector<RawPost>& posts) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  write_posts(out, posts);
  if (!out) throw RuntimeFailure("write failed: " + path.string());
}

}  // namespace topicmine
