#include "topicmine/http_source.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace topicmine::harvest {

namespace {

std::string url_encode(const std::string& s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
        c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

}  // namespace

HttpPostSource::HttpPostSource(std::string base_url, std::string bearer_token) : token_(std::move(bearer_token)) {
  constexpr std::string_view kScheme = "http://";
  if (!base_url.starts_with(kScheme)) throw ValidationError("live source URL must start with http://: " + base_url);
  std::string rest = base_url.substr(kScheme.size());
  const auto slash = rest.find('/');
  std::string authority = rest.substr(0, slash);
  prefix_ = slash == std::string::npos ? "" : rest.substr(slash);
  while (prefix_.ends_with('/')) prefix_.pop_back();
  if (const auto colon = authority.rfind(':'); colon != std::string::npos) {
    try {
      port_ = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      throw ValidationError("bad port in live source URL: " + base_url);
    }
    authority.erase(colon);
  }
  if (authority.empty()) throw ValidationError("missing host in live source URL: " + base_url);
  host_ = std::move(authority);
}

HttpPostSource::~HttpPostSource() = default;

std::unique_ptr<HttpPostSource> HttpPostSource::from_environment(const std::string& base_url) {
  const char* token = std::getenv(kBearerTokenEnv);
  if (token == nullptr || *token == '\0')
    throw ValidationError(std::string("live source needs ") + kBearerTokenEnv + " to be set");
  return std::make_unique<HttpPostSource>(base_url, token);
}

std::string HttpPostSource::get(const std::string& path, const std::string& handle) {
  // One client per request keeps the source safe to share across threads.
  httplib::Client client(host_, port_);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  const httplib::Headers headers = {{"Authorization", "Bearer " + token_}};
  auto res = client.Get(prefix_ + path, headers);
  if (!res) throw TransportFailure("request failed for " + handle + ": " + httplib::to_string(res.error()));
  if (res->status == 429) throw RateLimited("rate limited fetching " + handle);
  if (res->status == 404) throw UnknownAccount("unknown account " + handle);
  if (res->status < 200 || res->status >= 300)
    throw TransportFailure("HTTP " + std::to_string(res->status) + " fetching " + handle);
  return res->body;
}

Page HttpPostSource::fetch_page(const std::string& handle, const std::optional<std::string>& cursor,
                                std::size_t limit) {
  std::string path = "/accounts/" + url_encode(handle) + "/posts?limit=" + std::to_string(limit);
  if (cursor) path += "&cursor=" + url_encode(*cursor);
  const std::string body = get(path, handle);

  Page page;
  try {
    const auto j = nlohmann::json::parse(body);
    std::size_t i = 0;
    for (const auto& rec : j.at("posts")) {
      ++i;
      nlohmann::json r = rec;
      if (!r.contains("account")) r["account"] = handle;
      if (!r.contains("group")) r["group"] = "";
      page.posts.push_back(parse_post_line(r.dump(), "response for " + handle, i));
    }
    const auto& next = j.at("next_cursor");
    if (!next.is_null()) page.next = next.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportFailure("malformed response for " + handle + ": " + e.what());
  } catch (const ParseError& e) {
    throw TransportFailure(std::string("malformed post in response: ") + e.what());
  }
  return page;
}

std::size_t HttpPostSource::post_count(const std::string& handle) {
  const std::string body = get("/accounts/" + url_encode(handle) + "/count", handle);
  try {
    return nlohmann::json::parse(body).at("post_count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportFailure("malformed count response for " + handle + ": " + e.what());
  }
}

}  // namespace topicmine::harvest
