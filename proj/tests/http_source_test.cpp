#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "topicmine/error.hpp"
#include "topicmine/http_source.hpp"

using namespace topicmine;
using namespace topicmine::harvest;

namespace {

// In-process fake of the live source: one account "@lib" with `total` posts
// served newest-first, numeric cursors, optional 429 on the first N page calls.
class FakeServer {
 public:
  explicit FakeServer(int total, int rate_limit_first = 0) : total_(total), throttle_(rate_limit_first) {
    server_.Get(R"(/api/accounts/([^/]+)/count)", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, res)) return;
      if (req.matches[1] != "%40lib" && req.matches[1] != "@lib") {
        res.status = 404;
        return;
      }
      res.set_content(nlohmann::json{{"post_count", total_}}.dump(), "application/json");
    });
    server_.Get(R"(/api/accounts/([^/]+)/posts)", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, res)) return;
      if (throttle_ > 0) {
        --throttle_;
        res.status = 429;
        return;
      }
      const int limit = std::stoi(req.get_param_value("limit"));
      const int start = req.has_param("cursor") ? std::stoi(req.get_param_value("cursor")) : 0;
      nlohmann::json posts = nlohmann::json::array();
      for (int i = start; i < std::min(total_, start + limit); ++i)
        posts.push_back({{"id", std::to_string(total_ - i)}, {"text", "post " + std::to_string(total_ - i)}});
      const int next = start + limit;
      nlohmann::json body{{"posts", posts}, {"next_cursor", nullptr}};
      if (next < total_) body["next_cursor"] = std::to_string(next);
      ++pages_;
      res.set_content(body.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/api"; }
  int pages() const { return pages_; }
  int unauthorized() const { return unauthorized_; }

 private:
  bool authorized(const httplib::Request& req, httplib::Response& res) {
    if (req.get_header_value("Authorization") != "Bearer s3cret") {
      ++unauthorized_;
      res.status = 401;
      return false;
    }
    return true;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  int total_;
  std::atomic<int> throttle_;
  std::atomic<int> pages_{0};
  std::atomic<int> unauthorized_{0};
};

}  // namespace

TEST_CASE("HttpPostSource pages through a live endpoint") {
  FakeServer server(25);
  HttpPostSource source(server.url(), "s3cret");
  CHECK(source.post_count("@lib") == 25);

  FetchPolicy policy;
  policy.page_size = 10;
  const auto posts = fetch_account({"Lib", "OR", "@lib"}, policy, source, [](auto) {});
  REQUIRE(posts.size() == 25);
  CHECK(posts.front().id == "25");
  CHECK(posts.back().id == "1");
  CHECK(posts.front().account == "@lib");
  CHECK(posts.front().group == "OR");
  CHECK(server.pages() == 3);
  CHECK(server.unauthorized() == 0);
}

TEST_CASE("HttpPostSource status mapping") {
  FakeServer server(5, 2);
  SUBCASE("429 is retried") {
    HttpPostSource source(server.url(), "s3cret");
    int sleeps = 0;
    const auto posts = fetch_account({"Lib", "OR", "@lib"}, FetchPolicy{}, source, [&](auto) { ++sleeps; });
    CHECK(posts.size() == 5);
    CHECK(sleeps == 2);
  }
  SUBCASE("404 is an unknown account") {
    HttpPostSource source(server.url(), "s3cret");
    CHECK_THROWS_AS(source.post_count("@other"), UnknownAccount);
  }
  SUBCASE("wrong token is a transport failure") {
    HttpPostSource source(server.url(), "nope");
    CHECK_THROWS_AS(source.post_count("@lib"), TransportFailure);
  }
}

TEST_CASE("HttpPostSource configuration") {
  CHECK_THROWS_AS(HttpPostSource("https://example.org", "t"), ValidationError);
  CHECK_THROWS_AS(HttpPostSource("http://", "t"), ValidationError);
  CHECK_THROWS_AS(HttpPostSource("http://host:port", "t"), ValidationError);

  ::unsetenv(kBearerTokenEnv);
  CHECK_THROWS_WITH_AS(HttpPostSource::from_environment("http://127.0.0.1:1"), doctest::Contains(kBearerTokenEnv),
                       ValidationError);
  ::setenv(kBearerTokenEnv, "s3cret", 1);
  CHECK(HttpPostSource::from_environment("http://127.0.0.1:1") != nullptr);
  ::unsetenv(kBearerTokenEnv);

  HttpPostSource closed("http://127.0.0.1:1", "t");
  CHECK_THROWS_AS(closed.post_count("@lib"), TransportFailure);
}
