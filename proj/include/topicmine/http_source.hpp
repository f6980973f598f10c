#pragma once

#include <memory>
#include <string>

#include "topicmine/harvest.hpp"

namespace topicmine::harvest {

// Live source speaking a small JSON-over-HTTP protocol:
//
//   GET {base}/accounts/{handle}/count
//       -> {"post_count": N}
//   GET {base}/accounts/{handle}/posts?limit=L[&cursor=C]
//       -> {"posts": [<post record>...], "next_cursor": "C2" | null}
//
// Every request carries `Authorization: Bearer <token>`. Status 429 maps to
// RateLimited, 404 to UnknownAccount, anything else non-2xx (or no response)
// to TransportFailure. Only plain http:// base URLs are supported.
class HttpPostSource : public PostSource {
 public:
  HttpPostSource(std::string base_url, std::string bearer_token);
  ~HttpPostSource() override;

  // Reads the token from HARVEST_BEARER_TOKEN; throws ValidationError if unset.
  static std::unique_ptr<HttpPostSource> from_environment(const std::string& base_url);

  Page fetch_page(const std::string& handle, const std::optional<std::string>& cursor,
                  std::size_t limit) override;
  std::size_t post_count(const std::string& handle) override;

 private:
  std::string get(const std::string& path, const std::string& handle);

  std::string host_;
  int port_ = 80;
  std::string prefix_;
  std::string token_;
};

inline constexpr const char* kBearerTokenEnv = "HARVEST_BEARER_TOKEN";

}  // namespace topicmine::harvest
