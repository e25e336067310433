#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace jdbench {

struct HttpResponse {
  int status = 0;  // 0 when the request never got a response
  std::string body;
  std::string error;

  bool transport_failure() const { return status == 0; }
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post_json(const std::string& url, const std::string& body,
                                 const HttpHeaders& headers, double timeout_seconds) = 0;
};

// cpp-httplib backed transport. Accepts http:// and https:// URLs.
class HttplibTransport : public HttpTransport {
 public:
  HttpResponse post_json(const std::string& url, const std::string& body,
                         const HttpHeaders& headers, double timeout_seconds) override;
};

std::shared_ptr<HttpTransport> default_transport();

struct ParsedUrl {
  std::string scheme_host_port;  // "https://api.example.com:443"
  std::string path;              // "/v1/chat/completions"
};

// Throws ConfigError for anything that is not an absolute http(s) URL.
ParsedUrl parse_url(const std::string& url);

// Authorization header from an environment variable. Empty env_name means no
// auth; a named but unset variable is a ConfigError.
HttpHeaders auth_headers(const std::string& env_name);

}  // namespace jdbench
