#include "jdbench/http.hpp"

#include <cstdlib>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "jdbench/common.hpp"

namespace jdbench {

ParsedUrl parse_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("not an absolute URL: " + url);
  auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ConfigError("unsupported URL scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  if (path_start == std::string::npos) {
    out.scheme_host_port = url;
    out.path = "/";
  } else {
    out.scheme_host_port = url.substr(0, path_start);
    out.path = url.substr(path_start);
  }
  if (out.scheme_host_port.size() <= scheme_end + 3) throw ConfigError("URL has no host: " + url);
  return out;
}

HttpResponse HttplibTransport::post_json(const std::string& url, const std::string& body,
                                         const HttpHeaders& headers, double timeout_seconds) {
  auto parsed = parse_url(url);
  httplib::Client client(parsed.scheme_host_port);
  const auto sec = static_cast<time_t>(timeout_seconds);
  const auto usec = static_cast<time_t>((timeout_seconds - static_cast<double>(sec)) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);

  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  auto res = client.Post(parsed.path, h, body, "application/json");

  HttpResponse out;
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.status = res->status;
  out.body = res->body;
  return out;
}

std::shared_ptr<HttpTransport> default_transport() {
  return std::make_shared<HttplibTransport>();
}

HttpHeaders auth_headers(const std::string& env_name) {
  if (env_name.empty()) return {};
  const char* value = std::getenv(env_name.c_str());
  if (!value || !*value) {
    throw ConfigError("environment variable " + env_name + " is not set");
  }
  return {{"Authorization", std::string("Bearer ") + value}};
}

}  // namespace jdbench
