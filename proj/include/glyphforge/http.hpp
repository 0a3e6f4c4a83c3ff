#pragma once

#include <string>

#include "httplib.h"
#include "json.hpp"

#include "glyphforge/core.hpp"

namespace glyphforge::http {

// "http://host:port/path" -> ("http://host:port", "/path").
struct Endpoint {
  std::string origin;
  std::string path;

  static Endpoint parse(const std::string& url, const std::string& stage) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) fail(ErrorKind::config, stage, "endpoint '" + url + "' lacks a scheme");
    const auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
  }
};

struct PostOptions {
  int max_attempts = 3;
  int timeout_seconds = 120;
};

// POSTs a JSON body and returns the parsed JSON response. Connection failures
// and 5xx responses are retried up to max_attempts, then surface as a
// TransportError carrying the attempt count. 4xx and unparsable bodies are
// protocol errors.
inline nlohmann::json post_json(const std::string& url, const nlohmann::json& body, const std::string& stage,
                                const PostOptions& options = {}) {
  const auto ep = Endpoint::parse(url, stage);
  const std::string payload = body.dump();
  std::string last_error;
  int attempt = 0;
  while (attempt < options.max_attempts) {
    ++attempt;
    httplib::Client client(ep.origin);
    client.set_connection_timeout(options.timeout_seconds, 0);
    client.set_read_timeout(options.timeout_seconds, 0);
    client.set_write_timeout(options.timeout_seconds, 0);
    auto res = client.Post(ep.path, payload, "application/json");
    if (!res) {
      last_error = "request to " + url + " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server returned HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      fail(ErrorKind::protocol, stage, "server returned HTTP " + std::to_string(res->status) + ": " + res->body);
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::protocol, stage, std::string("response is not valid JSON: ") + e.what());
    }
  }
  throw TransportError(stage, last_error + " (after " + std::to_string(attempt) + " attempts)", attempt);
}

}  // namespace glyphforge::http
