#include "httplib.h"
#include "instructkit/backends.hpp"
#include "instructkit/error.hpp"

namespace ik::teacher {

HttpBackend::HttpBackend(HttpConfig config) : config_(std::move(config)) {
  if (config_.url.empty()) {
    throw ValidationError("teacher", "live backend needs an endpoint URL (INSTRUCTKIT_TEACHER_URL)");
  }
  const auto scheme_end = config_.url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("teacher", "endpoint URL lacks a scheme: " + config_.url);
  const auto path_start = config_.url.find('/', scheme_end + 3);
  origin_ = config_.url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : config_.url.substr(path_start);
}

json HttpBackend::request_body(const ChatRequest& r) {
  return json{{"model", r.config.model},
              {"messages", json::array({json{{"role", "user"}, {"content", r.prompt}}})},
              {"temperature", r.config.temperature},
              {"top_p", r.config.top_p},
              {"max_tokens", r.config.max_tokens}};
}

std::string HttpBackend::parse_reply(const std::string& body) {
  try {
    const json j = json::parse(body);
    const json& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw ProtocolError("reply content is not a string", body);
    return content.get<std::string>();
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed chat-completion reply: ") + e.what(), body);
  }
}

std::string HttpBackend::chat(const ChatRequest& request) {
  // A client per call: httplib clients are not safe for concurrent use.
  httplib::Client client(origin_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  const std::string body = request_body(request).dump(-1, ' ', false, json::error_handler_t::replace);
  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) throw RetryableError("transport failure: " + httplib::to_string(res.error()), false);
  if (res->status == 429) throw RetryableError("rate limited (HTTP 429)", true);
  if (res->status >= 500) throw RetryableError("server error (HTTP " + std::to_string(res->status) + ")", false);
  if (res->status != 200) throw ProtocolError("unexpected HTTP status " + std::to_string(res->status), res->body);
  return parse_reply(res->body);
}

}  // namespace ik::teacher
