#include "laughboard/judge/http_transport.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

namespace laughboard::judge {

namespace {

constexpr std::string_view kCompletionsPath = "/chat/completions";

}  // namespace

HttpChatTransport::HttpChatTransport(HttpTransportOptions options) : options_(std::move(options)) {
  const std::string& url = options_.endpoint_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("endpoint_url needs a scheme: '" + url + "'");
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ValidationError("unsupported scheme '" + scheme + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  if (!path_.ends_with(kCompletionsPath)) path_ += kCompletionsPath;

  if (options_.auth_env_var) {
    const char* value = std::getenv(options_.auth_env_var->c_str());
    if (value == nullptr || *value == '\0') {
      throw ValidationError("environment variable " + *options_.auth_env_var + " is not set");
    }
    token_ = value;
  }
  if (!options_.logger) options_.logger = spdlog::default_logger();
}

std::string HttpChatTransport::complete(const ChatRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = request.model;
  body["messages"] = nlohmann::ordered_json::array({
      {{"role", "system"}, {"content", request.system_text}},
      {{"role", "user"}, {"content", request.user_text}},
  });
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  const std::string payload = body.dump();

  httplib::Client client(origin_);
  const auto timeout = std::chrono::duration<double>(options_.timeout_seconds);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

  if (options_.trace) {
    options_.logger->info("POST {}{} auth={} body={}", origin_, path_, token_.empty() ? "none" : "Bearer ***",
                          payload);
  }
  const auto result = client.Post(path_, headers, payload, "application/json");
  if (!result) throw TransportError("request to " + origin_ + path_ + " failed: " + httplib::to_string(result.error()));
  if (options_.trace) options_.logger->info("HTTP {} body={}", result->status, result->body);
  if (result->status < 200 || result->status >= 300) {
    throw TransportError("HTTP " + std::to_string(result->status) + " from " + origin_ + path_);
  }

  const auto reply = nlohmann::json::parse(result->body, nullptr, /*allow_exceptions=*/false);
  if (reply.is_discarded()) throw TransportError("response body is not JSON");
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw TransportError("response has no choices[0].message.content");
  }
}

}  // namespace laughboard::judge
