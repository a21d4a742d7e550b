#pragma once

#include <memory>
#include <optional>
#include <string>

#include "laughboard/judge/llm_judge.hpp"

namespace spdlog {
class logger;
}

namespace laughboard::judge {

struct HttpTransportOptions {
  // Base URL such as "https://api.example.com/v1"; "/chat/completions" is
  // appended unless already present.
  std::string endpoint_url;
  std::optional<std::string> auth_env_var;
  double timeout_seconds = 60.0;
  // Logs request and response bodies at info level, credentials redacted.
  bool trace = false;
  std::shared_ptr<spdlog::logger> logger;  // default logger when null
};

// OpenAI-style chat completion over HTTP(S). A fresh connection per call
// keeps it safe to share between worker threads.
class HttpChatTransport final : public ChatTransport {
 public:
  explicit HttpChatTransport(HttpTransportOptions options);

  std::string complete(const ChatRequest& request) override;

  const std::string& origin() const { return origin_; }
  const std::string& path() const { return path_; }

 private:
  HttpTransportOptions options_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
  std::string token_;
};

}  // namespace laughboard::judge
